"""Default function catalog used by the verification suites.

Entries span the spectral situations that matter: mass touching the band
endpoints, interior gaps, symmetric and asymmetric supports, triangle
spectra with slow x-decay, and modulates sitting in one half-band.  Tags
say which suites may use an entry; membership is convergence-aware (a
triangle spectrum is excluded from the q-pair pool because its p-th power
line mass diverges at p = 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .evaluate import BandLimitedFunction
from .spectrum import SpectralDensity, make_bump, make_fejer, modulate

_PI = math.pi


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    density: SpectralDensity
    tags: frozenset

    def function(self) -> BandLimitedFunction:
        return BandLimitedFunction(self.density)

    def has(self, tag: str) -> bool:
        return tag in self.tags


def _entry(name, density, *tags):
    return CatalogEntry(name=name, density=density, tags=frozenset(tags))


def default_catalog() -> tuple:
    """The standard 15-entry family; see module docstring for the design."""
    entries = [
        _entry("fejer(pi/2)", make_fejer(_PI / 2.0), "pp", "proj", "equiv"),
    ]
    for eps in (1.0, 0.5, 0.25, 0.125):
        tags = ["pp", "proj"]
        # sums mixing an O(1)-width spectrum with a narrower one are the slow
        # case for |f+g|^q far-field quadrature; the pairing pool sticks to
        # widths >= 1 and leaves the narrow probes to the sweep
        if eps == 1.0:
            tags += ["qpairs", "envelope"]
        entries.append(_entry(f"edge-bump[eps={eps}]k3",
                              make_bump(-_PI, -_PI + eps, 3), *tags, "equiv"))
    for eps in (1.0, 0.5, 0.25, 0.125):
        entries.append(_entry(f"edge-bump[eps={eps}]k5",
                              make_bump(-_PI, -_PI + eps, 5), "pp", "proj"))
    entries += [
        _entry("centered-bump k3", make_bump(-_PI / 2.0, _PI / 2.0, 3),
               "pp", "proj", "qpairs", "envelope", "equiv"),
        _entry("wide-bump[-pi,+pi/2]k5", make_bump(-_PI, _PI / 2.0, 5),
               "pp", "proj", "qpairs", "envelope", "equiv"),
        _entry("split-bump k3", make_bump(-_PI, -_PI / 2.0, 3) + make_bump(_PI / 2.0, _PI, 3),
               "pp", "proj", "qpairs", "equiv"),
        _entry("bump[0,pi]k3", make_bump(0.0, _PI, 3),
               "pp", "proj", "qpairs", "hardy", "equiv"),
        _entry("fejer(pi/4)@+pi/2", modulate(make_fejer(_PI / 4.0), _PI / 2.0),
               "pp", "proj", "hardy", "equiv"),
        _entry("fejer+centered-bump", make_fejer(_PI / 2.0) + make_bump(-_PI / 2.0, _PI / 2.0, 3),
               "pp", "proj", "equiv"),
        # wide bumps reserved for the pairing pool (kept off the growth-bound
        # battery so its row count stays put)
        _entry("bump[-pi,0]k3", make_bump(-_PI, 0.0, 3), "proj", "qpairs"),
        _entry("bump[-pi/4,3pi/4]k3", make_bump(-_PI / 4.0, 3.0 * _PI / 4.0, 3),
               "proj", "qpairs"),
        _entry("bump[-3pi/4,pi/2]k4", make_bump(-3.0 * _PI / 4.0, _PI / 2.0, 4),
               "proj", "qpairs"),
    ]
    return tuple(entries)


def tagged(catalog, tag: str) -> tuple:
    return tuple(e for e in catalog if e.has(tag))


def disk_catalog(p: float, alpha: float):
    """Five disk-side functions for the conformal transfer identity.

    The last entry is the disk pullback of a genuinely band-limited section
    (a modulated triangle spectrum living in the plus half-band), weighted
    for the given (p, alpha); it exercises the identity on the kind of
    function the half-plane decomposition actually produces.
    """
    import numpy as np

    from .conformal import transfer_to_disk

    section = BandLimitedFunction(modulate(make_fejer(_PI / 4.0), _PI))

    def one(w):
        return np.ones_like(np.asarray(w, dtype=complex))

    def ident(w):
        return np.asarray(w, dtype=complex)

    def square(w):
        return np.asarray(w, dtype=complex) ** 2

    def cusp(w):
        return (1.0 - np.asarray(w, dtype=complex)) ** 2.5

    return (
        ("one", one),
        ("w", ident),
        ("w^2", square),
        ("(1-w)^{5/2}", cusp),
        ("fejer-section", transfer_to_disk(lambda z: section.eval_many(z), p, alpha)),
    )
