"""Cayley transform between the upper half-plane and the unit disk, and the
numerical verification of the weighted-area norm transfer it induces.

The map c(z) = (i - z)/(i + z) sends the upper half-plane onto the disk with
c(i) = 0.  Two exact identities drive the norm transfer:

    1 - |c(z)|^2 = 4 y / |z + i|^2,      |c'(z)|^2 = 4 / |z + i|^4,

so substituting w = c(z) in a disk integral with weight (1-|w|^2)^alpha
produces the half-plane weight 4^{alpha+1} y^alpha |z+i|^{-(2 alpha + 4)}.
All complex powers below use the principal branch: z + i and 2i/(1 + w)
keep strictly positive imaginary part on their domains, so the cut along
the negative real axis is never crossed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, InvalidWeightError, PoleError
from .quadrature import integrate_real_line, integrate_unit_disk, integrate_weighted_axis

_IDENTITY_TOL = 1e-12


def cayley(z):
    """c(z) = (i - z)/(i + z); maps the upper half-plane onto the unit disk."""
    zz = np.asarray(z, dtype=complex)
    if np.any(zz == -1j):
        raise PoleError("cayley map has its pole at z = -i")
    out = (1j - zz) / (1j + zz)
    return complex(out) if np.isscalar(z) or np.asarray(z).ndim == 0 else out


def cayley_inverse(w):
    """c^{-1}(w) = i (1 - w)/(1 + w); maps the unit disk onto the half-plane."""
    ww = np.asarray(w, dtype=complex)
    if np.any(ww == -1.0):
        raise PoleError("inverse cayley map has its pole at w = -1")
    out = 1j * (1.0 - ww) / (1.0 + ww)
    return complex(out) if np.isscalar(w) or np.asarray(w).ndim == 0 else out


def cayley_derivative(z):
    """c'(z) = -2i/(i + z)^2."""
    zz = np.asarray(z, dtype=complex)
    if np.any(zz == -1j):
        raise PoleError("cayley map has its pole at z = -i")
    out = -2j / (1j + zz) ** 2
    return complex(out) if np.isscalar(z) or np.asarray(z).ndim == 0 else out


def cayley_identities(z: complex) -> tuple[float, float]:
    """(1 - |c(z)|^2, |c'(z)|^2), self-checked against the closed forms.

    Both quantities are computed directly from the map and from the closed
    forms 4y/|z+i|^2 and 4/|z+i|^4; disagreement beyond 1e-12 relative is a
    consistency failure, not a return value.
    """
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"identities hold on the open upper half-plane, got Im z = {z.imag}")
    direct1 = 1.0 - abs(cayley(z)) ** 2
    direct2 = abs(cayley_derivative(z)) ** 2
    denom = abs(z + 1j) ** 2
    closed1 = 4.0 * z.imag / denom
    closed2 = 4.0 / denom**2
    for a, b, label in ((direct1, closed1, "1-|c|^2"), (direct2, closed2, "|c'|^2")):
        # both quantities lie in [0, 4]; near the boundary the direct
        # subtraction cancels, so the tolerance anchors at the operand scale
        if abs(a - b) > _IDENTITY_TOL * max(1.0, abs(a), abs(b)):
            raise ConsistencyError(
                f"cayley identity {label} mismatch at z={z!r}: direct {a!r} vs closed {b!r}"
            )
    return closed1, closed2


class CayleyMap:
    """The fixed conformal map as an object, for callers that want methods."""

    def __call__(self, z):
        return cayley(z)

    forward = staticmethod(cayley)
    inverse = staticmethod(cayley_inverse)
    derivative = staticmethod(cayley_derivative)
    identities = staticmethod(cayley_identities)


def transfer_to_disk(F, p: float, alpha: float):
    """Disk-side twin of a half-plane function for the weighted norm pair.

    Returns g with g(c(z)) (z+i)^{-(2 alpha+4)/p} 4^{(alpha+1)/p} = F(z), so
    the disk norm of g with weight (1-|w|^2)^alpha equals the weighted
    half-plane integral of |F|^p y^alpha.  Uses c^{-1}(w) + i = 2i/(1+w).
    """
    power = (2.0 * alpha + 4.0) / p
    scale = 4.0 ** (-(alpha + 1.0) / p)

    def g(w):
        w = np.asarray(w, dtype=complex)
        z = cayley_inverse(w)
        factor = (2j / (1.0 + w)) ** power
        return scale * np.asarray(F(z), dtype=complex) * factor

    return g


@dataclass(frozen=True)
class TransferReport:
    """Both sides of the disk/half-plane transfer identity and their gap."""

    p: float
    alpha: float
    disk_value: float
    halfplane_value: float
    error_budget: float

    @property
    def abs_gap(self) -> float:
        return abs(self.disk_value - self.halfplane_value)

    @property
    def rel_gap(self) -> float:
        scale = max(abs(self.disk_value), abs(self.halfplane_value))
        return self.abs_gap / scale if scale > 0 else 0.0

    @property
    def consistent(self) -> bool:
        return self.abs_gap <= max(self.error_budget, 1e-14)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "alpha": self.alpha,
            "disk_value": self.disk_value,
            "halfplane_value": self.halfplane_value,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "error_budget": self.error_budget,
            "consistent": self.consistent,
        }


def verify_transfer_identity(g, p: float, alpha: float, rel_tol: float = 1e-7,
                             y_cap: float = 1e5) -> TransferReport:
    """Compute the disk mass and its half-plane counterpart for the same g.

    Disk side: integral over the unit disk of |g|^p (1-|w|^2)^alpha.
    Half-plane side: 4^{alpha+1} times the integral over the upper half-plane
    of |g(c(z))|^p y^alpha |z+i|^{-(2 alpha + 4)}.  Agreement is a statement
    about the two independent quadratures, not a definition.
    """
    if not alpha > -1.0:
        raise InvalidWeightError(f"weight exponent must exceed -1, got {alpha}")

    def F_disk(w):
        return np.abs(np.asarray(g(w), dtype=complex)) ** p

    disk = integrate_unit_disk(F_disk, alpha, rel_tol=0.3 * rel_tol, n_radial=64)

    decay = 2.0 * alpha + 4.0

    def line_mass(y):
        def integrand(x):
            z = x + 1j * y
            vals = np.abs(np.asarray(g(cayley(z)), dtype=complex)) ** p
            return vals * np.abs(z + 1j) ** (-decay)

        res = integrate_real_line(
            integrand,
            rel_tol=0.2 * rel_tol,
            core_width=16.0 * (1.0 + y),
            panel_width=0.5 * (1.0 + y),
        )
        return res.value

    def phi(ys):
        return np.array([line_mass(float(yy)) for yy in ys])

    axis = integrate_weighted_axis(phi, alpha, rel_tol=0.3 * rel_tol,
                                   y_break=1.0, y_cap=y_cap)
    half = 4.0 ** (alpha + 1.0) * axis.value
    budget = disk.error + 4.0 ** (alpha + 1.0) * axis.error + 2.0 * rel_tol * max(disk.value, half)
    return TransferReport(p=p, alpha=alpha, disk_value=disk.value,
                          halfplane_value=half, error_budget=budget)
