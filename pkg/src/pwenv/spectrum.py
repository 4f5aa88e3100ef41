"""Compactly supported spectral densities as exact piecewise polynomials.

A density s lives on a closed interval inside [-2*pi, 2*pi] and represents
the entire function f(z) = integral s(t) * exp(i*z*t) dt.  Each piece stores
complex polynomial coefficients in the local variable w = (t - lo)/(hi - lo),
so translation, scaling, pointwise products and sums are exact coefficient
arithmetic; no resampling ever happens.

Derivative jumps across breakpoints are the payload of the representation:
they determine the smoothness class C^k, the guaranteed algebraic decay of
the represented entire function, and an exact large-|z| evaluation formula
(see evaluate.py).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidArgumentError

SPECTRUM_MIN = -2.0 * math.pi
SPECTRUM_MAX = 2.0 * math.pi
DENSITY_FORMAT = "spectral-density/1"

_EDGE_TOL = 1e-12
# Relative threshold below which a derivative jump is treated as exact zero.
# Construction arithmetic is exact; products introduce O(1e-16) dust only.
_JUMP_REL_TOL = 1e-11
_MAX_SMOOTHSTEP_ORDER = 12


def smoothstep_coefficients(k: int) -> np.ndarray:
    """Monomial coefficients of the polynomial smoothstep of order k.

    S_k is the unique degree-(2k+1) polynomial with S_k(0)=0, S_k(1)=1 and
    k vanishing derivatives at both endpoints.  Coefficients are integers,
    so all downstream arithmetic on them is exact in float64.
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise InvalidArgumentError(f"smoothstep order must be an integer >= 0, got {k!r}")
    if k > _MAX_SMOOTHSTEP_ORDER:
        raise InvalidArgumentError(
            f"smoothstep order {k} exceeds the supported range (<= {_MAX_SMOOTHSTEP_ORDER})"
        )
    coeffs = np.zeros(2 * k + 2)
    for n in range(k + 1):
        coeffs[k + 1 + n] = (-1.0) ** n * math.comb(k + n, n) * math.comb(2 * k + 1, k - n)
    return coeffs


def smoothstep(k: int, t):
    """Evaluate the order-k smoothstep, clamped to [0, 1] outside the ramp."""
    coeffs = smoothstep_coefficients(k)
    tt = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    val = np.polynomial.polynomial.polyval(tt, coeffs)
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(val)
    return val


@dataclass(frozen=True)
class SmoothstepProfile:
    """A reusable ramp: order together with its exact coefficient table."""

    order: int

    @property
    def coefficients(self) -> np.ndarray:
        return smoothstep_coefficients(self.order)

    def __call__(self, t):
        return smoothstep(self.order, t)


class Piece(NamedTuple):
    lo: float
    hi: float
    coeffs: np.ndarray  # complex, ascending powers of w = (t - lo)/(hi - lo)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return np.ascontiguousarray(c[: nz[-1] + 1])


def _poly_compose(coeffs: np.ndarray, a0: float, a1: float) -> np.ndarray:
    """Coefficients of p(a0 + a1*w) given coefficients of p (ascending)."""
    P = np.polynomial.polynomial
    res = np.array([coeffs[-1]], dtype=complex)
    for c in coeffs[-2::-1]:
        res = P.polymul(res, np.array([a0, a1]))
        res[0] += c
    return res


class _JumpTable(NamedTuple):
    breakpoints: np.ndarray   # (B,)
    deltas: np.ndarray        # (B, D+1) complex; deltas[b, m] = s^(m)(beta-) - s^(m)(beta+)
    signed: np.ndarray        # (B, D+1) complex; (-1)^m * deltas[b, m]
    first_order: int          # min over breakpoints of the first non-vanishing jump order


class SpectralDensity:
    """Piecewise polynomial density on a compact subset of [-2*pi, 2*pi].

    Pieces are sorted, non-overlapping and may leave gaps (the density is
    zero there).  Instances are immutable value objects; all derived data
    (jump table, smoothness order) is cached idempotently, so unrestricted
    concurrent use is safe.
    """

    __slots__ = ("pieces", "_cache")

    def __init__(self, pieces, validate: bool = True):
        cleaned = []
        for lo, hi, coeffs in pieces:
            lo = float(lo)
            hi = float(hi)
            c = _trim(coeffs)
            if hi - lo <= 0:
                raise InvalidArgumentError(f"piece [{lo}, {hi}] has non-positive length")
            if c.shape == (1,) and c[0] == 0:
                continue
            cleaned.append(Piece(lo, hi, c))
        cleaned.sort(key=lambda p: p.lo)
        if validate:
            for a, b in zip(cleaned, cleaned[1:]):
                if b.lo < a.hi - _EDGE_TOL:
                    raise InvalidArgumentError(
                        f"pieces [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] overlap"
                    )
            if cleaned:
                lo, hi = cleaned[0].lo, cleaned[-1].hi
                if lo < SPECTRUM_MIN - _EDGE_TOL or hi > SPECTRUM_MAX + _EDGE_TOL:
                    raise InvalidArgumentError(
                        f"support [{lo}, {hi}] overflows [{SPECTRUM_MIN}, {SPECTRUM_MAX}]"
                    )
        self.pieces = tuple(cleaned)
        self._cache = {}

    # -- basic structure ---------------------------------------------------

    @staticmethod
    def zero() -> "SpectralDensity":
        return SpectralDensity([], validate=False)

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> tuple[float, float]:
        if self.is_zero:
            return (0.0, 0.0)
        return (self.pieces[0].lo, self.pieces[-1].hi)

    @property
    def max_degree(self) -> int:
        if self.is_zero:
            return 0
        return max(len(p.coeffs) - 1 for p in self.pieces)

    @property
    def breakpoints(self) -> np.ndarray:
        pts = set()
        for p in self.pieces:
            pts.add(p.lo)
            pts.add(p.hi)
        return np.array(sorted(pts))

    def is_real(self) -> bool:
        return all(np.all(p.coeffs.imag == 0.0) for p in self.pieces)

    # -- evaluation & integrals --------------------------------------------

    def __call__(self, t):
        tt = np.asarray(t, dtype=float)
        out = np.zeros(tt.shape, dtype=complex)
        for lo, hi, coeffs in self.pieces:
            mask = (tt >= lo) & (tt <= hi)
            if mask.any():
                w = (tt[mask] - lo) / (hi - lo)
                out[mask] = np.polynomial.polynomial.polyval(w, coeffs)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return complex(out)
        return out

    def integral(self) -> complex:
        """Exact integral of the density over its support."""
        total = 0.0 + 0.0j
        for lo, hi, coeffs in self.pieces:
            j = np.arange(len(coeffs))
            total += (hi - lo) * np.sum(coeffs / (j + 1))
        return complex(total)

    def l2_mass_squared(self) -> float:
        """Exact integral of |s|^2 (coefficient convolution, then integrate)."""
        total = 0.0
        for lo, hi, coeffs in self.pieces:
            prod = np.convolve(coeffs, np.conj(coeffs))
            j = np.arange(len(prod))
            total += float(((hi - lo) * np.sum(prod / (j + 1))).real)
        return total

    def l1_mass(self) -> float:
        """Integral of |s|; exact for real sign-constant pieces, else Gauss."""
        if self.is_zero:
            return 0.0
        key = "l1"
        if key not in self._cache:
            total = 0.0
            x, w = np.polynomial.legendre.leggauss(48)
            x01 = 0.5 * (x + 1.0)
            for lo, hi, coeffs in self.pieces:
                vals = np.polynomial.polynomial.polyval(x01, coeffs)
                total += 0.5 * (hi - lo) * float(np.sum(w * np.abs(vals)))
            self._cache[key] = total
        return self._cache[key]

    # -- derivative jumps ----------------------------------------------------

    def jump_table(self) -> _JumpTable:
        """Derivative jumps s^(m)(b-) - s^(m)(b+) at every breakpoint.

        Jumps below a per-order relative threshold are snapped to exact zero;
        the first surviving order fixes the smoothness class.
        """
        if "jumps" in self._cache:
            return self._cache["jumps"]
        if self.is_zero:
            jt = _JumpTable(np.empty(0), np.empty((0, 1), complex), np.empty((0, 1), complex), 0)
            self._cache["jumps"] = jt
            return jt
        breaks = self.breakpoints
        D = self.max_degree
        left = np.zeros((len(breaks), D + 1), dtype=complex)
        right = np.zeros_like(left)
        scale = np.zeros((len(breaks), D + 1))
        index = {b: i for i, b in enumerate(breaks)}
        for lo, hi, coeffs in self.pieces:
            L = hi - lo
            j = np.arange(len(coeffs))
            for m in range(len(coeffs)):
                perm = np.array([math.perm(int(jj), m) if jj >= m else 0 for jj in j], dtype=float)
                sc = float(np.sum(np.abs(coeffs) * perm)) / L**m
                # value of s^(m) at the right end (w=1) and left end (w=0)
                left[index[hi], m] += np.sum(coeffs * perm) / L**m
                right[index[lo], m] += coeffs[m] * math.factorial(m) / L**m if m < len(coeffs) else 0.0
                scale[index[hi], m] = max(scale[index[hi], m], sc)
                scale[index[lo], m] = max(scale[index[lo], m], sc)
        deltas = left - right
        deltas[np.abs(deltas) <= _JUMP_REL_TOL * (scale + 1e-300)] = 0.0
        keep = np.any(deltas != 0.0, axis=1)
        breaks = breaks[keep]
        deltas = deltas[keep]
        if deltas.size:
            orders = [int(np.nonzero(row)[0][0]) for row in deltas]
            first = min(orders)
        else:
            first = D + 1
        signs = np.array([(-1.0) ** m for m in range(D + 1)])
        jt = _JumpTable(breaks, deltas, deltas * signs[None, :], first)
        self._cache["jumps"] = jt
        return jt

    @property
    def smoothness_order(self) -> int:
        """Largest k with the density in C^k(R): first jumping order minus one."""
        return self.jump_table().first_order - 1

    @property
    def jump_safe_radius(self) -> float:
        """|z| above which the breakpoint-jump evaluation series is well scaled.

        Consecutive jump magnitudes bound the term ratios of the exact
        boundary-term expansion; below this radius quadrature is used instead.
        """
        if "rstar" in self._cache:
            return self._cache["rstar"]
        jt = self.jump_table()
        min_len = min((p.hi - p.lo) for p in self.pieces) if self.pieces else 1.0
        r = max(8.0, 16.0 / min_len)
        for row in jt.deltas:
            top = float(np.max(np.abs(row)))
            # partially cancelled orders (sums of unlike pieces leave dips in
            # the jump profile) contribute next to nothing to the series, so
            # they must not drive the ratio test through their reciprocals
            nz = np.nonzero(np.abs(row) > 1e-6 * top)[0]
            for a, b in zip(nz, nz[1:]):
                ratio = (abs(row[b]) / abs(row[a])) ** (1.0 / (b - a))
                r = max(r, 2.0 * ratio)
        self._cache["rstar"] = r
        return r

    # -- algebra -------------------------------------------------------------

    def scale(self, c) -> "SpectralDensity":
        if c == 0:
            return SpectralDensity.zero()
        return SpectralDensity(
            [(p.lo, p.hi, p.coeffs * complex(c)) for p in self.pieces], validate=False
        )

    def translate(self, a: float) -> "SpectralDensity":
        if self.is_zero:
            return self
        lo, hi = self.support
        if lo + a < SPECTRUM_MIN - _EDGE_TOL or hi + a > SPECTRUM_MAX + _EDGE_TOL:
            raise InvalidArgumentError(
                f"translate by {a} pushes support [{lo}, {hi}] outside "
                f"[{SPECTRUM_MIN}, {SPECTRUM_MAX}]"
            )
        return SpectralDensity(
            [(p.lo + a, p.hi + a, p.coeffs) for p in self.pieces], validate=False
        )

    def _restricted_coeffs(self, lo: float, hi: float) -> np.ndarray | None:
        """Local coefficients on [lo, hi], which must lie inside one piece."""
        for p in self.pieces:
            if p.lo <= lo + _EDGE_TOL and hi <= p.hi + _EDGE_TOL:
                a0 = (lo - p.lo) / (p.hi - p.lo)
                a1 = (hi - lo) / (p.hi - p.lo)
                return _poly_compose(p.coeffs, a0, a1)
        return None

    def __add__(self, other: "SpectralDensity") -> "SpectralDensity":
        if not isinstance(other, SpectralDensity):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        cuts = _merge_cuts(np.concatenate([self.breakpoints, other.breakpoints]))
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            ca = self._restricted_coeffs(lo, hi)
            cb = other._restricted_coeffs(lo, hi)
            if ca is None and cb is None:
                continue
            if ca is None:
                c = cb
            elif cb is None:
                c = ca
            else:
                n = max(len(ca), len(cb))
                c = np.zeros(n, dtype=complex)
                c[: len(ca)] += ca
                c[: len(cb)] += cb
            pieces.append((lo, hi, c))
        return SpectralDensity(pieces, validate=False)

    def __mul__(self, other):
        if isinstance(other, SpectralDensity):
            return multiply_pointwise(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def restrict(self, lo: float, hi: float) -> "SpectralDensity":
        """Truncate to [lo, hi] (pieces clipped exactly)."""
        pieces = []
        for p in self.pieces:
            a, b = max(p.lo, lo), min(p.hi, hi)
            if b - a > _EDGE_TOL:
                pieces.append((a, b, self._restricted_coeffs(a, b)))
        return SpectralDensity(pieces, validate=False)

    def max_abs_outside(self, lo: float, hi: float) -> float:
        """Coefficient-level bound on |s| outside [lo, hi]."""
        worst = 0.0
        for p in self.pieces:
            if p.hi <= lo + _EDGE_TOL or p.lo >= hi - _EDGE_TOL:
                worst = max(worst, float(np.sum(np.abs(p.coeffs))))
            elif p.lo < lo - _EDGE_TOL or p.hi > hi + _EDGE_TOL:
                a, b = (p.lo, lo) if p.lo < lo - _EDGE_TOL else (hi, p.hi)
                c = self._restricted_coeffs(max(a, p.lo), min(b, p.hi))
                worst = max(worst, float(np.sum(np.abs(c))))
        return worst

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        a, b = self.support
        return {
            "format": DENSITY_FORMAT,
            "support": [a, b],
            "smoothness": int(self.smoothness_order) if not self.is_zero else 0,
            "pieces": [
                {
                    "interval": [p.lo, p.hi],
                    "re_coeffs": [float(x) for x in p.coeffs.real],
                    "im_coeffs": [float(x) for x in p.coeffs.imag],
                }
                for p in self.pieces
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @staticmethod
    def from_json_dict(data: dict) -> "SpectralDensity":
        if data.get("format") != DENSITY_FORMAT:
            raise InvalidArgumentError(f"unknown density format {data.get('format')!r}")
        pieces = []
        for item in data["pieces"]:
            lo, hi = item["interval"]
            re = np.asarray(item["re_coeffs"], dtype=float)
            im = np.asarray(item["im_coeffs"], dtype=float)
            if re.shape != im.shape:
                raise InvalidArgumentError("re_coeffs and im_coeffs length mismatch")
            pieces.append((lo, hi, re + 1j * im))
        return SpectralDensity(pieces)

    @staticmethod
    def from_json(text: str) -> "SpectralDensity":
        return SpectralDensity.from_json_dict(json.loads(text))

    def __repr__(self):
        a, b = self.support
        return f"SpectralDensity(support=[{a:.6g}, {b:.6g}], pieces={len(self.pieces)})"


# -- constructors ------------------------------------------------------------


def make_bump(a: float, b: float, k: int) -> SpectralDensity:
    """C^k bump supported exactly on [a, b], equal to 1 on the middle third.

    Ramps are order-k smoothsteps over the outer thirds, so the profile and
    its first k derivatives vanish at both endpoints.
    """
    if not (b > a):
        raise InvalidArgumentError(f"bump needs b > a, got [{a}, {b}]")
    if a < SPECTRUM_MIN - _EDGE_TOL or b > SPECTRUM_MAX + _EDGE_TOL:
        raise InvalidArgumentError(f"bump support [{a}, {b}] overflows the spectral band")
    ramp = smoothstep_coefficients(k).astype(complex)
    h = (b - a) / 3.0
    down = _poly_compose(ramp, 1.0, -1.0)  # S_k(1 - w)
    return SpectralDensity(
        [
            (a, a + h, ramp),
            (a + h, b - h, np.array([1.0 + 0.0j])),
            (b - h, b, down),
        ],
        validate=False,
    )


def make_fejer(a: float) -> SpectralDensity:
    """Triangle density on [-2a, 2a] scaled so f(x) = (sin(a x)/(a x))^2.

    Height 1/(2a); total mass 1, hence f(0) = 1.
    """
    if not (0.0 < a <= math.pi / 2 + _EDGE_TOL):
        raise InvalidArgumentError(f"triangle half-type a must lie in (0, pi/2], got {a}")
    h = 1.0 / (2.0 * a)
    return SpectralDensity(
        [
            (-2.0 * a, 0.0, np.array([0.0, h], dtype=complex)),
            (0.0, 2.0 * a, np.array([h, -h], dtype=complex)),
        ],
        validate=False,
    )


def modulate(density: SpectralDensity, a: float) -> SpectralDensity:
    """Shift the spectrum by a; the represented function becomes e^{iaz} f(z)."""
    return density.translate(float(a))


def _merge_cuts(cuts: np.ndarray) -> np.ndarray:
    """Sorted unique cuts with float twins collapsed.

    The same breakpoint reached along two arithmetic routes (pi/2 + pi/6
    versus 2*pi/3, say) lands on neighbouring floats; keeping both would
    create slivers whose 1/length factors poison every downstream scale
    estimate, so anything closer than rounding noise is one cut.
    """
    cuts = np.unique(cuts)
    span = float(cuts[-1] - cuts[0]) if len(cuts) > 1 else 0.0
    tol = 1e-12 * max(span, abs(float(cuts[0])), abs(float(cuts[-1])), 1e-300)
    merged = [float(cuts[0])]
    for c in cuts[1:]:
        c = float(c)
        if c - merged[-1] <= tol:
            merged[-1] = c
        else:
            merged.append(c)
    return np.asarray(merged)


def multiply_pointwise(s: SpectralDensity, m: SpectralDensity) -> SpectralDensity:
    """Exact pointwise product; empty support intersection gives the zero density."""
    if s.is_zero or m.is_zero:
        return SpectralDensity.zero()
    lo = max(s.support[0], m.support[0])
    hi = min(s.support[1], m.support[1])
    if hi - lo <= _EDGE_TOL:
        return SpectralDensity.zero()
    cuts = _merge_cuts(np.concatenate([s.breakpoints, m.breakpoints]))
    cuts = cuts[(cuts >= lo - _EDGE_TOL) & (cuts <= hi + _EDGE_TOL)]
    pieces = []
    for u, v in zip(cuts, cuts[1:]):
        ca = s._restricted_coeffs(u, v)
        cb = m._restricted_coeffs(u, v)
        if ca is None or cb is None:
            continue
        pieces.append((u, v, np.convolve(ca, cb)))
    if not pieces:
        return SpectralDensity.zero()
    return SpectralDensity(pieces, validate=False)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Pair (phi_hat, psi_hat) with phi_hat + psi_hat = 1 on [-pi, pi].

    supp phi_hat = [-2*pi, pi], supp psi_hat = [-pi, 2*pi]; the overlap ramp
    lives on [0, pi] so the partition identity there is coefficient-exact.
    """

    phi_hat: SpectralDensity
    psi_hat: SpectralDensity
    overlap_smoothness: int

    def identity_defect(self, n: int = 4096) -> float:
        t = np.linspace(-math.pi, math.pi, n)
        return float(np.max(np.abs(self.phi_hat(t) + self.psi_hat(t) - 1.0)))


def make_partition(k: int) -> PartitionOfUnity:
    """Order-k partition of unity adapted to the band [-pi, pi].

    phi_hat ramps up over [-2*pi, -3*pi/2], is 1 on [-3*pi/2, 0] and ramps
    down over [0, pi]; psi_hat mirrors it so that the two ramps on [0, pi]
    are S_k and 1 - S_k with integer coefficients, cancelling exactly.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidArgumentError(f"partition smoothness must be an integer >= 1, got {k!r}")
    pi = math.pi
    delta = pi / 2.0  # construction margin at the outer edges
    up = smoothstep_coefficients(k).astype(complex)
    down_unit = _poly_compose(up, 1.0, -1.0)  # S_k(1 - w)
    one_minus_up = -up.copy()
    one_minus_up[0] += 1.0
    phi = SpectralDensity(
        [
            (-2.0 * pi, -2.0 * pi + delta, up),
            (-2.0 * pi + delta, 0.0, np.array([1.0 + 0.0j])),
            (0.0, pi, one_minus_up),
        ],
        validate=False,
    )
    psi = SpectralDensity(
        [
            (0.0, pi, up),
            (pi, 2.0 * pi - delta, np.array([1.0 + 0.0j])),
            (2.0 * pi - delta, 2.0 * pi, down_unit),
        ],
        validate=False,
    )
    return PartitionOfUnity(phi_hat=phi, psi_hat=psi, overlap_smoothness=int(k))
