"""Shared quadrature engines for line, weighted-axis and disk integrals.

Three problem shapes keep recurring:

* whole-line integrals of non-negative integrands with algebraic tails
  (p-th power line masses of band-limited functions),
* integrals over y in (0, inf) with a |y|^alpha endpoint weight, an
  exponential factor and an eventually geometric decay profile,
* area integrals over the unit disk with a (1 - |w|^2)^alpha weight.

All tolerances are relative and every acceptance threshold scales with the
running total, so multiplying the integrand by a constant reproduces the
identical node set; exact scale equivariance of the results is relied on by
the homogeneity checks downstream.

Tails are never truncated silently: the last two octave masses fit a
geometric model whose extrapolated remainder is added to the result, and
the doubling stops only once that model itself has stabilised.  If the
masses refuse to decay before the domain cap, a DivergesError carries the
measured growth ratio out to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import DivergesError, InvalidArgumentError

_leggauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_jacobi_cache: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _leggauss_cache:
        _leggauss_cache[n] = np.polynomial.legendre.leggauss(n)
    return _leggauss_cache[n]


def gauss_jacobi(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for weight (1-x)^alpha (1+x)^beta on [-1, 1]."""
    key = (n, float(alpha), float(beta))
    if key not in _jacobi_cache:
        _jacobi_cache[key] = roots_jacobi(n, alpha, beta)
    return _jacobi_cache[key]


# -- adaptive panels on a bounded interval ------------------------------------

_RULE_LO, _RULE_HI = 12, 24


def _panel_sums(g, centers, halfw, n):
    x, w = gauss_legendre(n)
    pts = centers[:, None] + halfw[:, None] * x[None, :]
    vals = np.asarray(g(pts.ravel()), dtype=float).reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        raise DivergesError("integrand overflowed or returned non-finite values")
    return halfw * (vals @ w), vals


def _adaptive_bounded(g, edges, abs_tol, max_rounds=42):
    """Integrate g over the union of [edges[i], edges[i+1]] panels.

    Embedded 12/24-point Gauss pairs give per-panel error estimates; panels
    holding the bulk of the estimate are bisected, whole rounds batched into
    single integrand calls.  Returns (value, error_estimate, n_evals).
    """
    centers = 0.5 * (edges[:-1] + edges[1:])
    halfw = 0.5 * (edges[1:] - edges[:-1])
    n_evals = 0
    vals_lo, _ = _panel_sums(g, centers, halfw, _RULE_LO)
    vals_hi, _ = _panel_sums(g, centers, halfw, _RULE_HI)
    n_evals += centers.size * (_RULE_LO + _RULE_HI)
    sums = vals_hi
    ests = np.abs(vals_hi - vals_lo)
    for _ in range(max_rounds):
        total_est = float(np.sum(ests))
        if total_est <= abs_tol:
            break
        order = np.argsort(ests)[::-1]
        cum = np.cumsum(ests[order])
        k = int(np.searchsorted(cum, 0.9 * total_est)) + 1
        split = order[:k]
        keep = np.ones(centers.size, dtype=bool)
        keep[split] = False
        c_new = np.concatenate([centers[split] - 0.5 * halfw[split],
                                centers[split] + 0.5 * halfw[split]])
        h_new = np.concatenate([0.5 * halfw[split], 0.5 * halfw[split]])
        s_lo, _ = _panel_sums(g, c_new, h_new, _RULE_LO)
        s_hi, _ = _panel_sums(g, c_new, h_new, _RULE_HI)
        n_evals += c_new.size * (_RULE_LO + _RULE_HI)
        centers = np.concatenate([centers[keep], c_new])
        halfw = np.concatenate([halfw[keep], h_new])
        sums = np.concatenate([sums[keep], s_hi])
        ests = np.concatenate([ests[keep], np.abs(s_hi - s_lo)])
    return float(np.sum(sums)), float(np.sum(ests)), n_evals


def _edges(a: float, b: float, width: float) -> np.ndarray:
    n = max(1, int(math.ceil((b - a) / width)))
    return np.linspace(a, b, n + 1)


@dataclass
class LineIntegralResult:
    value: float
    error: float
    width: float          # half-width actually integrated before extrapolation
    tail: float           # extrapolated remainder beyond +-width
    n_evals: int
    octaves: int

    def __float__(self):
        return self.value


def integrate_real_line(
    g,
    rel_tol: float = 1e-6,
    core_width: float = 16.0,
    panel_width: float = 1.0,
    max_width: float | None = None,
) -> LineIntegralResult:
    """Integrate a non-negative integrand over the whole real line.

    The core [-W, W] and successive octaves [W 2^k, W 2^{k+1}] (both signs)
    are integrated adaptively; the two latest octave masses fit a geometric
    model whose extrapolated remainder completes the integral.  Doubling
    stops when the extrapolated total stabilises to within rel_tol.
    max_width defaults to 2^16 core widths so the octave budget does not
    depend on the absolute scale of the core.
    """
    if rel_tol <= 0:
        raise InvalidArgumentError("rel_tol must be positive")
    W = core_width
    if max_width is None:
        max_width = W * 65536.0
    rough, _ = _panel_sums(g, np.array([0.0]), np.array([W]), _RULE_HI)
    scale = float(abs(rough[0]))
    core_tol = 0.3 * rel_tol * scale
    value, err, n_evals = _adaptive_bounded(g, _edges(-W, W, panel_width), core_tol)
    n_evals += _RULE_HI
    if value == 0.0 and scale == 0.0:
        return LineIntegralResult(0.0, 0.0, W, 0.0, n_evals, 0)

    masses = []
    prev_ext = None
    tail = 0.0
    k = 0
    while True:
        lo, hi = W * 2.0**k, W * 2.0**(k + 1)
        # panel width grows with the octave: power-law integrands vary on
        # scale x, so a bounded panel count per octave loses nothing and the
        # adaptive splitter still guards the estimate
        pw_k = max(panel_width, (hi - lo) / 128.0)
        left = _edges(-hi, -lo, pw_k)
        right = _edges(lo, hi, pw_k)
        # octave tolerance sits well below the stabilisation threshold so
        # quadrature jitter cannot race the extrapolation stop test
        tol_k = 0.03 * rel_tol * max(value, scale)
        vL, eL, nL = _adaptive_bounded(g, left, 0.5 * tol_k)
        vR, eR, nR = _adaptive_bounded(g, right, 0.5 * tol_k)
        m = vL + vR
        value += m
        err += eL + eR
        n_evals += nL + nR
        masses.append(m)
        k += 1
        if len(masses) >= 2 and masses[-2] > 0.0:
            rho = masses[-1] / masses[-2]
            if rho < 0.95:
                tail = masses[-1] * rho / (1.0 - rho)
                ext = value + tail
                if prev_ext is not None and abs(ext - prev_ext) <= 0.3 * rel_tol * abs(ext):
                    err += abs(ext - prev_ext)
                    return LineIntegralResult(ext, err, hi, tail, n_evals, k)
                prev_ext = ext
            else:
                prev_ext = None
        elif len(masses) >= 2:
            # tail vanished identically
            return LineIntegralResult(value, err, hi, 0.0, n_evals, k)
        if hi >= max_width:
            rho = masses[-1] / masses[-2] if len(masses) >= 2 and masses[-2] else float("nan")
            raise DivergesError(
                f"whole-line integral did not stabilise out to |x| = {hi:.3g} "
                f"(latest octave ratio {rho:.4f}); the integrand decays too "
                f"slowly to be summable at the requested tolerance"
            )


# -- weighted positive axis ----------------------------------------------------


@dataclass
class AxisIntegralResult:
    value: float
    error: float
    y_max: float
    tail: float
    n_evals: int
    panels: int

    def __float__(self):
        return self.value


def integrate_weighted_axis(
    phi,
    alpha: float,
    rel_tol: float = 1e-6,
    y_break: float = 0.5,
    y_cap: float = 1e5,
    nodes: tuple[int, int] = (6, 12),
    grow_limit: int = 3,
    grow_floor: float = 32.0,
) -> AxisIntegralResult:
    """Integrate y^alpha * phi(y) over (0, inf) for smooth positive phi.

    phi is called on node arrays (each entry typically costs a whole line
    integral, so node counts stay frugal).  The y^alpha endpoint weight is
    absorbed exactly by a Gauss-Jacobi rule on (0, y_break]; beyond that,
    doubling panels carry the weight explicitly and a geometric model
    extrapolates the remainder once panel masses decay steadily.  Masses
    still growing past y = grow_floor for grow_limit consecutive panels, or
    no stabilisation by y_cap, raise DivergesError.
    """
    if not alpha > -1.0:
        raise InvalidArgumentError(f"axis weight exponent must exceed -1, got {alpha}")
    n_lo, n_hi = nodes
    n_evals = 0

    def jacobi_panel(n):
        x, w = gauss_jacobi(n, 0.0, alpha)
        y = 0.5 * y_break * (1.0 + x)
        f = np.asarray(phi(y), dtype=float)
        if not np.all(np.isfinite(f)):
            raise DivergesError("axis integrand overflowed near y = 0")
        return (0.5 * y_break) ** (alpha + 1.0) * float(w @ f)

    v_lo = jacobi_panel(n_lo)
    v_hi = jacobi_panel(n_hi)
    n_evals += n_lo + n_hi
    value = v_hi
    err = abs(v_hi - v_lo)

    def gl_panel(a, b):
        nonlocal n_evals
        outs = []
        for n in (n_lo, n_hi):
            x, w = gauss_legendre(n)
            y = 0.5 * (a + b) + 0.5 * (b - a) * x
            f = np.asarray(phi(y), dtype=float)
            if not np.all(np.isfinite(f)):
                raise DivergesError(f"axis integrand overflowed on panel [{a:.3g}, {b:.3g}]")
            outs.append(0.5 * (b - a) * float(w @ (y**alpha * f)))
            n_evals += n
        return outs[1], abs(outs[1] - outs[0])

    masses = []
    prev_ext = None
    k = 0
    growing = 0
    while True:
        a, b = y_break * 2.0**k, y_break * 2.0**(k + 1)
        m, e = gl_panel(a, b)
        if e > 0.25 * rel_tol * max(value + m, 1e-300 * (value + m + e)):
            mid = 0.5 * (a + b)
            m1, e1 = gl_panel(a, mid)
            m2, e2 = gl_panel(mid, b)
            m, e = m1 + m2, e1 + e2
        value += m
        err += e
        masses.append(m)
        k += 1
        if len(masses) >= 2 and masses[-2] > 0.0:
            rho = masses[-1] / masses[-2]
            if rho >= 1.0 and b > grow_floor:
                growing += 1
                if growing >= grow_limit:
                    raise DivergesError(
                        f"axis masses still growing at y ~ {b:.3g} "
                        f"(panel ratio {rho:.4f} >= 1); the weighted integral "
                        f"diverges: the density lacks the band-edge smoothness "
                        f"this weight exponent requires"
                    )
            else:
                growing = 0
            if rho < 0.9:
                tail = masses[-1] * rho / (1.0 - rho)
                ext = value + tail
                if prev_ext is not None and abs(ext - prev_ext) <= 0.3 * rel_tol * abs(ext):
                    err += abs(ext - prev_ext)
                    return AxisIntegralResult(ext, err, b, tail, n_evals, k + 1)
                prev_ext = ext
            else:
                prev_ext = None
        elif len(masses) >= 2 and masses[-1] == 0.0:
            return AxisIntegralResult(value, err, b, 0.0, n_evals, k + 1)
        if b >= y_cap:
            rho = masses[-1] / masses[-2] if len(masses) >= 2 and masses[-2] else float("nan")
            raise DivergesError(
                f"weighted axis integral did not stabilise out to y = {b:.3g} "
                f"(latest panel ratio {rho:.4f}); decay is too slow, the "
                f"integral is divergent or numerically indistinguishable from it"
            )


# -- unit disk with Bergman-type weight ----------------------------------------


@dataclass
class DiskIntegralResult:
    value: float
    error: float
    n_theta: int
    n_radial: int

    def __float__(self):
        return self.value


def integrate_unit_disk(
    F,
    alpha: float,
    rel_tol: float = 1e-8,
    n_radial: int = 48,
    max_theta: int = 8192,
) -> DiskIntegralResult:
    """Integrate F(w) (1-|w|^2)^alpha over the unit disk.

    In the substitution u = |w|^2 the area element is (1/2) du dtheta and
    the weight becomes (1-u)^alpha, absorbed exactly by Gauss-Jacobi nodes
    in u.  The angular factor uses the periodic trapezoid rule, doubled
    until two consecutive refinements agree.  A boundary cusp in F makes
    the doubling differences decay at a fixed algebraic ratio instead of
    spectrally; in that regime the doubling sequence is geometric in the
    ratio, so we extrapolate the limit and carry the extrapolation
    distance in the error estimate.  Integrands that concentrate or
    oscillate near a boundary point defeat any uniform angular grid; when
    doubling stalls without a usable rate the rule switches to an adaptive
    panel integration in theta, ring by ring.  F receives a complex array.
    """
    if not alpha > -1.0:
        raise InvalidArgumentError(f"disk weight exponent must exceed -1, got {alpha}")

    def radial_sum(n_theta, r, wu, scale):
        theta = np.arange(n_theta) * (2.0 * math.pi / n_theta)
        w = r[:, None] * np.exp(1j * theta[None, :])
        vals = np.asarray(F(w.ravel()), dtype=float).reshape(w.shape)
        if not np.all(np.isfinite(vals)):
            raise DivergesError("disk integrand returned non-finite values")
        ang = vals.mean(axis=1) * (2.0 * math.pi)
        return 0.5 * scale * float(wu @ ang)

    scale = 0.5 ** (alpha + 1.0)  # from u-substitution of the (1-u)^alpha factor

    def angular_limit(n_rad):
        """Trapezoid doubling; returns (value, error, n_theta, settled)."""
        xu, wu = gauss_jacobi(n_rad, alpha, 0.0)
        r = np.sqrt(0.5 * (1.0 + xu))   # u in (0,1), weight (1-u)^alpha exact
        n_t = 16
        prev = radial_sum(n_t, r, wu, scale)
        diffs = []
        while True:
            n_t *= 2
            cur = radial_sum(n_t, r, wu, scale)
            d = abs(cur - prev)
            diffs.append(d)
            floor = max(abs(cur), 1e-300)
            if d <= 0.25 * rel_tol * floor:
                return cur, d, n_t, True
            if len(diffs) >= 3 and diffs[-2] > 0.0 and diffs[-3] > 0.0:
                r1, r2 = diffs[-1] / diffs[-2], diffs[-2] / diffs[-3]
                if r2 > 0 and abs(r1 / r2 - 1.0) < 0.25 and r1 < 0.75:
                    # steady algebraic decay: trapezoid error ~ C n^-s gives
                    # difference ratio 2^-s exactly, so the remainder is the
                    # geometric tail of the differences
                    rem = d * r1 / (1.0 - r1)
                    val = cur + (cur - prev) * r1 / (1.0 - r1)
                    if rem <= 0.25 * rel_tol * floor or n_t >= max_theta:
                        return val, 2.0 * rem, n_t, True
            if n_t >= 1024 and d > 0.02 * max(diffs):
                # differences stopped collapsing: an unresolved boundary
                # feature that more uniform nodes will not fix
                return cur, 4.0 * d, n_t, False
            if n_t >= max_theta:
                return cur, 4.0 * d, n_t, False
            prev = cur

    def ring_adaptive(n_rad, rough_floor):
        """Adaptive theta panels per radial ring; handles boundary chirps."""
        xu, wu = gauss_jacobi(n_rad, alpha, 0.0)
        r = np.sqrt(0.5 * (1.0 + xu))
        edges0 = np.linspace(0.0, 2.0 * math.pi, 17)
        total = 0.0
        err = 0.0
        for i in range(n_rad):
            c_i = 0.5 * scale * float(wu[i])
            ri = r[i]

            def g_theta(theta, ri=ri):
                vals = np.asarray(F(ri * np.exp(1j * theta)), dtype=float)
                return vals

            tol_i = rel_tol * rough_floor / (n_rad * max(c_i, 1e-300))
            v, e, _ = _adaptive_bounded(g_theta, edges0, tol_i)
            total += c_i * v
            err += c_i * e
        return total, err

    coarse, err_c, _, ok_c = angular_limit(n_radial)
    fine, err_f, n_t, ok_f = angular_limit(2 * n_radial)
    gap = abs(fine - coarse)
    value = fine
    err_f = err_f + gap
    n_rad_used = 2 * n_radial
    if not (ok_c and ok_f):
        rough = max(abs(fine), abs(coarse), 1e-300)
        coarse, err_c = ring_adaptive(n_radial, rough)
        fine, err_f = ring_adaptive(2 * n_radial, rough)
        n_t = 0
        gap = abs(fine - coarse)
        # boundary-concentrated mass resolves algebraically in n_radial; one
        # Richardson step assuming 1/n cancels the leading error, and when
        # the remaining gap is still large a third level measures the true
        # ratio instead of assuming it
        value = 2.0 * fine - coarse
        err_f = err_f + gap
        if gap > 4.0 * rel_tol * max(abs(fine), 1e-300):
            finest, err_3 = ring_adaptive(4 * n_radial, rough)
            n_rad_used = 4 * n_radial
            d1, d2 = fine - coarse, finest - fine
            if d1 != 0.0 and 0.0 < d2 / d1 < 0.9:
                rho = d2 / d1
                rem = d2 * rho / (1.0 - rho)
                value = finest + rem
                err_f = err_3 + 2.0 * abs(rem) + 0.25 * abs(d2)
            else:
                value = finest
                err_f = err_3 + 2.0 * abs(d2)
            gap = abs(d2)
    if gap > 0.25 * max(abs(value), 1e-300):
        raise DivergesError(
            "radial refinement moved the disk integral by "
            f"{gap:.3g} against a value of {value:.3g}; the integrand looks "
            "non-integrable at the boundary"
        )
    return DiskIntegralResult(value, err_f, n_t, n_rad_used)
