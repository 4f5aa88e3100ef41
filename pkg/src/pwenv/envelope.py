"""Half-plane embedding operators and dictionary bounds for envelope norms.

The embedding j sends a type-pi function f to the modulated pair
(e^{i pi z} f, e^{-i pi z} f), whose spectra sit in [0, 2 pi] and
[-2 pi, 0].  T recombines such a pair against a partition of unity on the
spectral side, and Q inverts j: because the partition sums to one on
[-pi, pi] with integer ramp coefficients, Q(j(f)) = f is an identity of
piecewise-polynomial coefficients, not a quadrature statement.

minkowski_norm bounds the q-envelope functional from above by decomposing
f over a finite dictionary of E^p-normalized atoms.  A finite section of
the unit ball can only overestimate the true functional, so every result
is labelled an upper bound and carries its reconstruction residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import (
    ConsistencyError,
    InvalidArgumentError,
    NoDecompositionError,
    NotHardyError,
    NotInEpError,
)
from .evaluate import BandLimitedFunction, exponential_type
from .norms import EnvelopeParams, QuadratureSpec, envelope_integral_norm, ep_norm
from .spectrum import (
    PartitionOfUnity,
    SpectralDensity,
    make_bump,
    make_fejer,
    modulate,
    multiply_pointwise,
)

_TYPE_TOL = 1e-12
_SUPPORT_TOL = 1e-9


def _blf(f) -> BandLimitedFunction:
    if isinstance(f, BandLimitedFunction):
        return f
    if isinstance(f, SpectralDensity):
        return BandLimitedFunction(f)
    raise InvalidArgumentError(f"expected a band-limited function or density, got {type(f).__name__}")


def _support_within(density: SpectralDensity, lo: float, hi: float) -> bool:
    if density.is_zero:
        return True
    a, b = density.support
    return a >= lo - _SUPPORT_TOL and b <= hi + _SUPPORT_TOL


@dataclass(frozen=True)
class HalfPlanePair:
    """Hardy-class pair: plus lives on the upper half-plane, minus below.

    plus must have spectrum in [0, 2 pi], minus in [-2 pi, 0]; these are the
    images of type-pi functions under modulation by +-pi.
    """

    plus: BandLimitedFunction
    minus: BandLimitedFunction

    def __post_init__(self):
        if not _support_within(self.plus.density, 0.0, 2.0 * math.pi):
            raise NotHardyError(
                f"plus component must have spectrum in [0, 2*pi], got {self.plus.density.support}"
            )
        if not _support_within(self.minus.density, -2.0 * math.pi, 0.0):
            raise NotHardyError(
                f"minus component must have spectrum in [-2*pi, 0], got {self.minus.density.support}"
            )


def embed_j(f) -> HalfPlanePair:
    """Split f into its upper and lower Hardy components by modulation.

    Both components carry the full information of f; each one's Hardy norm
    matches the E^p quasi-norm of f because |e^{+-i pi z}| = e^{-+pi y} is
    exactly the weight separating the half-planes.
    """
    g = _blf(f)
    tau = exponential_type(g.density)
    if tau > math.pi + _TYPE_TOL:
        raise NotInEpError(f"embedding needs exponential type <= pi, got {tau:.6f}")
    plus = BandLimitedFunction(modulate(g.density, math.pi))
    minus = BandLimitedFunction(modulate(g.density, -math.pi))
    return HalfPlanePair(plus=plus, minus=minus)


def apply_T(u, v, partition: PartitionOfUnity) -> SpectralDensity:
    """Spectral recombination u * phi_hat + v * psi_hat (pointwise products).

    On inputs with common spectrum in [-pi, pi] the partition identity gives
    T(u, u) = u exactly; support bookkeeping keeps the output in
    [-2 pi, 2 pi] for any admissible pair.
    """
    ud = _blf(u).density
    vd = _blf(v).density
    return multiply_pointwise(ud, partition.phi_hat) + multiply_pointwise(vd, partition.psi_hat)


def project_Q(pair: HalfPlanePair, partition: PartitionOfUnity) -> BandLimitedFunction:
    """Recover a type-pi function from its half-plane pair.

    Demodulates both components back to [-pi, pi], recombines with T, and
    truncates.  The truncation is vacuous by support arithmetic; a
    coefficient-level check guards that before cutting.
    """
    plus_shift = modulate(pair.plus.density, -math.pi)
    minus_shift = modulate(pair.minus.density, math.pi)
    combined = apply_T(BandLimitedFunction(plus_shift), BandLimitedFunction(minus_shift), partition)
    ref = 1.0
    for piece in combined.pieces:
        ref = max(ref, float(np.sum(np.abs(piece.coeffs))))
    leak = combined.max_abs_outside(-math.pi, math.pi)
    if leak > 1e-14 * ref:
        raise ConsistencyError(
            f"recombined spectrum leaks {leak:.3e} outside [-pi, pi]; "
            "the pair did not come from a type-pi function"
        )
    return BandLimitedFunction(combined.restrict(-math.pi, math.pi))


# -- counterexample family ------------------------------------------------------


def counterexample_family(eps: float, k: int = 3) -> BandLimitedFunction:
    """Narrow-spectrum probe: a smooth bump on [-pi, -pi + eps], L1-normalized.

    The spectral mass of f sits at the very edge of the admissible band, so
    f has unit value at the origin but an E^p mass that concentrates as
    eps -> 0.  That concentration is what separates the p < 1 spaces from
    their common envelope.
    """
    if not (0.0 < eps <= math.pi):
        raise InvalidArgumentError(f"eps must lie in (0, pi], got {eps}")
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise InvalidArgumentError(f"bump smoothness k must be an integer >= 2, got {k!r}")
    s = make_bump(-math.pi, -math.pi + float(eps), int(k))
    total = s.integral()
    return BandLimitedFunction(s.scale(1.0 / total.real))


def counterexample_ratio(eps: float, p: float, quad: QuadratureSpec | None = None,
                         k: int = 3) -> float:
    """Envelope integral norm at (p, q=1) over the E^1 norm for the probe.

    Both norms are degree-1 homogeneous, so the ratio is scale-free; growth
    of the ratio as eps shrinks witnesses that the p-scale and the 1-scale
    are genuinely different on narrow-spectrum functions.
    """
    f = counterexample_family(eps, k)
    params = EnvelopeParams(p=float(p), q=1.0)
    numerator = envelope_integral_norm(f, params, quad)
    denominator = ep_norm(f, 1.0, quad)
    return float(numerator.value / denominator.value)


# -- dictionary decompositions ---------------------------------------------------


@dataclass(frozen=True)
class Dictionary:
    """Finite family of E^p-normalized atoms used for upper-bound decompositions.

    grid_halfwidth and grid_spacing fix the dense real grid on which a
    reconstruction must match the target.
    """

    atoms: tuple
    names: tuple
    p: float
    q: float = 1.0
    grid_halfwidth: float = 16.0
    grid_spacing: float = 0.5

    def __post_init__(self):
        if len(self.atoms) == 0:
            raise InvalidArgumentError("dictionary needs at least one atom")
        if len(self.atoms) != len(self.names):
            raise InvalidArgumentError("atoms and names must align")
        if not (0.0 < self.p <= 1.0):
            raise InvalidArgumentError(f"dictionary p must lie in (0, 1], got {self.p}")
        if not (0.0 < self.q <= 1.0):
            raise InvalidArgumentError(f"dictionary q must lie in (0, 1], got {self.q}")
        if not (self.grid_halfwidth > 0 and self.grid_spacing > 0):
            raise InvalidArgumentError("grid parameters must be positive")
        for name, atom in zip(self.names, self.atoms):
            tau = exponential_type(atom.density)
            if tau > math.pi + _TYPE_TOL:
                raise NotInEpError(f"atom {name} has exponential type {tau:.6f} > pi")

    def __len__(self):
        return len(self.atoms)

    def grid(self) -> np.ndarray:
        n = int(math.floor(self.grid_halfwidth / self.grid_spacing))
        return np.arange(-n, n + 1) * self.grid_spacing

    def max_norm_defect(self, quad: QuadratureSpec | None = None) -> float:
        """Largest deviation of any atom's E^p quasi-norm from 1."""
        worst = 0.0
        for atom in self.atoms:
            worst = max(worst, abs(ep_norm(atom, self.p, quad).value - 1.0))
        return worst


def build_dictionary(p: float, q: float = 1.0, ks=(2, 3, 5),
                     quad: QuadratureSpec | None = None,
                     grid_halfwidth: float = 16.0,
                     grid_spacing: float = 0.5) -> Dictionary:
    """Assemble spectral bumps and Fejer-type atoms, each normalized in E^p.

    Bump atoms cover [-pi, pi] at four widths with half-width overlap, for
    each smoothness in ks; Fejer kernels of several apertures and two
    in-band modulates round out the family.  Atoms whose real-axis decay
    cannot be p-th power summable (p * (k + 2) <= 1) are skipped rather
    than admitted with an infinite norm.
    """
    if not (0.0 < p <= 1.0):
        raise InvalidArgumentError(f"p must lie in (0, 1], got {p}")
    raw: list[tuple[str, SpectralDensity]] = []
    widths = (math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0, 2.0 * math.pi)
    for k in ks:
        for w in widths:
            a = -math.pi
            while a + w <= math.pi + 1e-12:
                raw.append((f"bump[{a / math.pi:+.2f}pi,{(a + w) / math.pi:+.2f}pi]k{k}",
                            make_bump(a, a + w, int(k))))
                a += 0.5 * w
    # edge-concentrated probes, same shape as the counterexample family
    for eps in (1.0, 0.5, 0.25, 0.125):
        raw.append((f"edge-bump[eps={eps}]k3", make_bump(-math.pi, -math.pi + eps, 3)))
    # triangle spectra decay like x^-2: p-summability needs 2p > 1
    if 2.0 * p > 1.05:
        for a in (math.pi / 8.0, math.pi / 4.0, 3.0 * math.pi / 8.0, math.pi / 2.0):
            raw.append((f"fejer({a / math.pi:.3f}pi)", make_fejer(a)))
        for c in (-math.pi / 2.0, math.pi / 2.0):
            raw.append((f"fejer(0.250pi)@{c / math.pi:+.2f}pi",
                        modulate(make_fejer(math.pi / 4.0), c)))
    atoms = []
    names = []
    for name, density in raw:
        norm = ep_norm(BandLimitedFunction(density), p, quad).value
        atoms.append(BandLimitedFunction(density.scale(1.0 / norm)))
        names.append(name)
    return Dictionary(atoms=tuple(atoms), names=tuple(names), p=float(p), q=float(q),
                      grid_halfwidth=float(grid_halfwidth), grid_spacing=float(grid_spacing))


_PHASES = ((1.0 + 0.0j, ""), (-1.0 + 0.0j, "(-1)*"), (1.0j, "(i)*"), (-1.0j, "(-i)*"))


@dataclass(frozen=True)
class DecompositionResult:
    """Nonnegative combination of phased atoms approximating a target.

    objective is (sum lambda_i^q)^{1/q}; residual is the sup-norm gap of the
    reconstruction on the decomposition grid.  Both are reported even when
    the decomposition is exact to solver precision.
    """

    objective: float
    coefficients: tuple
    atom_indices: tuple
    atom_labels: tuple
    residual: float
    q: float
    flags: tuple = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "objective": self.objective,
            "lambdas": [
                {"atom": label, "value": lam}
                for label, lam in zip(self.atom_labels, self.coefficients)
            ],
            "residual": self.residual,
        }


def _solve_weighted(cost, A_ub, b_ub):
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    return res


def _best_residual(columns, b):
    """Feasibility pass: smallest achievable sup-norm residual over the cone."""
    n = columns.shape[1]
    # variables (lambda, t): minimize t with |A lambda - b|_inf <= t
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    ones = np.ones((columns.shape[0], 1))
    A_ub = np.block([[columns, -ones], [-columns, -ones]])
    b_ub = np.concatenate([b, -b])
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    if not res.success:
        return float("inf")
    return float(res.x[-1])


def minkowski_norm(f, dictionary: Dictionary,
                   quad: QuadratureSpec | None = None) -> DecompositionResult:
    """Upper-bound the q-envelope functional by a phased-atom decomposition.

    Solves min (sum lambda_i^q)^{1/q} over lambda >= 0 with
    sum lambda_i mu_i g_i matching f on the dictionary grid to a relative
    sup-norm tolerance, phases mu_i in {1, -1, i, -i}.  q = 1 is a linear
    program; q < 1 runs reweighted linear programs from the q = 1 point and
    is only a local (hence still valid upper) bound.
    """
    g = _blf(f)
    quad = quad or QuadratureSpec.default()
    tau = exponential_type(g.density)
    if tau > math.pi + _TYPE_TOL:
        raise NotInEpError(f"decomposition target must have type <= pi, got {tau:.6f}")
    xs = dictionary.grid()
    b_cplx = g.eval_many(xs)
    scale = float(np.max(np.abs(b_cplx)))
    if scale == 0.0 or g.density.is_zero:
        return DecompositionResult(objective=0.0, coefficients=(), atom_indices=(),
                                   atom_labels=(), residual=0.0, q=dictionary.q,
                                   flags=("upper-bound",))
    tol = max(1e-6, quad.rel_tolerance) * scale

    cols = []
    idx = []
    labels = []
    for j, (atom, name) in enumerate(zip(dictionary.atoms, dictionary.names)):
        vals = atom.eval_many(xs)
        for mu, tag in _PHASES:
            cols.append(mu * vals)
            idx.append(j)
            labels.append(tag + name)
    A_cplx = np.array(cols).T
    A = np.vstack([A_cplx.real, A_cplx.imag])
    b = np.concatenate([b_cplx.real, b_cplx.imag])

    n = A.shape[1]
    A_ub = np.vstack([A, -A])
    b_ub = np.concatenate([b + tol, tol - b])
    res = _solve_weighted(np.ones(n), A_ub, b_ub)
    if not res.success:
        best = _best_residual(A, b)
        raise NoDecompositionError(
            f"no decomposition reaches the residual tolerance {tol:.3e}; "
            f"best achievable sup-norm residual is {best:.3e}",
            best_residual=best,
        )
    lam = np.maximum(res.x, 0.0)
    flags = ["upper-bound"]

    qq = dictionary.q
    if qq < 1.0:
        # reweighted iteration: w_i = (lambda_i + delta)^(q-1) linearizes the
        # concave objective at the previous point; each step is a valid LP
        best_lam = lam
        best_obj = float(np.sum(lam**qq))
        for _ in range(10):
            delta = 1e-8 * max(float(np.max(lam)), 1.0)
            weights = (lam + delta) ** (qq - 1.0)
            res = _solve_weighted(weights, A_ub, b_ub)
            if not res.success:
                break
            lam = np.maximum(res.x, 0.0)
            obj = float(np.sum(lam**qq))
            if obj < best_obj - 1e-14:
                best_obj = obj
                best_lam = lam
            else:
                break
        lam = best_lam
        flags.append("local-upper-bound")

    recon = A_cplx @ lam
    residual = float(np.max(np.abs(recon - b_cplx)))
    keep = lam > 1e-12 * max(float(np.max(lam)), 1e-300)
    coeffs = tuple(float(v) for v in lam[keep])
    kept_idx = tuple(int(idx[i]) for i in np.nonzero(keep)[0])
    kept_lab = tuple(labels[i] for i in np.nonzero(keep)[0])
    objective = float(np.sum(np.array(coeffs) ** qq) ** (1.0 / qq)) if coeffs else 0.0
    return DecompositionResult(objective=objective, coefficients=coeffs,
                               atom_indices=kept_idx, atom_labels=kept_lab,
                               residual=residual, q=qq, flags=tuple(flags))
