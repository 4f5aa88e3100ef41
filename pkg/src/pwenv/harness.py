"""Verification suites, sweeps, and report emission.

Every suite returns a VerificationReport made of rows
{check, inputs, lhs, rhs, margin, budget, status}; a row passes when its
margin is no worse than minus its combined error budget.  Reports
serialize to JSON and CSV deterministically: identical config and seed
give byte-identical files.  Rows whose underlying quadrature raised a
precision flag are downgraded to low-confidence rather than trusted
either way.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import default_catalog, disk_catalog, tagged
from .conformal import verify_transfer_identity
from .envelope import (
    EnvelopeParams,
    apply_T,
    build_dictionary,
    counterexample_family,
    embed_j,
    minkowski_norm,
    project_Q,
)
from .errors import InvalidArgumentError, NoDecompositionError
from .evaluate import BandLimitedFunction
from .norms import (
    QuadratureSpec,
    envelope_direct_norm,
    envelope_integral_norm,
    ep_norm,
    hardy_halfplane_norm,
    lp_line_norm,
)
from .spectrum import make_partition

_SUITES = ("pp", "projection", "conformal", "sweep", "envelope", "equivalence",
           "growth", "qenvelope")


@dataclass(frozen=True)
class ExperimentConfig:
    """Run parameters for the verification suites.

    quad_profile picks the base quadrature preset; quad_overrides (a dict of
    QuadratureSpec field names) is applied on top.  The seed only feeds the
    random pair selection of the q-envelope suite; everything else is
    deterministic by construction.
    """

    suite: str = "all"
    p_grid: tuple = (0.6, 0.75, 0.9)
    q_grid: tuple = (1.0,)
    pp_p_grid: tuple = (0.6, 0.75, 1.0, 2.0)
    y_grid: tuple = (0.25, 0.5, 1.0, 2.0)
    eps_grid: tuple = (1.0, 0.5, 0.25, 0.125)
    k_list: tuple = (3, 5)
    counterexample_p: float = 0.75
    equivalence_p: float = 0.75
    envelope_pairs: tuple = ((0.75, 1.0), (0.5, 0.75), (0.4, 0.9))
    conformal_pairs: tuple = ((1.0, 0.0), (0.75, 1.0 / 0.75 - 2.0), (1.0, 2.0 / 3.0))
    qpair: tuple = (0.5, 0.75)
    n_random_pairs: int = 20
    seed: int = 22026
    quad_profile: str = "fast"
    quad_overrides: dict = field(default_factory=dict)
    oracle_epsrel: float = 1e-6
    out_dir: str | None = None

    def __post_init__(self):
        if self.suite not in _SUITES + ("all",):
            raise InvalidArgumentError(f"unknown suite {self.suite!r}; choose from {_SUITES + ('all',)}")
        if self.quad_profile not in ("fast", "default", "precise"):
            raise InvalidArgumentError(f"unknown quadrature profile {self.quad_profile!r}")
        for name, grid, lo, hi in (
            ("p_grid", self.p_grid, 0.0, 2.0),
            ("pp_p_grid", self.pp_p_grid, 0.0, 2.0),
            ("q_grid", self.q_grid, 0.0, 1.0),
            ("eps_grid", self.eps_grid, 0.0, math.pi),
        ):
            if len(grid) == 0:
                raise InvalidArgumentError(f"{name} must be nonempty")
            for v in grid:
                if not (lo < v <= hi):
                    raise InvalidArgumentError(f"{name} entry {v} outside ({lo}, {hi}]")
        for y in self.y_grid:
            if not 0.0 < y <= 8.0:
                raise InvalidArgumentError(f"y_grid entry {y} outside (0, 8]")
        for k in self.k_list:
            if not (isinstance(k, (int, np.integer)) and k >= 2):
                raise InvalidArgumentError(f"k_list entry {k!r} must be an integer >= 2")
        if not (0.0 < self.counterexample_p < 1.0):
            raise InvalidArgumentError("counterexample_p must lie in (0, 1)")
        if not (0.0 < self.equivalence_p < 1.0):
            raise InvalidArgumentError("equivalence_p must lie in (0, 1)")
        for p, q in self.envelope_pairs:
            if not (0.0 < p < 1.0 and p < q <= 1.0):
                raise InvalidArgumentError(f"envelope pair ({p}, {q}) needs 0 < p < q <= 1")
        p, q = self.qpair
        if not (0.0 < p < 1.0 and p < q <= 1.0):
            raise InvalidArgumentError(f"qpair ({p}, {q}) needs 0 < p < q <= 1")
        if self.n_random_pairs < 1:
            raise InvalidArgumentError("n_random_pairs must be positive")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidArgumentError("seed must fit in 64 bits")
        if not (0.0 < self.oracle_epsrel <= 1e-3):
            raise InvalidArgumentError("oracle_epsrel must lie in (0, 1e-3]")

    def quadrature(self) -> QuadratureSpec:
        base = {"fast": QuadratureSpec.fast, "default": QuadratureSpec.default,
                "precise": QuadratureSpec.precise}[self.quad_profile]()
        if self.quad_overrides:
            base = replace(base, **self.quad_overrides)
        return base

    def to_json_dict(self) -> dict:
        d = {
            "suite": self.suite,
            "p_grid": list(self.p_grid),
            "q_grid": list(self.q_grid),
            "pp_p_grid": list(self.pp_p_grid),
            "y_grid": list(self.y_grid),
            "eps_grid": list(self.eps_grid),
            "k_list": [int(k) for k in self.k_list],
            "counterexample_p": self.counterexample_p,
            "equivalence_p": self.equivalence_p,
            "envelope_pairs": [list(pq) for pq in self.envelope_pairs],
            "conformal_pairs": [list(pa) for pa in self.conformal_pairs],
            "qpair": list(self.qpair),
            "n_random_pairs": self.n_random_pairs,
            "seed": int(self.seed),
            "quad_profile": self.quad_profile,
            "quad_overrides": dict(sorted(self.quad_overrides.items())),
            "oracle_epsrel": self.oracle_epsrel,
        }
        return d

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        known = {f for f in ExperimentConfig.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        clean = dict(raw)
        for key in ("p_grid", "q_grid", "pp_p_grid", "y_grid", "eps_grid", "k_list",
                    "qpair"):
            if key in clean:
                clean[key] = tuple(clean[key])
        if "k_list" in clean:
            clean["k_list"] = tuple(int(k) for k in clean["k_list"])
        for key in ("envelope_pairs", "conformal_pairs"):
            if key in clean:
                clean[key] = tuple(tuple(x) for x in clean[key])
        return ExperimentConfig(**clean)


@dataclass(frozen=True)
class CheckRow:
    check: str
    inputs: dict
    lhs: float
    rhs: float
    margin: float
    budget: float
    status: str   # pass | fail | low-confidence | report-only
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "inputs": dict(sorted(self.inputs.items())),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "budget": self.budget,
            "status": self.status,
            "note": self.note,
        }


def _row(check, inputs, lhs, rhs, margin, budget, flags=(), report_only=False, note=""):
    if report_only:
        status = "report-only"
    elif any(str(fl).startswith("low-confidence") for fl in flags):
        status = "low-confidence"
    else:
        status = "pass" if margin >= -budget else "fail"
    return CheckRow(check=check, inputs=inputs, lhs=float(lhs), rhs=float(rhs),
                    margin=float(margin), budget=float(budget), status=status, note=note)


@dataclass
class VerificationReport:
    suite: str
    rows: list
    config: dict

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "low-confidence": 0, "report-only": 0}
        for r in self.rows:
            counts[r.status] += 1
        counts["total"] = len(self.rows)
        return counts

    @property
    def passed(self) -> bool:
        return self.summary["fail"] == 0

    def failures(self):
        return [r for r in self.rows if r.status == "fail"]

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "summary": self.summary,
            "rows": [r.to_json_dict() for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "inputs", "lhs", "rhs", "margin", "budget", "status", "note"])
        for r in self.rows:
            writer.writerow([
                r.check,
                json.dumps(dict(sorted(r.inputs.items())), sort_keys=True),
                repr(r.lhs), repr(r.rhs), repr(r.margin), repr(r.budget),
                r.status, r.note,
            ])
        return buf.getvalue()

    def write(self, out_dir: str) -> tuple:
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for ext, text in (("json", self.to_json()), ("csv", self.to_csv())):
            path = os.path.join(out_dir, f"{self.suite}.{ext}")
            tmp = path + ".tmp"
            with open(tmp, "w") as fh:
                fh.write(text)
            os.replace(tmp, path)
            paths.append(path)
        return tuple(paths)


# -- suites ---------------------------------------------------------------------


def check_plancherel_polya(config: ExperimentConfig) -> VerificationReport:
    """Line-mass growth bound across the catalog: mass(y) <= e^{p pi |y|} mass(0)."""
    quad = config.quadrature()
    rows = []
    ys = sorted({0.0} | {s * y for y in config.y_grid for s in (1.0, -1.0)})
    for entry in tagged(default_catalog(), "pp"):
        f = entry.function()
        for p in config.pp_p_grid:
            base = lp_line_norm(f, p, 0.0, quad)
            for y in ys:
                inputs = {"function": entry.name, "p": p, "y": y}
                if y == 0.0:
                    lhs = lp_line_norm(f, p, 0.0, quad)
                    rows.append(_row("pp-equality-y0", inputs, lhs.value, base.value,
                                     -abs(lhs.value - base.value),
                                     lhs.quadrature_error_estimate + base.quadrature_error_estimate,
                                     flags=lhs.flags))
                    continue
                lhs = lp_line_norm(f, p, y, quad)
                grow = math.exp(p * math.pi * abs(y))
                rhs = grow * base.value
                budget = lhs.quadrature_error_estimate + grow * base.quadrature_error_estimate
                rows.append(_row("pp-growth-bound", inputs, lhs.value, rhs,
                                 rhs - lhs.value, budget, flags=lhs.flags + base.flags))
    return VerificationReport("pp", rows, config.to_json_dict())


def check_projection(config: ExperimentConfig) -> VerificationReport:
    """Round trip through the half-plane pair, and the recombination identity."""
    rows = []
    pu = make_partition(4)
    xs = np.linspace(-40.0, 40.0, 1601)
    ts = np.linspace(-math.pi, math.pi, 2001)
    quad = config.quadrature()
    catalog = tagged(default_catalog(), "proj")
    for entry in catalog:
        f = entry.function()
        back = project_Q(embed_j(f), pu)
        ref = float(np.max(np.abs(f.eval_many(xs))))
        err = float(np.max(np.abs(back.eval_many(xs) - f.eval_many(xs))))
        rows.append(_row("projection-roundtrip", {"function": entry.name},
                         err, 1e-8 * ref, 1e-8 * ref - err, 0.0))
        t = apply_T(f, f, pu)
        defect = float(np.max(np.abs(t(ts) - f.density(ts))))
        dref = max(1.0, float(np.max(np.abs(f.density(ts)))))
        rows.append(_row("recombination-identity", {"function": entry.name},
                         defect, 1e-12 * dref, 1e-12 * dref - defect, 0.0))
    zero = BandLimitedFunction(catalog[0].density.scale(0.0))
    back = project_Q(embed_j(zero), pu)
    rows.append(_row("projection-roundtrip", {"function": "zero"},
                     float(np.max(np.abs(back.eval_many(xs)))), 0.0, 0.0, 0.0))
    # the embedding is an isometry onto each half-plane component
    by_name = {entry.name: entry for entry in catalog}
    for entry in (by_name["fejer(pi/2)"], by_name["centered-bump k3"]):
        f = entry.function()
        for p in (0.75, 1.0):
            plus = embed_j(f).plus
            h = hardy_halfplane_norm(plus, p, +1, quad)
            e = ep_norm(f, p, quad)
            budget = h.quadrature_error_estimate + e.quadrature_error_estimate + 1e-9 * e.value
            rows.append(_row("embedding-isometry", {"function": entry.name, "p": p},
                             h.value, e.value, -abs(h.value - e.value), budget,
                             flags=h.flags + e.flags))
    return VerificationReport("projection", rows, config.to_json_dict())


def check_conformal(config: ExperimentConfig) -> VerificationReport:
    """Disk mass versus half-plane mass for the same function, two quadratures."""
    rows = []
    for p, alpha in config.conformal_pairs:
        for name, g in disk_catalog(p, alpha):
            rel = 1e-5 if name == "fejer-section" else 1e-6
            rep = verify_transfer_identity(g, p, alpha, rel_tol=rel)
            inputs = {"function": name, "p": p, "alpha": round(alpha, 12)}
            rows.append(_row("transfer-identity", inputs, rep.disk_value,
                             rep.halfplane_value, -rep.abs_gap, rep.error_budget))
            if name == "one" and p == 1.0 and alpha == 0.0:
                rows.append(_row("transfer-closed-form", {**inputs, "oracle": "pi"},
                                 rep.disk_value, math.pi,
                                 -abs(rep.disk_value - math.pi), 1e-6 * math.pi))
    p0, a0 = config.conformal_pairs[0]
    zrep = verify_transfer_identity(lambda w: np.zeros_like(np.asarray(w, dtype=complex)),
                                    p0, a0, rel_tol=1e-6)
    rows.append(_row("transfer-identity", {"function": "zero", "p": p0, "alpha": round(a0, 12)},
                     zrep.disk_value, zrep.halfplane_value, -zrep.abs_gap, zrep.error_budget))
    return VerificationReport("conformal", rows, config.to_json_dict())


def run_counterexample_sweep(config: ExperimentConfig) -> VerificationReport:
    """Ratio of the envelope integral norm to the E^1 norm on narrowing probes."""
    quad = config.quadrature()
    p = config.counterexample_p
    params = EnvelopeParams(p=p, q=1.0)
    rows = []
    for k in config.k_list:
        ratios = []
        for eps in sorted(config.eps_grid, reverse=True):
            f = counterexample_family(eps, k)
            num = envelope_integral_norm(f, params, quad)
            den = ep_norm(f, 1.0, quad)
            ratio = num.value / den.value
            err = ratio * (num.quadrature_error_estimate / num.value
                           + den.quadrature_error_estimate / den.value)
            ratios.append((eps, ratio, err))
            rows.append(_row("counterexample-ratio", {"eps": eps, "k": int(k), "p": p},
                             ratio, 0.0, 0.0, err, report_only=True))
        for (e1, r1, b1), (e2, r2, b2) in zip(ratios, ratios[1:]):
            rows.append(_row("ratio-strict-increase",
                             {"from_eps": e1, "to_eps": e2, "k": int(k), "p": p},
                             r2, r1, r2 - r1, b1 + b2))
        if len(ratios) >= 2:
            e_hi, r_hi, b_hi = ratios[0]
            e_lo, r_lo, b_lo = ratios[-1]
            rows.append(_row("ratio-doubling",
                             {"from_eps": e_hi, "to_eps": e_lo, "k": int(k), "p": p},
                             r_lo, 2.0 * r_hi, r_lo - 2.0 * r_hi, b_lo + 2.0 * b_hi,
                             note="unboundedness surrogate: narrowing the spectrum "
                                  "by 8 must at least double the ratio"))
    return VerificationReport("sweep", rows, config.to_json_dict())


def check_envelope_consistency(config: ExperimentConfig) -> VerificationReport:
    """Cross-validate the panelled half-plane route against nested QUADPACK.

    Each envelope-tagged catalog entry is paired with one (p, q) from
    config.envelope_pairs, cycling if the counts differ; the defaults put
    both signs of the area-weight exponent q/p - 2 in play.  The two
    routes share nothing past pointwise evaluation, so agreement here is a
    genuine consistency check, not a self-comparison.
    """
    import warnings

    quad = config.quadrature()
    pairs = config.envelope_pairs
    rows = []
    for idx, entry in enumerate(tagged(default_catalog(), "envelope")):
        p, q = pairs[idx % len(pairs)]
        params = EnvelopeParams(p=p, q=q)
        f = entry.function()
        iv = envelope_integral_norm(f, params, quad)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            dv = envelope_direct_norm(f, params, epsrel=config.oracle_epsrel)
        flags = iv.flags + dv.flags
        if caught:
            flags = flags + ("oracle:integration-warning",)
        rel = abs(iv.value - dv.value) / dv.value
        rows.append(_row("envelope-consistency",
                         {"function": entry.name, "p": p, "q": q},
                         iv.value, dv.value, -rel, 1e-5, flags=flags))
    return VerificationReport("envelope", rows, config.to_json_dict())


def run_equivalence_study(config: ExperimentConfig) -> VerificationReport:
    """Dictionary upper bound against the integral norm over the study family."""
    quad = config.quadrature()
    p = config.equivalence_p
    params = EnvelopeParams(p=p, q=1.0)
    dictionary = build_dictionary(p, q=1.0, quad=quad)
    rows = []
    ratios = []
    for entry in tagged(default_catalog(), "equiv"):
        f = entry.function()
        env = envelope_integral_norm(f, params, quad)
        inputs = {"function": entry.name, "p": p}
        try:
            mink = minkowski_norm(f, dictionary, quad)
        except NoDecompositionError as exc:
            rows.append(_row("equivalence-ratio", inputs, float("nan"), 0.0,
                             -float("inf"), 0.0,
                             note=f"no decomposition; best residual {exc.best_residual:.3e}"))
            continue
        ratio = mink.objective / env.value
        ratios.append(ratio)
        margin = min(ratio - 1e-3, 1e3 - ratio)
        budget = ratio * (env.quadrature_error_estimate / env.value) + 1e-9
        rows.append(_row("equivalence-ratio", inputs, ratio, 1e3, margin, budget,
                         flags=env.flags,
                         note=f"upper bound via {len(mink.coefficients)} atoms; "
                              f"residual {mink.residual:.2e}"))
    if ratios:
        rows.append(_row("equivalence-constant", {"p": p, "side": "upper"},
                         max(ratios), 0.0, 0.0, 0.0, report_only=True,
                         note="empirical, dictionary-dependent; not a sharp constant"))
        rows.append(_row("equivalence-constant", {"p": p, "side": "lower"},
                         min(ratios), 0.0, 0.0, 0.0, report_only=True,
                         note="empirical, dictionary-dependent; not a sharp constant"))
    return VerificationReport("equivalence", rows, config.to_json_dict())


def check_spectral_growth(config: ExperimentConfig) -> VerificationReport:
    """Report-only: spectral sup against |xi|^{1/p-1} for plus-band entries."""
    quad = config.quadrature()
    rows = []
    rows.append(_row("spectral-growth-constant", {"function": "zero", "p": config.counterexample_p},
                     0.0, 0.0, 0.0, 0.0, report_only=True, note="empirical constant 0.0"))
    for entry in tagged(default_catalog(), "hardy"):
        f = entry.function()
        lo, hi = f.density.support
        xi = np.linspace(max(lo, 1e-9), hi, 4001)
        for p in (config.counterexample_p,):
            ratio = 2.0 * math.pi * np.abs(f.density(xi)) / np.abs(xi) ** (1.0 / p - 1.0)
            sup = float(np.max(ratio))
            h = hardy_halfplane_norm(f, p, +1, quad)
            const = sup / h.value
            rows.append(_row("spectral-growth-constant",
                             {"function": entry.name, "p": p},
                             sup, h.value, 0.0, h.quadrature_error_estimate,
                             report_only=True,
                             note=f"empirical constant {const!r}"))
            doubled = BandLimitedFunction(f.density.scale(2.0))
            sup2 = float(np.max(2.0 * math.pi * np.abs(doubled.density(xi))
                                / np.abs(xi) ** (1.0 / p - 1.0)))
            h2 = hardy_halfplane_norm(doubled, p, +1, quad)
            rows.append(_row("spectral-growth-scaling",
                             {"function": entry.name, "p": p},
                             sup2 / sup, h2.value / h.value, 0.0, 0.0,
                             report_only=True,
                             note="both sides must scale linearly"))
    return VerificationReport("growth", rows, config.to_json_dict())


def check_qenvelope(config: ExperimentConfig) -> VerificationReport:
    """q-triangle inequality and exact homogeneity of the envelope functional."""
    quad = config.quadrature()
    p, q = config.qpair
    params = EnvelopeParams(p=p, q=q)
    pool = tagged(default_catalog(), "qpairs")
    rng = np.random.default_rng(int(config.seed))
    rows = []
    norms = {}
    for entry in pool:
        norms[entry.name] = envelope_integral_norm(entry.function(), params, quad)
    n = len(pool)
    pairs = set()
    while len(pairs) < min(config.n_random_pairs, n * (n - 1) // 2):
        i, j = sorted(rng.integers(0, n, size=2).tolist())
        if i != j:
            pairs.add((i, j))
    for i, j in sorted(pairs):
        a, b = pool[i], pool[j]
        s = BandLimitedFunction(a.density + b.density)
        ns = envelope_integral_norm(s, params, quad)
        na, nb = norms[a.name], norms[b.name]
        lhs = ns.value**q
        rhs = na.value**q + nb.value**q
        # first-order error propagation through v -> v^q
        budget = (q * ns.value ** (q - 1.0) * ns.quadrature_error_estimate
                  + q * na.value ** (q - 1.0) * na.quadrature_error_estimate
                  + q * nb.value ** (q - 1.0) * nb.quadrature_error_estimate)
        rows.append(_row("q-triangle", {"f": a.name, "g": b.name, "p": p, "q": q},
                         lhs, rhs, rhs - lhs, budget,
                         flags=ns.flags + na.flags + nb.flags))
    for idx in rng.choice(n, size=min(3, n), replace=False).tolist():
        entry = pool[int(idx)]
        c = float(np.exp(rng.uniform(-3.0, 3.0)))
        scaled = BandLimitedFunction(entry.density.scale(c))
        nc = envelope_integral_norm(scaled, params, quad)
        base = norms[entry.name]
        rel = abs(nc.value - c * base.value) / (c * base.value)
        rows.append(_row("homogeneity", {"function": entry.name, "c": c, "p": p, "q": q},
                         nc.value, c * base.value, -rel, 1e-10,
                         flags=nc.flags + base.flags))
    return VerificationReport("qenvelope", rows, config.to_json_dict())


_SUITE_RUNNERS = {
    "pp": check_plancherel_polya,
    "projection": check_projection,
    "conformal": check_conformal,
    "sweep": run_counterexample_sweep,
    "envelope": check_envelope_consistency,
    "equivalence": run_equivalence_study,
    "growth": check_spectral_growth,
    "qenvelope": check_qenvelope,
}


def run_all(config: ExperimentConfig) -> dict:
    """Run the configured suite (or all of them); returns {suite: report}."""
    names = _SUITES if config.suite == "all" else (config.suite,)
    reports = {}
    for name in names:
        report = _SUITE_RUNNERS[name](config)
        if config.out_dir:
            report.write(config.out_dir)
        reports[name] = report
    return reports
