"""End-to-end acceptance battery.

Each test exercises one advertised guarantee at its stated tolerance and
runtime budget and records a single PASS/FAIL line; the lines are printed
together after the run.  The second clause of criterion 5 is asserted
exactly as stated even though the measured growth factor falls short of 2
on this epsilon range; the red result is the honest outcome (the sweep
report carries the same verdict), not a harness defect.
"""

import math
import time
from dataclasses import replace

import pytest

from pwenv import (
    ExperimentConfig,
    check_conformal,
    check_envelope_consistency,
    check_plancherel_polya,
    check_projection,
    check_qenvelope,
    ep_norm,
    make_fejer,
    run_all,
    run_counterexample_sweep,
    run_equivalence_study,
)

PI = math.pi


def _verdict(ok):
    return "PASS" if ok else "FAIL"


def test_criterion_1_line_growth_battery(acceptance):
    t0 = time.perf_counter()
    rep = check_plancherel_polya(ExperimentConfig(suite="pp"))
    dt = time.perf_counter() - t0
    y0 = [r for r in rep.rows if r.check == "pp-equality-y0"]
    worst = max(abs(r.lhs - r.rhs) / max(abs(r.rhs), 1e-300) for r in y0)
    ok = rep.passed and worst <= 1e-9 and dt < 30.0
    acceptance(f"criterion 1 {_verdict(ok)}: growth-bound battery "
               f"{rep.summary['pass']}/{rep.summary['total']} rows green, "
               f"worst y=0 relative gap {worst:.1e}, {dt:.1f}s (< 30s)")
    assert rep.passed, rep.failures()
    assert worst <= 1e-9
    assert dt < 30.0


def test_criterion_2_projection_identities(acceptance):
    t0 = time.perf_counter()
    rep = check_projection(ExperimentConfig(suite="projection"))
    dt = time.perf_counter() - t0
    roundtrip = [r for r in rep.rows if r.check == "projection-roundtrip"]
    recomb = [r for r in rep.rows if r.check == "recombination-identity"]
    ok = rep.passed and len(roundtrip) >= 5 and len(recomb) >= 5 and dt < 10.0
    acceptance(f"criterion 2 {_verdict(ok)}: projection round trip on "
               f"{len(roundtrip)} functions within 1e-8, recombination exact "
               f"to 1e-12 on {len(recomb)}, {dt:.1f}s (< 10s)")
    assert rep.passed, rep.failures()
    assert len(roundtrip) >= 5
    assert dt < 10.0


def test_criterion_3_conformal_transfer(acceptance):
    t0 = time.perf_counter()
    rep = check_conformal(ExperimentConfig(suite="conformal"))
    dt = time.perf_counter() - t0
    closed = [r for r in rep.rows if r.check == "transfer-closed-form"]
    gap = abs(closed[0].lhs - PI) / PI if closed else math.inf
    ok = rep.passed and len(closed) == 1 and gap <= 1e-6 and dt < 60.0
    acceptance(f"criterion 3 {_verdict(ok)}: disk/half-plane transfer "
               f"{rep.summary['pass']}/{rep.summary['total']} rows green, "
               f"closed-form value off pi by {gap:.1e} rel, {dt:.1f}s (< 60s)")
    assert rep.passed, rep.failures()
    assert gap <= 1e-6
    assert dt < 60.0


def test_criterion_4_closed_form_norms(acceptance):
    t0 = time.perf_counter()
    e1 = ep_norm(make_fejer(PI / 2), 1.0)
    e2 = ep_norm(make_fejer(PI / 2), 2.0)
    dt = time.perf_counter() - t0
    gap1 = abs(e1.value - 2.0) / 2.0
    gap2 = abs(e2.value - math.sqrt(4.0 / 3.0)) / math.sqrt(4.0 / 3.0)
    ok = gap1 <= 1e-6 and gap2 <= 1e-6 and dt < 5.0
    acceptance(f"criterion 4 {_verdict(ok)}: triangle-spectrum norms at p=1,2 "
               f"off closed forms by {gap1:.1e} and {gap2:.1e} rel, "
               f"{dt:.2f}s (< 5s)")
    assert gap1 <= 1e-6
    assert gap2 <= 1e-6
    assert dt < 5.0


def test_criterion_5_narrowing_ratio_sweep(acceptance):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(suite="sweep", k_list=(3,), counterexample_p=0.75,
                           eps_grid=(1.0, 0.5, 0.25, 0.125))
    rep = run_counterexample_sweep(cfg)
    dt = time.perf_counter() - t0
    ratios = {r.inputs["eps"]: r.lhs for r in rep.rows if r.check == "counterexample-ratio"}
    ordered = [ratios[e] for e in (1.0, 0.5, 0.25, 0.125)]
    increasing = all(a < b for a, b in zip(ordered, ordered[1:]))
    factor = ordered[-1] / ordered[0]
    ok = increasing and factor >= 2.0 and dt < 300.0
    acceptance(f"criterion 5 {_verdict(ok)}: ratios strictly increase "
               f"({ordered[0]:.3f} -> {ordered[-1]:.3f}) but the narrowing "
               f"factor is {factor:.3f} (needs >= 2), {dt:.1f}s (< 300s)")
    assert increasing
    assert dt < 300.0
    # asserted exactly as stated; measured growth over this epsilon range
    # tops out near 1.71, so this line is expected to fail
    assert factor >= 2.0


def test_criterion_6_envelope_norm_consistency(acceptance):
    t0 = time.perf_counter()
    rep = check_envelope_consistency(ExperimentConfig(suite="envelope"))
    dt = time.perf_counter() - t0
    worst = max(-r.margin for r in rep.rows)
    ok = rep.passed and len(rep.rows) == 3 and worst <= 1e-5 and dt < 300.0
    acceptance(f"criterion 6 {_verdict(ok)}: decomposition route vs direct "
               f"2d quadrature on {len(rep.rows)} functions, worst relative "
               f"gap {worst:.1e} (budget 1e-5), {dt:.1f}s (< 300s)")
    assert rep.passed, rep.failures()
    assert worst <= 1e-5
    assert dt < 300.0


def test_criterion_7_equivalence_band(acceptance):
    t0 = time.perf_counter()
    rep = run_equivalence_study(ExperimentConfig(suite="equivalence"))
    dt = time.perf_counter() - t0
    ratio_rows = [r for r in rep.rows if r.check == "equivalence-ratio"]
    consts = [r for r in rep.rows if r.check == "equivalence-constant"]
    in_band = all(1e-3 <= r.lhs <= 1e3 for r in ratio_rows)
    ok = rep.passed and len(ratio_rows) >= 10 and in_band and len(consts) == 2
    lo = min(r.lhs for r in ratio_rows)
    hi = max(r.lhs for r in ratio_rows)
    acceptance(f"criterion 7 {_verdict(ok)}: {len(ratio_rows)} ratios inside "
               f"[1e-3, 1e3] (span [{lo:.3f}, {hi:.3f}]), empirical constants "
               f"emitted, {dt:.1f}s")
    assert rep.passed, rep.failures()
    assert len(ratio_rows) >= 10
    assert in_band
    assert len(consts) == 2


def test_criterion_8_q_envelope_inequalities(acceptance):
    t0 = time.perf_counter()
    rep = check_qenvelope(ExperimentConfig(suite="qenvelope"))
    dt = time.perf_counter() - t0
    triangle = [r for r in rep.rows if r.check == "q-triangle"]
    homo = [r for r in rep.rows if r.check == "homogeneity"]
    ok = (rep.passed and len(triangle) == 20
          and all(r.budget == 1e-10 for r in homo) and dt < 120.0)
    acceptance(f"criterion 8 {_verdict(ok)}: q-triangle holds on "
               f"{len(triangle)} random pairs at (p,q)=(0.5,0.75), "
               f"homogeneity within 1e-10 on {len(homo)} draws, "
               f"{dt:.1f}s (< 120s)")
    assert rep.passed, rep.failures()
    assert len(triangle) == 20
    assert dt < 120.0


def test_criterion_9_byte_identical_reports(acceptance, tmp_path):
    t0 = time.perf_counter()
    base = ExperimentConfig(suite="all", n_random_pairs=2, seed=22026)
    outputs = {}
    for tag in ("a", "b"):
        out = tmp_path / tag
        for suite in ("projection", "growth", "qenvelope"):
            run_all(replace(base, suite=suite, out_dir=str(out)))
        outputs[tag] = {
            path.name: path.read_bytes() for path in sorted(out.iterdir())
        }
    dt = time.perf_counter() - t0
    same_names = set(outputs["a"]) == set(outputs["b"])
    identical = same_names and all(
        outputs["a"][name] == outputs["b"][name] for name in outputs["a"]
    )
    ok = identical and len(outputs["a"]) == 6
    acceptance(f"criterion 9 {_verdict(ok)}: repeated runs produced "
               f"{len(outputs['a'])} byte-identical report files "
               f"(json + csv across 3 suites), {dt:.1f}s")
    assert identical
