"""Half-plane splitting, recombination, probes, and decompositions."""

import math

import numpy as np
import pytest

from pwenv import (
    BandLimitedFunction,
    Dictionary,
    HalfPlanePair,
    InvalidArgumentError,
    NotHardyError,
    NotInEpError,
    apply_T,
    build_dictionary,
    counterexample_family,
    counterexample_ratio,
    embed_j,
    make_bump,
    make_fejer,
    make_partition,
    minkowski_norm,
    modulate,
    project_Q,
)

PI = math.pi


def test_embed_splits_into_halfplane_spectra():
    pair = embed_j(make_bump(-1.0, 1.0, 3))
    lo_p, hi_p = pair.plus.density.support
    lo_m, hi_m = pair.minus.density.support
    assert lo_p >= -1e-12 and hi_p <= 2.0 * PI + 1e-12
    assert lo_m >= -2.0 * PI - 1e-12 and hi_m <= 1e-12


def test_embed_rejects_wide_type():
    with pytest.raises(NotInEpError):
        embed_j(modulate(make_bump(-0.5, 0.5, 3), 3.0))


def test_halfplane_pair_gate():
    good = BandLimitedFunction(make_bump(0.5, 2.0, 2))
    bad = BandLimitedFunction(make_bump(-1.0, 1.0, 2))
    with pytest.raises(NotHardyError):
        HalfPlanePair(plus=bad, minus=good.modulated(-3.0))
    HalfPlanePair(plus=good, minus=BandLimitedFunction(make_bump(-2.0, -0.5, 2)))


def test_recombination_identity_is_exact():
    pu = make_partition(4)
    u = make_bump(-1.0, 1.0, 3)
    out = apply_T(u, u, pu)
    ts = np.linspace(-PI, PI, 1501)
    assert np.max(np.abs(out(ts) - u(ts))) < 1e-13


def test_recombination_mixes_two_inputs():
    pu = make_partition(3)
    u = make_bump(-1.0, 2.0, 3)
    v = make_bump(-2.0, 1.0, 3)
    out = apply_T(u, v, pu)
    ts = np.linspace(-PI, PI, 801)
    want = u(ts) * pu.phi_hat(ts) + v(ts) * pu.psi_hat(ts)
    assert np.max(np.abs(out(ts) - want)) < 1e-12


def test_projection_inverts_embedding():
    pu = make_partition(4)
    f = BandLimitedFunction(make_bump(-2.0, 1.5, 3))
    back = project_Q(embed_j(f), pu)
    xs = np.linspace(-30.0, 30.0, 901)
    ref = np.max(np.abs(f.eval_many(xs)))
    assert np.max(np.abs(back.eval_many(xs) - f.eval_many(xs))) < 1e-9 * ref


def test_counterexample_family_shape():
    f = counterexample_family(0.5, 3)
    lo, hi = f.density.support
    assert lo == pytest.approx(-PI)
    assert hi == pytest.approx(-PI + 0.5)
    assert complex(f.value_at_zero()).real == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        counterexample_family(0.0)
    with pytest.raises(InvalidArgumentError):
        counterexample_family(4.0)
    with pytest.raises(InvalidArgumentError):
        counterexample_family(0.5, k=1)


def test_counterexample_ratio_grows_as_spectrum_narrows(fast_quad):
    wide = counterexample_ratio(1.0, 0.75, fast_quad)
    narrow = counterexample_ratio(0.5, 0.75, fast_quad)
    assert narrow > wide > 1.0


def test_dictionary_validation():
    with pytest.raises(InvalidArgumentError):
        Dictionary(atoms=(), names=(), p=0.75)
    atom = BandLimitedFunction(make_bump(-1.0, 1.0, 3))
    with pytest.raises(InvalidArgumentError):
        Dictionary(atoms=(atom,), names=("a", "b"), p=0.75)
    with pytest.raises(InvalidArgumentError):
        Dictionary(atoms=(atom,), names=("a",), p=1.5)
    with pytest.raises(NotInEpError):
        Dictionary(atoms=(BandLimitedFunction(make_bump(-2.0 * PI, 2.0 * PI, 3)),),
                   names=("wide",), p=0.75)


def test_build_dictionary_atoms_are_normalized(fast_quad):
    d = build_dictionary(0.75, ks=(2,), quad=fast_quad,
                         grid_halfwidth=8.0, grid_spacing=0.5)
    assert len(d) > 4
    assert d.max_norm_defect(fast_quad) < 1e-9
    assert len(d.grid()) == 33


def test_fejer_atoms_dropped_at_small_p(fast_quad):
    small = build_dictionary(0.5, ks=(2,), quad=fast_quad)
    assert not any("fejer" in name for name in small.names)
    large = build_dictionary(0.9, ks=(2,), quad=fast_quad)
    assert any("fejer" in name for name in large.names)


def test_minkowski_zero_target(fast_quad):
    d = build_dictionary(0.75, ks=(2,), quad=fast_quad,
                         grid_halfwidth=8.0, grid_spacing=0.5)
    res = minkowski_norm(BandLimitedFunction(make_bump(-1, 1, 3).scale(0.0)), d, fast_quad)
    assert res.objective == 0.0
    assert res.residual == 0.0


def test_minkowski_recovers_single_atom(fast_quad):
    d = build_dictionary(0.75, ks=(2,), quad=fast_quad,
                         grid_halfwidth=8.0, grid_spacing=0.5)
    target = BandLimitedFunction(d.atoms[3].density.scale(2.5))
    res = minkowski_norm(target, d, fast_quad)
    # one admissible reconstruction is 2.5 x the atom itself, so the optimum
    # cannot exceed that by more than solver slack
    assert 0.0 < res.objective <= 2.5 * (1.0 + 1e-6)
    assert res.residual <= 1e-3 * 2.5
    payload = res.to_json_dict()
    assert set(payload) == {"objective", "lambdas", "residual"}
    assert all(set(item) == {"atom", "value"} for item in payload["lambdas"])


def test_minkowski_rejects_wide_target(fast_quad):
    d = build_dictionary(0.75, ks=(2,), quad=fast_quad,
                         grid_halfwidth=8.0, grid_spacing=0.5)
    with pytest.raises(NotInEpError):
        minkowski_norm(BandLimitedFunction(make_bump(-1.5 * PI, 1.5 * PI, 3)), d, fast_quad)


def test_minkowski_scales_with_target(fast_quad):
    d = build_dictionary(0.75, ks=(2,), quad=fast_quad,
                         grid_halfwidth=8.0, grid_spacing=0.5)
    f = BandLimitedFunction(make_fejer(PI / 2))
    base = minkowski_norm(f, d, fast_quad).objective
    doubled = minkowski_norm(BandLimitedFunction(f.density.scale(2.0)), d, fast_quad).objective
    assert doubled == pytest.approx(2.0 * base, rel=5e-3)
