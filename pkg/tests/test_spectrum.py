"""Spectral density algebra: construction, jumps, products, partitions."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pwenv import (
    InvalidArgumentError,
    PartitionOfUnity,
    SpectralDensity,
    make_bump,
    make_fejer,
    make_partition,
    modulate,
    multiply_pointwise,
    smoothstep,
    smoothstep_coefficients,
)

PI = math.pi


def test_smoothstep_coefficients_low_orders():
    assert np.array_equal(smoothstep_coefficients(0), [0.0, 1.0])
    assert np.array_equal(smoothstep_coefficients(1), [0.0, 0.0, 3.0, -2.0])
    assert np.array_equal(smoothstep_coefficients(2), [0.0, 0.0, 0.0, 10.0, -15.0, 6.0])


@pytest.mark.parametrize("k", [0, 1, 2, 3, 5, 8])
def test_smoothstep_endpoints_and_symmetry(k):
    assert smoothstep(k, 0.0) == 0.0
    assert smoothstep(k, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert smoothstep(k, 0.5) == pytest.approx(0.5, abs=1e-12)
    # clamped outside the ramp
    assert smoothstep(k, -3.0) == 0.0
    assert smoothstep(k, 7.0) == pytest.approx(1.0, abs=1e-12)
    w = np.linspace(0.0, 1.0, 257)
    vals = smoothstep(k, w)
    # high orders carry ~1e4 integer coefficients, so cancellation noise
    # around 1e-11 is expected in float64
    assert np.all(np.diff(vals) >= -1e-9)
    assert np.allclose(vals + smoothstep(k, 1.0 - w), 1.0, atol=1e-10)


def test_smoothstep_derivatives_vanish_at_ends():
    k = 3
    c = smoothstep_coefficients(k)
    for m in range(1, k + 1):
        d = np.polynomial.polynomial.polyder(c, m)
        assert np.polynomial.polynomial.polyval(0.0, d) == pytest.approx(0.0, abs=1e-9)
        assert np.polynomial.polynomial.polyval(1.0, d) == pytest.approx(0.0, abs=1e-9)


def test_smoothstep_rejects_bad_order():
    with pytest.raises(InvalidArgumentError):
        smoothstep_coefficients(-1)
    with pytest.raises(InvalidArgumentError):
        smoothstep_coefficients(2.5)


def test_bump_profile_plateau_and_support():
    s = make_bump(-1.0, 2.0, 2)
    assert s.support == (-1.0, 2.0)
    ts = np.linspace(0.05, 0.95, 19)
    assert np.allclose(s(ts), 1.0, atol=1e-14)          # middle third
    assert np.allclose(s(np.array([-1.5, 2.5])), 0.0)   # outside
    assert s.smoothness_order == 2


def test_bump_rejects_bad_intervals():
    with pytest.raises(InvalidArgumentError):
        make_bump(1.0, 1.0, 2)
    with pytest.raises(InvalidArgumentError):
        make_bump(-3.0 * PI, 0.0, 2)


def test_fejer_triangle_shape():
    a = PI / 4
    s = make_fejer(a)
    assert s.support == (-2.0 * a, 2.0 * a)
    assert s.integral() == pytest.approx(1.0, abs=1e-14)
    assert complex(s(np.array([0.0]))[0]).real == pytest.approx(1.0 / (2.0 * a), rel=1e-14)
    with pytest.raises(InvalidArgumentError):
        make_fejer(2.0 * PI)
    with pytest.raises(InvalidArgumentError):
        make_fejer(0.0)


def test_modulate_shifts_support_and_values():
    s = make_bump(-0.5, 1.0, 3)
    m = modulate(s, 0.75)
    lo, hi = m.support
    assert lo == pytest.approx(0.25) and hi == pytest.approx(1.75)
    ts = np.linspace(0.3, 1.7, 41)
    assert np.allclose(m(ts), s(ts - 0.75), atol=1e-14)


def test_addition_merges_float_twin_breakpoints():
    # 0.1 + 0.2 and 0.3 are distinct doubles one ulp apart; the sum of two
    # bumps sharing that analytic endpoint must not keep a sliver piece
    b1, b2 = 0.1 + 0.2, 0.3
    assert b1 != b2
    s = make_bump(-0.5, b1, 2) + make_bump(-0.5, b2, 2)
    gaps = np.diff(s.breakpoints)
    assert np.min(gaps) > 1e-6
    ts = np.linspace(-0.6, 0.4, 101)
    ref = make_bump(-0.5, b1, 2)(ts) + make_bump(-0.5, b2, 2)(ts)
    assert np.allclose(s(ts), ref, atol=1e-12)


def test_addition_and_scaling_pointwise():
    s1 = make_bump(-2.0, 0.5, 2)
    s2 = make_fejer(PI / 3)
    ts = np.linspace(-2.2, 2.2, 201)
    assert np.allclose((s1 + s2)(ts), s1(ts) + s2(ts), atol=1e-13)
    assert np.allclose((s1 - s2)(ts), s1(ts) - s2(ts), atol=1e-13)
    assert np.allclose(s1.scale(2.5 - 1.0j)(ts), (2.5 - 1.0j) * s1(ts), atol=1e-13)
    assert s1.scale(0.0).is_zero


def test_multiply_pointwise_matches_grid():
    s = make_bump(-1.0, 1.5, 3)
    m = make_bump(-0.5, 2.0, 2)
    prod = multiply_pointwise(s, m)
    ts = np.linspace(-1.2, 2.1, 301)
    assert np.allclose(prod(ts), s(ts) * m(ts), atol=1e-12)
    lo, hi = prod.support
    assert lo >= -0.5 - 1e-12 and hi <= 1.5 + 1e-12


def test_translate_range_guard():
    s = make_bump(0.0, PI, 2)
    moved = s.translate(PI / 2)
    assert moved.support[1] == pytest.approx(1.5 * PI)
    with pytest.raises(InvalidArgumentError):
        s.translate(1.5 * PI)


def test_restrict_and_outside_mass():
    s = make_bump(-2.0, 2.0, 2)
    inner = s.restrict(-1.0, 1.0)
    assert inner.support == (-1.0, 1.0)
    assert s.max_abs_outside(-3.0, 3.0) == 0.0
    assert s.max_abs_outside(-0.1, 0.1) > 0.5


def test_zero_density_properties():
    z = SpectralDensity.zero()
    assert z.is_zero
    assert z.integral() == 0
    assert np.all(z(np.linspace(-1, 1, 5)) == 0.0)


def test_json_roundtrip():
    s = modulate(make_bump(-1.0, 0.5, 3), 0.2) + make_fejer(PI / 5).scale(0.7)
    back = SpectralDensity.from_json(s.to_json())
    ts = np.linspace(-1.5, 1.5, 401)
    assert np.allclose(back(ts), s(ts), atol=1e-14)
    assert np.allclose(back.breakpoints, s.breakpoints)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_jump_table_detects_smoothness(k):
    s = make_bump(-1.0, 1.0, k)
    assert s.smoothness_order == k
    jt = s.jump_table()
    assert jt.first_order == k + 1


def test_partition_sums_to_one():
    pu = make_partition(4)
    assert isinstance(pu, PartitionOfUnity)
    assert pu.identity_defect() < 1e-12
    ts = np.linspace(-PI, PI, 1001)
    total = pu.phi_hat(ts) + pu.psi_hat(ts)
    assert np.allclose(total, 1.0, atol=1e-12)


@given(
    a=st.floats(-PI, PI / 2 - 0.05),
    width=st.floats(0.05, PI / 2),
    k=st.integers(2, 6),
)
def test_bump_mass_closed_form(a, width, k):
    # ramps integrate to half their width by symmetry, so the bump mass is
    # exactly two thirds of the support length
    s = make_bump(a, a + width, k)
    assert complex(s.integral()).real == pytest.approx(2.0 * width / 3.0, rel=1e-12)
    assert abs(complex(s.integral()).imag) < 1e-15


@given(
    c=st.floats(-2.0, 2.0),
    a=st.floats(-1.0, 0.0),
    b=st.floats(0.1, 1.0),
)
def test_modulation_preserves_mass_profile(c, a, b):
    s = make_bump(a, b, 2)
    m = modulate(s, c)
    assert complex(m.integral()).real == pytest.approx(complex(s.integral()).real, rel=1e-12)
    assert m.l2_mass_squared() == pytest.approx(s.l2_mass_squared(), rel=1e-12)
