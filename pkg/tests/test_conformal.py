"""Cayley map identities and the weighted norm transfer between domains."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pwenv import (
    CayleyMap,
    DomainError,
    PoleError,
    cayley,
    cayley_derivative,
    cayley_identities,
    cayley_inverse,
    transfer_to_disk,
    verify_transfer_identity,
)

PI = math.pi


def test_cayley_maps_halfplane_into_disk():
    zs = np.array([1j, 0.5 + 0.25j, -3.0 + 2.0j, 100.0 + 0.001j])
    ws = cayley(zs)
    assert np.all(np.abs(ws) < 1.0)
    assert cayley(1j) == pytest.approx(0.0)
    # boundary goes to boundary
    assert abs(cayley(2.0 + 0.0j)) == pytest.approx(1.0, abs=1e-14)


def test_cayley_pole_and_inverse_pole():
    with pytest.raises(PoleError):
        cayley(-1j)
    with pytest.raises(PoleError):
        cayley_inverse(-1.0 + 0.0j)


def test_cayley_identities_match_closed_forms():
    for z in (0.3 + 0.8j, -2.0 + 0.05j, 10.0 + 30.0j):
        one_minus, deriv_sq = cayley_identities(z)
        assert one_minus == pytest.approx(1.0 - abs(cayley(z)) ** 2, rel=1e-12)
        assert deriv_sq == pytest.approx(abs(cayley_derivative(z)) ** 2, rel=1e-12)
    with pytest.raises(DomainError):
        cayley_identities(1.0 - 0.5j)


def test_cayley_map_object_delegates():
    m = CayleyMap()
    z = 0.7 + 1.3j
    assert m(z) == cayley(z)
    assert m.inverse(m(z)) == pytest.approx(z, rel=1e-14)
    assert m.derivative(z) == cayley_derivative(z)


def test_transfer_closed_form_pi():
    rep = verify_transfer_identity(lambda w: np.ones_like(np.asarray(w, complex)),
                                   1.0, 0.0, rel_tol=1e-7)
    assert rep.disk_value == pytest.approx(PI, rel=1e-6)
    assert rep.halfplane_value == pytest.approx(PI, rel=1e-6)
    assert rep.consistent


def test_transfer_zero_function_is_exact():
    rep = verify_transfer_identity(lambda w: np.zeros_like(np.asarray(w, complex)),
                                   1.0, 0.0, rel_tol=1e-6)
    assert rep.disk_value == 0.0
    assert rep.halfplane_value == 0.0
    assert rep.abs_gap == 0.0


def test_transfer_report_json_contract():
    rep = verify_transfer_identity(lambda w: np.ones_like(np.asarray(w, complex)),
                                   1.0, 0.0, rel_tol=1e-6)
    d = rep.to_json_dict()
    for key in ("p", "alpha", "disk_value", "halfplane_value", "error_budget"):
        assert key in d


def test_transfer_polynomial_function():
    # smooth non-constant symbol, negative-weight pair
    rep = verify_transfer_identity(lambda w: (1.0 + 0.5 * np.asarray(w, complex)) ** 2,
                                   0.75, 1.0 / 0.75 - 2.0, rel_tol=1e-6)
    assert rep.abs_gap <= rep.error_budget


def test_transfer_to_disk_pointwise_identity():
    # the constructed disk twin must satisfy the defining relation pointwise
    p, alpha = 1.0, 0.5
    F = lambda z: 1.0 / (np.asarray(z, complex) + 2j) ** 3
    g = transfer_to_disk(F, p, alpha)
    for z in (0.4 + 0.9j, -1.0 + 0.2j, 3.0 + 5.0j):
        w = cayley(z)
        power = (2.0 * alpha + 4.0) / p
        back = np.asarray(g(w), complex) * (4.0 ** ((alpha + 1.0) / p)) \
            / (2j / (1.0 + w)) ** power
        assert complex(back) == pytest.approx(complex(F(z)), rel=1e-12)


@given(x=st.floats(-20.0, 20.0), y=st.floats(0.01, 50.0))
def test_cayley_roundtrip(x, y):
    z = complex(x, y)
    assert abs(cayley(z)) < 1.0
    assert cayley_inverse(cayley(z)) == pytest.approx(z, rel=1e-11, abs=1e-11)
    one_minus, deriv_sq = cayley_identities(z)
    assert one_minus > 0
    assert deriv_sq > 0
