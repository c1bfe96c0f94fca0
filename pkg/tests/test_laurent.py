import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polys
from pmra.laurent import ONE, ZERO, Z, LaurentPoly, lp_add, lp_conj, lp_eval, lp_mul

S2 = 1 / math.sqrt(2)


def test_pruning_on_construction():
    f = LaurentPoly({0: 1.0, 3: 1e-15, -2: 0.0})
    assert f.support() == [0]


def test_add_cancellation():
    assert lp_add(1 + Z, 1 - Z) == LaurentPoly({0: 2})


def test_add_identity_and_disjoint_union():
    f = LaurentPoly({-1: 1, 1: 1})
    assert lp_add(ZERO, f) == f
    assert lp_add(LaurentPoly.monomial(-1), Z) == f


def test_mul_examples():
    assert lp_mul(1 + Z, 1 - Z) == 1 - Z * Z
    f = LaurentPoly({-2: 3j, 5: 1})
    assert lp_mul(f, ONE) == f
    # direct convolution: (1 + z^-1)(1 + z) = z^-1 + 2 + z
    assert lp_mul(1 + LaurentPoly.monomial(-1), 1 + Z) == LaurentPoly({-1: 1, 0: 2, 1: 1})


def test_conj_examples():
    assert lp_conj(LaurentPoly({1: 1j})) == LaurentPoly({-1: -1j})
    h = LaurentPoly({0: S2, 1: S2})
    assert lp_conj(h) == LaurentPoly({0: S2, -1: S2})


def test_eval_examples():
    assert lp_eval(Z, 0) == pytest.approx(1)
    assert abs(lp_eval(1 + Z, 0.5)) < 1e-15
    f = LaurentPoly({-1: 1, 0: 2, 1: 1})
    assert lp_eval(f, 0.25) == pytest.approx(2)


def test_vectorised_eval_matches_scalar():
    f = LaurentPoly({-3: 1 - 2j, 0: 0.5, 4: 2j})
    t = np.linspace(-1, 1, 17)
    assert np.allclose(f(t), [f(float(s)) for s in t], atol=1e-14)


def test_json_round_trip():
    f = LaurentPoly({-2: 1 + 2j, 7: -0.25})
    assert LaurentPoly.from_json(f.to_json()) == f


@pytest.mark.parametrize("bad", [{}, {"coeffs": [[1, 2]]}, {"coeffs": [[0.5, 1, 0]]}])
def test_json_rejects_malformed(bad):
    with pytest.raises(ValueError):
        LaurentPoly.from_json(bad)


@given(polys())
def test_conj_is_involution(f):
    assert lp_conj(lp_conj(f)) == f


@given(polys(), polys())
def test_conj_is_multiplicative(f, g):
    assert lp_conj(f * g).close_to(lp_conj(f) * lp_conj(g), 1e-12)


@given(polys(), polys(), st.floats(-2, 2))
def test_eval_is_ring_homomorphism(f, g, t):
    assert abs((f * g)(t) - f(t) * g(t)) <= 1e-10 * (1 + abs(f(t) * g(t)))


@given(polys(), st.floats(-2, 2))
@settings(max_examples=50)
def test_conj_times_self_is_nonnegative(f, t):
    v = (f.conj() * f)(t)
    assert abs(v.imag) <= 1e-10 * (1 + abs(v))
    assert v.real >= -1e-10 * (1 + abs(v))
