from fractions import Fraction

import pytest
from hypothesis import given, settings

from superpair.superpoly import MIXED, ONE, ZERO, SuperPoly, uvar
from strategies import EVEN_X, ODD_X, jet_polys, x_polys

x1, x2 = (SuperPoly.var(v) for v in EVEN_X)
t1, t2, t3 = (SuperPoly.var(v) for v in ODD_X)


def test_odd_variables_anticommute_and_square_to_zero():
    assert t1 * t2 == -(t2 * t1)
    assert t1 * t1 == ZERO
    assert (t1 * t2 * t3).parity() == 1


def test_even_variables_commute():
    assert x1 * x2 == x2 * x1
    assert (x1 + t1).parity() == MIXED


def test_left_derivative_sign():
    # d/dt2 (t1 t2) = -t1 since t2 has to pass t1
    assert (t1 * t2).derive(ODD_X[1]) == -t1
    assert (t1 * t2).derive(ODD_X[0]) == t2


def test_total_derivative_on_jets():
    u = SuperPoly.var(uvar(0, 1, 0))
    u1 = SuperPoly.var(uvar(0, 1, 0, 1))
    assert (u * u).total_derivative() == (u * u1).scale(2)


def test_total_derivative_rejects_plain_variables():
    with pytest.raises(ValueError):
        x1.total_derivative()


@given(x_polys, x_polys, x_polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a


@given(x_polys, x_polys)
def test_supercommutativity(a, b):
    for pa in a.split_parity():
        for pb in b.split_parity():
            if pa and pb:
                s = -1 if pa.parity() * pb.parity() else 1
                assert pa * pb == (pb * pa).scale(s)


@given(x_polys, x_polys)
def test_derivation_is_graded_leibniz(a, b):
    for v in EVEN_X + ODD_X:
        for pa in a.split_parity():
            if not pa:
                continue
            s = -1 if v.parity and pa.parity() else 1
            assert (pa * b).derive(v) == pa.derive(v) * b + (pa * b.derive(v)).scale(s)


@settings(max_examples=50)
@given(jet_polys, jet_polys)
def test_total_derivative_is_even_derivation(a, b):
    assert (a * b).total_derivative() == a.total_derivative() * b + a * b.total_derivative()


def test_constants_and_fractions():
    p = SuperPoly.const(Fraction(1, 2)) * x1
    assert p.scale(2) == x1
    assert SuperPoly.coerce(3).constant_term() == 3
