import random
from fractions import Fraction

import pytest

from superpair.document import build, load_document
from superpair.polarization import make_laurent_polarized, make_matrix_laurent
from superpair.poisson import (bracket1, bracket2, bracket_H, consistency_check, cyclic_splitting_check,
                               differential_check, hamiltonian_map, hamiltonian_operator_check, kappa_centrality,
                               make_loperator, sample_omega, sample_polys, verify_superpair)
from superpair.superpoly import SuperPoly


def lop(name, **over):
    doc, _ = load_document(f"builtin:{name}")
    doc.update(over)
    return build(doc)


@pytest.fixture(scope="module")
def laurent_lop():
    return lop("l4-laurent")


@pytest.fixture(scope="module")
def matrix_lop():
    return lop("l4-matrix-laurent")


@pytest.mark.parametrize("P", [make_laurent_polarized(8), make_matrix_laurent(2, 1, 6)], ids=["laurent", "matrix"])
def test_cyclic_splitting_identity(P):
    rep = cyclic_splitting_check(P, n=60, seed=3)
    assert rep.passed, rep.failures()
    assert all(c.checked >= 50 for c in rep.checks)


def test_differential_pairs_to_derivative(matrix_lop):
    assert differential_check(matrix_lop, max_degree=2).passed


def test_commutative_algebra_has_zero_brackets(laurent_lop):
    # both brackets are built from commutators, so they vanish on a commutative algebra
    for f, g, _ in sample_polys(laurent_lop.variables(), 8, seed=5):
        assert not bracket1(laurent_lop, f, g)
        assert not bracket2(laurent_lop, f, g)


def test_laurent_superpair(laurent_lop):
    samples = sample_polys(laurent_lop.variables(), 10, seed=0)
    assert verify_superpair(laurent_lop, samples).passed
    assert consistency_check(laurent_lop, samples).passed


def test_matrix_laurent_superpair(matrix_lop):
    samples = sample_polys(matrix_lop.variables(), 8, seed=1)
    rep = verify_superpair(matrix_lop, samples)
    assert rep.passed, rep.failures()
    assert consistency_check(matrix_lop, samples).passed


def test_matrix_brackets_are_nontrivial(matrix_lop):
    vs = matrix_lop.variables()
    x = [SuperPoly.var(v) for v in vs]
    assert any(bracket1(matrix_lop, a, b) for a in x for b in x)
    assert any(bracket2(matrix_lop, a, b) for a in x for b in x)


def test_bracket_pencil_is_linear_in_lambda(matrix_lop):
    f, g, _ = sample_polys(matrix_lop.variables(), 1, seed=7)[0]
    for lam in (Fraction(0), Fraction(3), Fraction(-1, 2)):
        assert bracket_H(matrix_lop, lam, f, g) == bracket1(matrix_lop, f, g).scale(lam) + bracket2(matrix_lop, f, g)


def test_hamiltonian_operator_conditions(matrix_lop):
    rep = hamiltonian_operator_check(matrix_lop, eps_values=(0, 1), n=4, seed=0, exhaustive=False)
    assert rep.passed, rep.failures()


def test_noncentral_kappa_fails():
    L = lop("l4-noncentral-kappa")
    assert not kappa_centrality(L).passed
    rep = verify_superpair(L, sample_polys(L.variables(), 3, seed=0), lambdas=(1,))
    assert not rep.passed
    assert not rep["kappa_central"].passed


def test_plus_variant_escapes():
    L = lop("l4-matrix-laurent", variant="plus")
    rep = verify_superpair(L, sample_polys(L.variables(), 2, seed=0), lambdas=(0,))
    assert not rep["H_lands_in_G"].passed


def test_hamiltonian_map_rejects_non_omega(matrix_lop):
    from superpair.graded_algebra import AlgElement
    P = matrix_lop.P
    with pytest.raises(ValueError):
        hamiltonian_map(matrix_lop, 0, AlgElement({P.idx(0, 1): 1}))


def test_hamiltonian_map_skew(matrix_lop):
    rng = random.Random(4)
    P = matrix_lop.P
    from superpair.poisson import gbar_form
    for _ in range(5):
        u, v = sample_omega(matrix_lop, rng, 0), sample_omega(matrix_lop, rng, 0)
        assert gbar_form(P, hamiltonian_map(matrix_lop, 1, u), v) == -gbar_form(P, hamiltonian_map(matrix_lop, 1, v), u)


def test_make_loperator_validation():
    P = make_laurent_polarized(8)
    with pytest.raises(ValueError):
        make_loperator(P, 0, {(0, 3): 1}, {(0, 1): 1})
    with pytest.raises(ValueError):
        make_loperator(P, 1, {(0, 8): 1}, {(0, 1): 1})
