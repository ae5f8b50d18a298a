import itertools
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superpair.errors import CocycleError
from superpair.graded_algebra import (AlgElement, alg_form, alg_mul, cyclic_group_table, make_ground_field,
                                      make_hecke_algebra, make_matrix_superalgebra, make_twisted_group_algebra,
                                      reduced_word, supertrace, tensor_algebras)
from superpair.superpoly import SuperPoly, xvar


def twisted_z2():
    return make_twisted_group_algebra(cyclic_group_table(2), [[1, 1], [1, -1]])


@pytest.mark.parametrize("make", [
    lambda: make_ground_field(),
    lambda: make_matrix_superalgebra(2, 1),
    lambda: make_matrix_superalgebra(3, 2),
    twisted_z2,
    lambda: make_hecke_algebra(2, 1, Fraction(1, 2)),
    lambda: make_hecke_algebra(3, 2, Fraction(1, 3)),
])
def test_builtin_algebras_pass_all_axioms(make):
    from superpair.graded_algebra import verify_algebra

    rep = verify_algebra(make())
    assert rep.passed, rep.lines()


def test_matrix_superalgebra_form_values():
    A = make_matrix_superalgebra(2, 1)
    e12, e21 = A.index("E12"), A.index("E21")
    assert A.parities[e12] == 1
    assert A.form(e12, e21) == 1
    assert A.form(e21, e12) == -1


def test_supertrace_matches_block_signs():
    A = make_matrix_superalgebra(3, 2)
    assert supertrace(A, {A.index("E11"): 1}) == 1
    assert supertrace(A, {A.index("E33"): 1}) == -1


def test_perturbed_constant_fails_with_witness():
    from superpair.graded_algebra import verify_algebra

    A = make_matrix_superalgebra(2, 1)
    bad = A.perturbed(A.index("E12"), A.index("E21"), A.index("E22"))
    rep = verify_algebra(bad)
    assert not rep.passed
    assert all(c.witness is not None for c in rep.failures())


def test_twisted_group_algebra_values():
    A = twisted_z2()
    u1 = A.index("u1")
    assert A.table[(u1, u1)] == {A.index("u0"): -1}
    assert A.form(u1, u1) == -1


def test_bad_cocycle_raises_with_witness():
    with pytest.raises(CocycleError) as exc:
        make_twisted_group_algebra(cyclic_group_table(2), [[1, 2], [1, 1]])
    assert exc.value.witness is not None


def test_hecke_relations_from_independent_oracle():
    # quadratic relation T^2 = (q-1) T + q and braid relation, straight from the table
    q = Fraction(3)
    A = make_hecke_algebra(3, q, Fraction(1, 5))
    one = {0: Fraction(1)}
    gens = [A.index(f"T{i}") for i in (1, 2)]

    def mul(x, y):
        out = {}
        for a, s in x.items():
            for b, t in y.items():
                for c, v in A.table.get((a, b), {}).items():
                    out[c] = out.get(c, 0) + s * t * v
        return {k: v for k, v in out.items() if v}

    for g in gens:
        T = {g: Fraction(1)}
        rhs = {g: q - 1, 0: q}
        assert mul(T, T) == rhs
    T1, T2 = ({g: Fraction(1)} for g in gens)
    assert mul(mul(T1, T2), T1) == mul(mul(T2, T1), T2)
    assert one == A.identity


def test_hecke_k2_gram():
    A = make_hecke_algebra(2, 1, Fraction(1, 2))
    assert [list(r) for r in A.gram] == [[1, Fraction(1, 2)], [Fraction(1, 2), 1]]


def test_reduced_words_have_inversion_length():
    for w in itertools.permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if w[i] > w[j])
        assert len(reduced_word(w)) == inv


@pytest.mark.parametrize("pair", [
    (lambda: make_matrix_superalgebra(3, 2), lambda: make_hecke_algebra(2, 1, Fraction(1, 2))),
    (twisted_z2, lambda: make_matrix_superalgebra(2, 1)),
    (lambda: make_matrix_superalgebra(2, 1), lambda: make_matrix_superalgebra(2, 1)),
])
def test_tensor_products_pass_quickly(pair):
    from superpair.graded_algebra import verify_algebra

    t = time.perf_counter()
    rep = verify_algebra(tensor_algebras(pair[0](), pair[1]()))
    assert rep.passed, rep.lines()
    assert time.perf_counter() - t < 5


e_odd = [xvar(1, j) for j in (1, 2)]
e_even = [xvar(0, 1)]


@settings(max_examples=40)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(-2, 2), st.sampled_from(e_even + e_odd)), min_size=1,
                max_size=3))
def test_element_products_associative_with_polynomial_coefficients(entries):
    A = make_matrix_superalgebra(2, 1)

    def el(k):
        a, c, v = entries[k % len(entries)]
        return AlgElement({a: SuperPoly.var(v).scale(c) + 1})

    x, y, z = el(0), el(1), el(2)
    assert alg_mul(A, alg_mul(A, x, y), z) == alg_mul(A, x, alg_mul(A, y, z))
    assert alg_form(A, alg_mul(A, x, y), z) == alg_form(A, x, alg_mul(A, y, z))
