import re
from fractions import Fraction

import pytest

from superpair.errors import CompatibilityError, WindowOverflow
from superpair.polarization import (PairOfProducts, build_from_pair, compute_filtration, extract_pair,
                                    make_laurent_polarized, make_matrix_laurent, mixed_product,
                                    verify_compatibility, verify_filtration_products, verify_polarized)


@pytest.fixture(scope="module")
def laurent():
    return make_laurent_polarized(8)


@pytest.fixture(scope="module")
def mlaurent():
    return make_matrix_laurent(2, 1, 6)


def labelled_table(A):
    return {(A.labels[a], A.labels[b]): {A.labels[c]: v for c, v in row.items() if v}
            for (a, b), row in A.table.items() if any(row.values())}


@pytest.mark.parametrize("which", ["laurent", "mlaurent"])
def test_polarized_fixture_verifies(which, request):
    P = request.getfixturevalue(which)
    rep = verify_polarized(P)
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("which", ["laurent", "mlaurent"])
def test_pair_round_trip(which, request):
    P = request.getfixturevalue(which)
    Q = build_from_pair(extract_pair(P))
    assert labelled_table(Q.alg) == labelled_table(P.alg)
    assert {(P.alg.labels[a], P.alg.labels[b]) for a, b in P.alg.overflow} == \
        {(Q.alg.labels[a], Q.alg.labels[b]) for a, b in Q.alg.overflow}


def test_perturbed_constants_fail_with_witness(laurent):
    bad = laurent.perturbed((0, 2), (0, 2), (0, 4))
    rep = verify_compatibility(bad)
    assert not rep.passed
    w = rep.failures()[0].witness
    assert w["lhs"] != w["rhs"]
    with pytest.raises(CompatibilityError) as exc:
        build_from_pair(extract_pair(bad))
    assert exc.value.witness is not None


def test_random_pair_is_incompatible():
    one = Fraction(1)
    # s+ s+ -> s+_1 always, no minus product: fails the mixed identity
    plus = {((0, a), (0, b)): {(0, 1): one} for a in (1, 2) for b in (1, 2)}
    minus = {((0, a), (0, b)): {(0, 2): one} for a in (1, 2) for b in (1, 2)}
    pair = PairOfProducts((2, 0), plus, minus)
    assert not verify_compatibility(pair).passed


def test_laurent_pairing_is_dual(laurent):
    A = laurent.alg
    for j in range(1, 9):
        for l in range(1, 9):
            assert A.form(A.index((0, -j)), A.index((0, l))) == (j == l)


def test_mixed_products_laurent(laurent):
    # t * t^-1 = 1, t * t^-2 = t^-1, t^-1 * t^2 = t
    assert mixed_product(laurent, "+-", 0, 2, 0, 1) == {(0, 1): 1}
    assert mixed_product(laurent, "+-", 0, 2, 0, 2) == {(0, -1): 1}
    assert mixed_product(laurent, "-+", 0, 1, 0, 3) == {(0, 2): 1}
    with pytest.raises(WindowOverflow):
        mixed_product(laurent, "+-", 0, 9, 0, 1)


def _powers_filtration(N, top):
    """Monomial recursion: t^a is in level m iff every t^(a-k), a-k >= 0, k >= 1, is in level m-1."""
    levels = {}
    prev = set()
    for m in range(top + 1):
        cur = {a for a in range(N) if all(a - k in prev for k in range(1, N + 1) if a - k >= 0)}
        levels[m] = cur
        prev = cur
    return levels


def test_laurent_filtration_matches_monomial_recursion(laurent):
    T = compute_filtration(laurent)
    oracle = _powers_filtration(8, 6)
    for m in range(0, 7):
        assert T.sets[(m, 0)] == tuple(sorted(a + 1 for a in oracle[m]))
        assert T.dim(m, 1) == 0
    # negative levels: the s- annihilator of level n-2 (level -1 is all of A-)
    for n in range(2, 9):
        expect = tuple(j for j in range(1, 9) if all(j != a + 1 for a in oracle[n - 2]))
        assert T.sets[(-n, 0)] == expect
    assert T.sets[(-1, 0)] == tuple(range(1, 9))


@pytest.mark.parametrize("which", ["laurent", "mlaurent"])
def test_filtration_multiplicativity(which, request):
    P = request.getfixturevalue(which)
    rep = verify_filtration_products(P, compute_filtration(P))
    assert rep.passed, rep.failures()


_ORIGIN = re.compile(r"t\^(-?\d+)\(x\)E(\d)(\d)$")


def test_tensor_against_direct_matrix_laurent(mlaurent):
    """Plus products of t^a (x) E_ij agree with t^(a+b) (x) E_ij E_kl computed by hand."""
    A = mlaurent.alg
    parsed = {}
    for lab in mlaurent.keys():
        m = _ORIGIN.match(mlaurent.origin[lab])
        parsed[lab] = (int(m.group(1)), int(m.group(2)), int(m.group(3)))
    back = {v: k for k, v in parsed.items()}
    checked = 0
    for la, (a, i, j) in parsed.items():
        for lb, (b, k, l) in parsed.items():
            key = (a + b, i, l)
            if j != k:
                expect = {}
            elif key in back:
                expect = {back[key]: 1}
            else:
                continue
            ai, bi = A.index(la), A.index(lb)
            if (ai, bi) in A.overflow:
                continue
            got = {A.labels[c]: v for c, v in A.basis_product(ai, bi).items() if v}
            assert got == expect, (la, lb)
            checked += 1
    assert checked > 100
