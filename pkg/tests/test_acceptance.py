"""Acceptance criteria 1-11, one PASS/FAIL line each.

Lines are printed as they complete and repeated in the pytest terminal summary;
``python3 tests/test_acceptance.py`` runs them without pytest.
"""

import json
import sys
import tempfile
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import symbolic as sy  # noqa: E402
from superpair.cli import main  # noqa: E402
from superpair.document import build, load_document  # noqa: E402
from superpair.graded_algebra import (AlgElement, cyclic_group_table, make_ground_field,  # noqa: E402
                                      make_hecke_algebra, make_matrix_superalgebra, make_twisted_group_algebra,
                                      tensor_algebras, verify_algebra)
from superpair.pdo import (annihilation_check, associativity_check, conservation_check,  # noqa: E402
                           fractional_root, make_lax, pdo_power, sample_densities, trace_commutator_check,
                           verify_hamiltonian_superpair, zero_curvature_residual)
from superpair.polarization import (build_from_pair, compute_filtration, extract_pair,  # noqa: E402
                                    make_laurent_polarized, make_matrix_laurent, verify_compatibility,
                                    verify_filtration_products)
from superpair.poisson import consistency_check, cyclic_splitting_check, sample_polys, verify_superpair  # noqa: E402
from superpair.superpoly import SuperPoly, uvar  # noqa: E402

RESULTS = []
LAMBDAS = (0, 1, -1, 2)


@contextmanager
def criterion(n, text):
    t = time.perf_counter()
    try:
        yield
    except AssertionError as e:
        line = f"FAIL criterion {n:>2}: {text} ({time.perf_counter() - t:.1f}s) {str(e).splitlines()[0] if str(e) else ''}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"PASS criterion {n:>2}: {text} ({time.perf_counter() - t:.1f}s)"
    RESULTS.append(line)
    print(line)


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def _polarized():
    return {"laurent(8)": make_laurent_polarized(8), "matrix-laurent(2,1,6)": make_matrix_laurent(2, 1, 6)}


def _l4(name):
    doc, _ = load_document(f"builtin:{name}")
    return build(doc)


def _kdv():
    return make_lax(make_ground_field(), 1, {2: {0: 1}}, slots=[(0, 0)], name="d^2+u")


def test_criterion_01_algebra_axioms():
    with criterion(1, "algebra axioms on matrix(3,2), twisted Z/2, Hecke(2), tensor products; each < 5 s"):
        M = make_matrix_superalgebra(3, 2)
        T = make_twisted_group_algebra(cyclic_group_table(2), [[1, 1], [1, -1]])
        H = make_hecke_algebra(2, 1, Fraction(1, 2))
        algebras = {"M(3,2)": M, "twisted": T, "hecke": H,
                    "M(3,2) x hecke": tensor_algebras(M, H),
                    "twisted x M(2,1)": tensor_algebras(T, make_matrix_superalgebra(2, 1)),
                    "hecke x twisted": tensor_algebras(H, T)}
        for name, A in algebras.items():
            rep, dt = timed(verify_algebra, A)
            assert rep.passed, f"{name}: {[c.name for c in rep.failures()]}"
            assert dt < 5, f"{name} took {dt:.1f}s"


def test_criterion_02_polarization_round_trip():
    with criterion(2, "extracted constants satisfy both identities; round trip reproduces tables"):
        for name, P in _polarized().items():
            pair = extract_pair(P)
            rep = verify_compatibility(pair)
            assert rep.passed, f"{name}: {[c.name for c in rep.failures()]}"
            Q = build_from_pair(pair)
            lab = lambda A: {(A.labels[a], A.labels[b]): {A.labels[c]: v for c, v in row.items() if v}
                             for (a, b), row in A.table.items() if any(row.values())}
            assert lab(Q.alg) == lab(P.alg), name


def test_criterion_03_filtration():
    with criterion(3, "Laurent filtration levels span{1..t^m}, m <= 6; four inclusions on both fixtures"):
        P = make_laurent_polarized(8)
        T = compute_filtration(P)
        # oracle: t^a lies in level m iff every t^(a-k) (k >= 1, a-k >= 0) lies in level m-1
        prev = set()
        for m in range(7):
            cur = {a for a in range(8) if all(a - k in prev for k in range(1, 9) if a - k >= 0)}
            assert T.sets[(m, 0)] == tuple(a + 1 for a in sorted(cur)), m
            prev = cur
        for name, Q in _polarized().items():
            rep = verify_filtration_products(Q, compute_filtration(Q))
            assert rep.passed, f"{name}: {[c.name for c in rep.failures()]}"
            assert sum(1 for c in rep.checks if c.checked) >= 4


def test_criterion_04_cyclic_splitting():
    with criterion(4, "cyclic splitting differences vanish on >= 50 triples per fixture"):
        for name, P in _polarized().items():
            rep = cyclic_splitting_check(P, n=50, seed=0)
            assert rep.passed, name
            assert all(c.checked >= 50 for c in rep.checks)


def _superpair_samples(L):
    return sample_polys(L.variables(), 25, seed=0)


def test_criterion_05_superpair():
    with criterion(5, "skew, Jacobi, Leibniz for every lambda in {0,1,-1,2} on 25 triples, both L4 fixtures; < 10 min"):
        t = time.perf_counter()
        for name in ("l4-laurent", "l4-matrix-laurent"):
            L = _l4(name)
            samples = _superpair_samples(L)
            assert all(f.degree() <= 2 for trip in samples for f in trip)
            rep = verify_superpair(L, samples, LAMBDAS)
            assert rep.passed, f"{name}: {[c.name for c in rep.failures()]}"
            assert rep["kappa_central"].passed and rep["H_lands_in_G"].passed
            for lam in LAMBDAS:
                for kind in ("skew", "jacobi", "leibniz"):
                    assert rep[f"{kind}[lambda={lam}]"].checked >= 25
        assert time.perf_counter() - t < 600


def test_criterion_06_consistency():
    with criterion(6, "bracket_H(eps) - eps bracket1 - bracket2 = 0 on the sample set"):
        for name in ("l4-laurent", "l4-matrix-laurent"):
            L = _l4(name)
            rep = consistency_check(L, _superpair_samples(L), LAMBDAS)
            assert rep.passed, name


def test_criterion_07_pdo_core():
    with criterion(7, "associativity on 100 triples, annihilation, trace of commutators on 50 pairs"):
        for A in (make_ground_field(), make_matrix_superalgebra(2, 1)):
            c = associativity_check(A, n=100)
            assert c.passed and c.checked >= 100, A.name
            c = annihilation_check(A, n=50)
            assert c.passed, A.name
            c = trace_commutator_check(A, n=50)
            assert c.passed and c.checked >= 50, A.name


def test_criterion_08_fractional_root():
    with criterion(8, "root of d^2+u squares to L down to floor -6; coefficients match order matching"):
        L = _kdv()
        R = fractional_root(L, 8)
        sq = pdo_power(R, 2)
        assert sq.floor is not None and sq.floor <= -6
        assert sq.equal_above(L.L, -6)
        u = SuperPoly.var(uvar(0, 1, 0))
        du = SuperPoly.var(uvar(0, 1, 0, 1))
        assert R.coeff(-1) == AlgElement({0: u.scale(Fraction(1, 2))})
        assert R.coeff(-2) == AlgElement({0: du.scale(Fraction(-1, 4))})
        oracle = sy.square_root(sy.xi ** 2 + sy.u(), 5)
        third = sy.orders(oracle)[-3]
        assert sy.same(sy.poly(R.coeff(-3).coords[0]), third)
        assert sy.same(sy.truncate(sy.of_pdo(R), -3), oracle)


def test_criterion_09_hierarchy():
    with criterion(9, "conservation (3,{1,3,5}) and zero curvature (2,3) for d^2+u; each < 2 min"):
        L = _kdv()
        for n in (1, 3, 5):
            rep, dt = timed(conservation_check, L, 3, n)
            assert rep.passed, n
            assert dt < 120
        res, dt = timed(zero_curvature_residual, L, 2, 3)
        assert not res.coeffs
        assert dt < 120


def test_criterion_10_hamiltonian():
    with criterion(10, "Hamiltonian superpair checks on d^2+u and on M(2,1), iota=0"):
        for name in ("l5-kdv", "l5-matrix-2-1"):
            L = _l4(name)
            rep = verify_hamiltonian_superpair(L, sample_densities(L, 6, 0), LAMBDAS)
            assert rep.passed, f"{name}: {[c.name for c in rep.failures()]}"


NEGATIVE = ["corrupt-constant", "corrupt-cocycle", "corrupt-laurent", "pair-incompatible",
            "l4-noncentral-kappa", "l5-flipped-sign"]


def test_criterion_11_negative_controls():
    with criterion(11, "every corrupted fixture yields a failing report with a witness"):
        with tempfile.TemporaryDirectory() as d:
            for name in NEGATIVE:
                path = Path(d) / f"{name}.json"
                code = main(["verify", f"builtin:{name}", "--quiet", "--report", str(path)])
                assert code == 1, name
                checks = json.loads(path.read_text())["report"]["checks"]
                bad = [c for c in checks if c["status"] != "pass"]
                assert bad and all(c.get("witness") not in (None, "", {}) for c in bad), name


if __name__ == "__main__":
    failed = 0
    for key, fn in sorted(globals().items()):
        if key.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
