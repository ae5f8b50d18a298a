from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superpair import linalg

mats = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                                    min_size=n, max_size=n))


@given(mats)
def test_inverse_or_singular(m):
    try:
        inv = linalg.inverse(m)
    except ValueError:
        assert linalg.rank(m) < len(m)
        return
    n = len(m)
    prod = [[sum(Fraction(m[i][k]) * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


@given(mats)
def test_nullspace_is_kernel(m):
    n = len(m[0])
    ker = linalg.nullspace(m, n)
    assert len(ker) + linalg.rank(m) == n
    for v in ker:
        assert all(sum(Fraction(r[j]) * v[j] for j in range(n)) == 0 for r in m)


def test_solve_left_and_span():
    rows = [[1, 0, 1], [0, 1, 1]]
    assert linalg.solve_left(rows, [2, 3, 5]) == [2, 3]
    assert linalg.solve_left(rows, [0, 0, 1]) is None
    assert linalg.in_span([1, 1, 2], rows) and not linalg.in_span([1, 0, 0], rows)


def test_singular_raises():
    with pytest.raises(ValueError):
        linalg.inverse([[1, 2], [2, 4]])
