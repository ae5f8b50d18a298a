"""Exact linear algebra over Q on lists of Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{x : A x = 0}`` for the matrix with the given rows."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def in_span(vec: Sequence, rows: Sequence[Sequence]) -> bool:
    if not any(vec):
        return True
    if not rows:
        return False
    return rank(list(rows) + [list(vec)]) == rank(rows)


def solve_left(rows: Sequence[Sequence], vec: Sequence):
    """Coefficients ``c`` with ``sum c_k rows[k] = vec``, or None."""
    n = len(rows)
    if n == 0:
        return [] if not any(vec) else None
    # columns of the augmented system are the given rows
    ncols = len(vec)
    aug = [[rows[k][c] for k in range(n)] + [vec[c]] for c in range(ncols)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    sol = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        sol[p] = row[n]
    return sol


def inverse(mat: Sequence[Sequence]) -> Matrix:
    n = len(mat)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [r[n:] for r in red]
