"""Scalar symbol calculus in sympy, used as an oracle for the operator code.

An operator sum a_l d^l is the expression sum a_l(x) xi^l; composition is
a o b = sum_k (1/k!) d_xi^k(a) d_x^k(b), truncated below a floor.
"""

import sympy as sp

x, xi = sp.symbols("x xi")


def jet(v):
    f = sp.Function("u_%d_%d" % v.index)(x)
    return sp.diff(f, x, v.jet) if v.jet else f


def poly(p):
    out = sp.Integer(0)
    for mono, c in p:
        t = sp.Rational(c.numerator, c.denominator)
        for v, e in mono:
            t *= jet(v) ** e
        out += t
    return out


def u(j1=1, j2=0):
    return sp.Function("u_%d_%d" % (j1, j2))(x)


def orders(expr):
    """{power of xi: coefficient} of an expanded symbol."""
    out = {}
    for t in sp.Add.make_args(sp.expand(expr)):
        c, e = t.as_coeff_exponent(xi)
        out[int(e)] = out.get(int(e), 0) + c
    return {k: v for k, v in out.items() if sp.simplify(v) != 0}


def truncate(expr, floor):
    return sum((c * xi ** k for k, c in orders(expr).items() if k >= floor), sp.Integer(0))


def compose(a, b, floor):
    top_a, top_b = max(orders(a)), max(orders(b))
    out = sp.Integer(0)
    for k in range(top_a + top_b - floor + 1):
        out += sp.diff(a, xi, k) * sp.diff(b, x, k) / sp.factorial(k)
    return truncate(out, floor)


def of_pdo(op, scalar_index=0):
    """Symbol of a scalar operator from the library, on its exact orders."""
    return sum((poly(c.coords[scalar_index]) * xi ** l for l, c in op.coeffs.items()
                if scalar_index in c.coords), sp.Integer(0))


def apply(expr, phi):
    """Apply a differential operator symbol to a function."""
    return sum((c * sp.diff(phi, x, k) for k, c in orders(expr).items()), sp.Integer(0))


def square_root(L, depth):
    """R = xi + sum_{k=1}^{depth-1} c_k xi^(1-k) with R o R = L, solved order by order."""
    R = xi
    C = sp.Symbol("C")
    for k in range(1, depth):
        trial = R + C * xi ** (1 - k)
        sq = orders(compose(trial, trial, 1 - k) - L)
        c = sp.solve(sq.get(2 - k, 0), C)[0]
        R = R + sp.simplify(c) * xi ** (1 - k)
    return R


def residue(expr):
    return orders(expr).get(-1, sp.Integer(0))


def same(a, b):
    return sp.simplify(sp.expand(a - b)) == 0
