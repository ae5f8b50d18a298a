"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from superpair.superpoly import SuperPoly, uvar, xvar

EVEN_X = [xvar(0, j) for j in (1, 2)]
ODD_X = [xvar(1, j) for j in (1, 2, 3)]
JETS = [uvar(p, 1, 0, k) for p in (0, 1) for k in range(3)]


def polys(variables, max_terms=3, max_factors=3):
    mono = st.lists(st.sampled_from(variables), max_size=max_factors)
    term = st.tuples(st.integers(-3, 3), mono)

    def build(terms):
        out = SuperPoly()
        for c, vs in terms:
            t = SuperPoly.const(c)
            for v in vs:
                t = t * SuperPoly.var(v)
            out = out + t
        return out

    return st.lists(term, max_size=max_terms).map(build)


x_polys = polys(EVEN_X + ODD_X)
jet_polys = polys(JETS)
