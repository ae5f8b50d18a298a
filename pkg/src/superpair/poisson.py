"""Linear and quadratic Poisson superbrackets on polynomial functions of a polarized algebra.

Elements of the extension algebra are :class:`AlgElement` values over the
windowed basis of a :class:`PolarizedSpec` with coefficients in the
polynomial ring of the variables ``x_{i,j}`` (``j`` in ``I_i = 1..k_{i,iota}``).
The coefficient-sign rule of :func:`alg_mul` is exactly the sign of the
extended product, so no separate multiplication is needed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EscapeError, WindowOverflow
from .graded_algebra import AlgElement, alg_form, alg_mul, element_parity
from .polarization import FiltrationTable, PolarizedSpec, compute_filtration
from .reports import Check, Report
from .superpoly import MIXED, ONE, ZERO, SuperPoly, VarId, xvar


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# -- the extension algebra --------------------------------------------------------

def gbar_mul(P: PolarizedSpec, u: AlgElement, v: AlgElement, strict: bool = False) -> AlgElement:
    """Product with the coefficient sign (-1)^{i1 (i2 + p)}; in-window parts only unless strict."""
    return alg_mul(P.alg, u, v, strict=strict)


def gbar_form(P: PolarizedSpec, u: AlgElement, v: AlgElement) -> SuperPoly:
    return alg_form(P.alg, u, v)


def project_pm(P: PolarizedSpec, u: AlgElement, sign: int) -> AlgElement:
    """The part of ``u`` on s+ (sign > 0) or s- (sign < 0) basis elements."""
    labels = P.alg.labels
    return u.restrict(lambda a: (labels[a][1] > 0) == (sign > 0))


def gbar_parity(P: PolarizedSpec, u: AlgElement):
    return element_parity(P.alg, u)


def commutator(P: PolarizedSpec, u: AlgElement, v: AlgElement, pu: int, pv: int) -> AlgElement:
    uv, vu = gbar_mul(P, u, v), gbar_mul(P, v, u)
    return uv + vu if pu and pv else uv - vu


def element(P: PolarizedSpec, coords: Dict[Tuple[int, int], object]) -> AlgElement:
    """Build an element from ``{(i, j): coefficient}`` with signed ``j``."""
    return AlgElement({P.idx(i, j): c for (i, j), c in coords.items()})


# -- the Lax-type operator ----------------------------------------------------------

@dataclass(eq=False)
class LOperator:
    """L = L0 + sum x_{i,j} s_{i,j} over j in I_i, with a central constant kappa."""

    P: PolarizedSpec
    iota: int
    L0: Dict[Tuple[int, int], Fraction]
    kappa: Dict[Tuple[int, int], Fraction]
    T: FiltrationTable
    name: str = ""
    variant: str = "minus"
    _cols: Dict[str, list] = field(default_factory=dict, repr=False)

    @property
    def I(self) -> Dict[int, int]:
        return {i: self.T.k(i, self.iota) for i in (0, 1)}

    def g_keys(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in (0, 1) for j in range(1, self.I[i] + 1)]

    def variables(self) -> List[VarId]:
        return [xvar(i, j) for i, j in self.g_keys()]

    def var_of(self, i: int, j: int) -> VarId:
        return xvar(i, j)

    @property
    def L(self) -> AlgElement:
        if "L" not in self._cols:
            coords = {self.P.idx(i, j): SuperPoly.const(c) for (i, j), c in self.L0.items()}
            for i, j in self.g_keys():
                a = self.P.idx(i, j)
                coords[a] = coords.get(a, ZERO) + SuperPoly.var(xvar(i, j))
            self._cols["L"] = AlgElement(coords)
        return self._cols["L"]

    @property
    def K(self) -> AlgElement:
        return AlgElement({self.P.idx(i, j): SuperPoly.const(c) for (i, j), c in self.kappa.items()})

    def omega_basis(self) -> List[Tuple[int, int]]:
        return [(i, -j) for i, j in self.g_keys()]


def make_loperator(P: PolarizedSpec, iota: int, L0, kappa, T: Optional[FiltrationTable] = None,
                   name: str = "", variant: str = "minus") -> LOperator:
    if iota < 1:
        raise ValueError("iota must be a positive integer")
    T = T or compute_filtration(P)
    if not T.prefix:
        raise ValueError("the basis must list each filtration level as a prefix")
    if T.top < iota + 1:
        raise WindowOverflow(f"window resolves levels up to {T.top}; need {iota + 1}")
    L0 = {tuple(k): Fraction(v) for k, v in dict(L0).items() if Fraction(v)}
    kappa = {tuple(k): Fraction(v) for k, v in dict(kappa).items() if Fraction(v)}
    lim = T.k(0, iota + 1)
    for nm, el in (("L0", L0), ("kappa", kappa)):
        for (i, j) in el:
            P.idx(i, j)
            if i != 0:
                raise ValueError(f"{nm} must be even; component ({i},{j})")
            if j > lim:
                raise ValueError(f"{nm} component (0,{j}) lies outside A- + A^({iota + 1})")
    return LOperator(P, iota, L0, kappa, T, name or P.name, variant)


def kappa_centrality(Lop: LOperator) -> Check:
    P = Lop.P
    K = Lop.K
    bad = None
    for a in range(P.alg.dim):
        e = AlgElement({a: ONE})
        try:
            d = alg_mul(P.alg, K, e) - alg_mul(P.alg, e, K)
        except WindowOverflow:
            continue
        if d and bad is None:
            bad = {"basis": P.alg.labels[a], "commutator": {str(P.alg.labels[c]): str(v) for c, v in d.coords.items()}}
    return Check("kappa_central", bad is None, bad, checked=P.alg.dim)


# -- differentials and derivations -----------------------------------------------------

def differential(Lop: LOperator, f) -> AlgElement:
    """df = sum (d_{i,j} f0 + (-1)^i d_{i,j} f1) s_{i,-j}, so that <u, df> = d_u f on G."""
    f = SuperPoly.coerce(f)
    f0, f1 = f.split_parity()
    coords = {}
    for i, j in Lop.g_keys():
        v = xvar(i, j)
        c = f0.derive(v)
        if f1:
            d1 = f1.derive(v)
            c = c - d1 if i else c + d1
        if c:
            coords[Lop.P.idx(i, -j)] = c
    return AlgElement._raw(coords)


def derivation_of(P: PolarizedSpec, u: AlgElement):
    """The pairs (coefficient, variable) of d_u = sum xi_{i,j} d_{i,j}."""
    out = []
    for a, c in u.coords.items():
        i, j = P.alg.labels[a]
        if j < 0:
            raise ValueError("directional derivatives take elements of G (positive indices)")
        out.append((c, xvar(i, j)))
    return out


def apply_derivation(P: PolarizedSpec, u: AlgElement, f: SuperPoly) -> SuperPoly:
    out = ZERO
    for c, v in derivation_of(P, u):
        d = f.derive(v)
        if d:
            out = out + c * d
    return out


def directional_derivative(P: PolarizedSpec, u: AlgElement, v: AlgElement) -> AlgElement:
    """Coefficient-wise d_u on an element of the extension algebra."""
    d = derivation_of(P, u)
    out = {}
    for b, f in v.coords.items():
        acc = ZERO
        for c, var in d:
            g = f.derive(var)
            if g:
                acc = acc + c * g
        if acc:
            out[b] = acc
    return AlgElement._raw(out)


# -- Hamiltonian maps ------------------------------------------------------------

def _minus(Lop, x):
    return project_pm(Lop.P, x, -1)


def _plus(Lop, x):
    return project_pm(Lop.P, x, 1)


def adler_part(Lop: LOperator, u: AlgElement, variant: Optional[str] = None) -> AlgElement:
    """(L u)_- L - L (u L)_-; the ``literal`` variant uses (u L)_+ in the second term."""
    P, L = Lop.P, Lop.L
    variant = variant or Lop.variant
    first = gbar_mul(P, _minus(Lop, gbar_mul(P, L, u)), L)
    uL = gbar_mul(P, u, L)
    second = gbar_mul(P, L, _minus(Lop, uL) if variant == "minus" else _plus(Lop, uL))
    return first - second


def linear_part(Lop: LOperator, u: AlgElement) -> AlgElement:
    """kappa [L, u]_- + [(kappa u)_-, L]  (L is even)."""
    P, L, K = Lop.P, Lop.L, Lop.K
    Lu_uL = gbar_mul(P, L, u) - gbar_mul(P, u, L)
    first = gbar_mul(P, K, _minus(Lop, Lu_uL))
    ku = _minus(Lop, gbar_mul(P, K, u))
    second = gbar_mul(P, ku, L) - gbar_mul(P, L, ku)
    return first + second


def _check_in_g(Lop: LOperator, x: AlgElement, where) -> AlgElement:
    P = Lop.P
    I = Lop.I
    for a in x.coords:
        i, j = P.alg.labels[a]
        if j < 0 or j > I[i]:
            raise EscapeError(f"H({where}) has a component on {P.label(i, j)} outside G")
    return x


def _project_g(Lop: LOperator, x: AlgElement) -> AlgElement:
    labels = Lop.P.alg.labels
    I = Lop.I
    return x.restrict(lambda a: 0 < labels[a][1] <= I[labels[a][0]])


def columns(Lop: LOperator, check: bool = True) -> Dict[str, Dict[int, AlgElement]]:
    """H1 and H2 on each basis element of Omega; H is left-linear over the polynomial ring.

    With ``check=False`` components outside G are dropped instead of raising;
    only the G part enters the brackets.
    """
    key = f"cols-{Lop.variant}-{check}"
    if key not in Lop._cols:
        c1, c2 = {}, {}
        for i, mj in Lop.omega_basis():
            b = Lop.P.idx(i, mj)
            e = AlgElement({b: ONE})
            a1 = linear_part(Lop, e)
            a2 = adler_part(Lop, e)
            if check:
                _check_in_g(Lop, a1, Lop.P.label(i, mj))
                _check_in_g(Lop, a2, Lop.P.label(i, mj))
            else:
                a1, a2 = _project_g(Lop, a1), _project_g(Lop, a2)
            c1[b], c2[b] = a1, a2
        Lop._cols[key] = {"H1": c1, "H2": c2}
    return Lop._cols[f"cols-{Lop.variant}-True"] if f"cols-{Lop.variant}-True" in Lop._cols else Lop._cols[key]


def _escape_check(Lop: LOperator) -> Check:
    try:
        columns(Lop)
    except EscapeError as exc:
        columns(Lop, check=False)
        Lop._cols["use-projected"] = True
        return Check("H_lands_in_G", False, str(exc), checked=len(Lop.omega_basis()))
    return Check("H_lands_in_G", True, checked=len(Lop.omega_basis()))


def _cols(Lop: LOperator):
    return columns(Lop, check=not Lop._cols.get("use-projected", False))


def hamiltonian_map(Lop: LOperator, eps, w: AlgElement, variant: Optional[str] = None) -> AlgElement:
    """H(w) = (L^w)_- L^ - L^ (w L^)_- for L^ = L + eps kappa, computed directly."""
    P = Lop.P
    for a in w.coords:
        i, j = P.alg.labels[a]
        if j > 0 or -j > Lop.I[i]:
            raise ValueError("argument is not in Omega")
    eps = Fraction(eps)
    Lh = Lop.L + Lop.K.scale(eps) if eps else Lop.L
    variant = variant or Lop.variant
    first = gbar_mul(P, _minus(Lop, gbar_mul(P, Lh, w)), Lh)
    wL = gbar_mul(P, w, Lh)
    second = gbar_mul(P, Lh, _minus(Lop, wL) if variant == "minus" else _plus(Lop, wL))
    out = first - second
    if variant == "minus":
        _check_in_g(Lop, out, "w")
    return out


def _apply_cols(Lop: LOperator, lam, w: AlgElement) -> AlgElement:
    cols = _cols(Lop)
    lam = Fraction(lam)
    out = AlgElement()
    for b, eta in w.coords.items():
        col = cols["H2"][b]
        if lam:
            col = col + cols["H1"][b].scale(lam)
        out = out + col.scale(eta)
    return out


def H_of(Lop: LOperator, lam, w: AlgElement) -> AlgElement:
    """(lam H1 + H2)(w) through the precomputed basis columns."""
    return _apply_cols(Lop, lam, w)


def bracket_H(Lop: LOperator, lam, f, g) -> SuperPoly:
    """{f, g}_H = <H(df), dg> with H = lam H1 + H2."""
    return gbar_form(Lop.P, _apply_cols(Lop, lam, differential(Lop, f)), differential(Lop, g))


def bracket_H_direct(Lop: LOperator, eps, f, g) -> SuperPoly:
    return gbar_form(Lop.P, hamiltonian_map(Lop, eps, differential(Lop, f)), differential(Lop, g))


def _par(f: SuperPoly) -> int:
    p = SuperPoly.coerce(f).parity()
    if p == MIXED:
        raise ValueError("brackets are evaluated on homogeneous polynomials")
    return p


def bracket1(Lop: LOperator, f, g) -> SuperPoly:
    """<L, [df, (kappa dg)_+] - [(kappa df)_-, dg]>."""
    P = Lop.P
    pf, pg = _par(f), _par(g)
    w, z = differential(Lop, f), differential(Lop, g)
    K = Lop.K
    t1 = commutator(P, w, _plus(Lop, gbar_mul(P, K, z)), pf, pg)
    t2 = commutator(P, _minus(Lop, gbar_mul(P, K, w)), z, pf, pg)
    return gbar_form(P, Lop.L, t1 - t2)


def bracket2(Lop: LOperator, f, g) -> SuperPoly:
    """<(L df)_- L - L (df L)_-, dg>."""
    return gbar_form(Lop.P, adler_part(Lop, differential(Lop, f), "minus"), differential(Lop, g))


def bracket_lambda(Lop: LOperator, lam, f, g) -> SuperPoly:
    return bracket_H(Lop, lam, f, g)


# -- sampling ------------------------------------------------------------------

def sample_poly(rng: random.Random, variables: Sequence[VarId], parity: int, max_terms: int = 3,
                max_degree: int = 2) -> SuperPoly:
    """A random nonzero homogeneous polynomial of degree <= max_degree."""
    evens = [v for v in variables if not v.parity]
    odds = [v for v in variables if v.parity]
    monos = []
    if parity == 0:
        monos.append(())
        monos += [(v,) for v in evens]
        if max_degree >= 2:
            monos += [(a, b) for a, b in itertools.combinations_with_replacement(evens, 2)]
            monos += [(a, b) for a, b in itertools.combinations(odds, 2)]
    else:
        monos += [(v,) for v in odds]
        if max_degree >= 2:
            monos += [(a, b) for a in evens for b in odds]
    nonconst = [m for m in monos if m]
    if not nonconst:
        return ZERO
    out = ZERO
    while not out:
        for _ in range(rng.randint(1, max_terms)):
            m = rng.choice(nonconst if rng.random() < 0.85 else monos)
            c = rng.choice([-3, -2, -1, 1, 2, 3])
            term = SuperPoly.const(c)
            for v in m:
                term = term * SuperPoly.var(v)
            out = out + term
    return out


def sample_polys(variables, n: int, seed: int = 0, parities=None):
    rng = random.Random(seed)
    out = []
    has_odd = any(v.parity for v in variables)
    for k in range(n):
        ps = parities[k % len(parities)] if parities else tuple(rng.randint(0, 1) if has_odd else 0 for _ in range(3))
        out.append(tuple(sample_poly(rng, variables, p) for p in ps))
    return out


def sample_omega(Lop: LOperator, rng: random.Random, parity: int, terms: int = 2) -> AlgElement:
    basis = Lop.omega_basis()
    out = AlgElement()
    while not out:
        for i, mj in rng.sample(basis, min(terms, len(basis))):
            eta = sample_poly(rng, Lop.variables(), (i + parity) % 2, max_terms=2, max_degree=1)
            out = out + AlgElement({Lop.P.idx(i, mj): eta})
    return out


# -- verification ----------------------------------------------------------------

def _graded_cyclic(p1, p2, p3):
    return 1, _sign(p1 * (p2 + p3)), _sign((p1 + p2) * p3)


def verify_superpair(Lop: LOperator, samples: Optional[list] = None, lambdas=(0, 1, -1, 2),
                     n: int = 25, seed: int = 0) -> Report:
    """Super-skew, super-Jacobi and Leibniz for lam {,}_1 + {,}_2 on sampled homogeneous triples."""
    rep = Report(f"Poisson superpair {Lop.name}".strip())
    rep.add(kappa_centrality(Lop))
    rep.add(_escape_check(Lop))
    samples = samples if samples is not None else sample_polys(Lop.variables(), n, seed)
    for lam in lambdas:
        lam = Fraction(lam)
        br = lambda a, b: bracket_H(Lop, lam, a, b)
        skew = jac = leib = None
        for f, g, h in samples:
            pf, pg, ph = _par(f), _par(g), _par(h)
            if skew is None:
                for (a, pa), (b, pb) in itertools.combinations(((f, pf), (g, pg), (h, ph)), 2):
                    d = br(a, b) + br(b, a).scale(_sign(pa * pb))
                    if d:
                        skew = {"f": str(a), "g": str(b), "defect": str(d)}
                        break
            if jac is None:
                # (-1)^{|f||h|}{f,{g,h}} + (-1)^{|g||f|}{g,{h,f}} + (-1)^{|h||g|}{h,{f,g}}
                total = (br(f, br(g, h)).scale(_sign(pf * ph)) + br(g, br(h, f)).scale(_sign(pg * pf))
                         + br(h, br(f, g)).scale(_sign(ph * pg)))
                if total:
                    jac = {"f": str(f), "g": str(g), "h": str(h), "defect": str(total)}
            if leib is None:
                d = br(f, g * h) - (br(f, g) * h + (g * br(f, h)).scale(_sign(pf * pg)))
                if d:
                    leib = {"f": str(f), "g": str(g), "h": str(h), "defect": str(d)}
        tag = f"lambda={lam}"
        rep.add(Check(f"skew[{tag}]", skew is None, skew, checked=3 * len(samples)))
        rep.add(Check(f"jacobi[{tag}]", jac is None, jac, checked=len(samples)))
        rep.add(Check(f"leibniz[{tag}]", leib is None, leib, checked=len(samples)))
    return rep


def consistency_check(Lop: LOperator, samples: Optional[list] = None, eps_values=(0, 1, -1, 2),
                      n: int = 25, seed: int = 0) -> Report:
    """{,}_H at eps equals eps {,}_1 + {,}_2, with H built directly from L + eps kappa."""
    rep = Report(f"bracket consistency {Lop.name}".strip())
    samples = samples if samples is not None else sample_polys(Lop.variables(), n, seed)
    for eps in eps_values:
        eps = Fraction(eps)
        bad = None
        count = 0
        for trip in samples:
            for f, g in itertools.permutations(trip, 2):
                count += 1
                d = bracket_H_direct(Lop, eps, f, g) - bracket1(Lop, f, g).scale(eps) - bracket2(Lop, f, g)
                if d and bad is None:
                    bad = {"f": str(f), "g": str(g), "defect": str(d)}
        rep.add(Check(f"H_equals_eps_b1_plus_b2[eps={eps}]", bad is None, bad, checked=count))
    return rep


def d_of_H(Lop: LOperator, lam, x: AlgElement, w: AlgElement) -> AlgElement:
    """d_x(H)(w) = sum (-1)^{|eta_b| q} eta_b d_x(a_b) for H = lam H1 + H2, x in G_q."""
    cols = _cols(Lop)
    q = gbar_parity(Lop.P, x)
    lam = Fraction(lam)
    out = AlgElement()
    for b, eta in w.coords.items():
        col = cols["H2"][b] + cols["H1"][b].scale(lam) if lam else cols["H2"][b]
        s = _sign(eta.parity() * q)
        out = out + directional_derivative(Lop.P, x, col).scale(eta.scale(s))
    return out


def hamiltonian_operator_check(Lop: LOperator, eps_values=(0, 1, -1, 2), n: int = 10, seed: int = 0,
                               exhaustive: bool = True) -> Report:
    """Skew-adjointness of H and the cyclic identity for d_{H(u)}(H) on one-forms.

    Uses ``n`` sampled triples plus, if ``exhaustive``, every triple of basis one-forms.
    """
    rep = Report(f"Hamiltonian operator conditions {Lop.name}".strip())
    rep.add(_escape_check(Lop))
    rng = random.Random(seed)
    has_odd = any(v.parity for v in Lop.variables()) or Lop.I[1] > 0
    trips = []
    for _ in range(n):
        ps = [rng.randint(0, 1) if has_odd else 0 for _ in range(3)]
        trips.append([(sample_omega(Lop, rng, p), p) for p in ps])
    if exhaustive:
        # basis one-forms with constant coefficients have the parity of their index
        basis = [(AlgElement({Lop.P.idx(i, mj): ONE}), i) for i, mj in Lop.omega_basis()]
        trips += [list(t) for t in itertools.product(basis, repeat=3)]
    P = Lop.P
    for eps in eps_values:
        skew = cyc = der = None
        for (u, p1), (v, p2), (w, p3) in trips:
            Hu, Hv, Hw = (_apply_cols(Lop, eps, x) for x in (u, v, w))
            d = gbar_form(P, Hv, u) + gbar_form(P, Hu, v).scale(_sign(p1 * p2))
            if d and skew is None:
                skew = {"defect": str(d)}
            s1, s2, s3 = _graded_cyclic(p1, p2, p3)
            total = (gbar_form(P, d_of_H(Lop, eps, Hu, v), w)
                     + gbar_form(P, d_of_H(Lop, eps, Hv, w), u).scale(s2)
                     + gbar_form(P, d_of_H(Lop, eps, Hw, u), v).scale(s3))
            if total and cyc is None:
                cyc = {"defect": str(total)}
            # d_x(H(w)) = d_x(H)(w) + H(d_x w)
            lhs = directional_derivative(P, Hu, Hw)
            rhs = d_of_H(Lop, eps, Hu, w) + _apply_cols(Lop, eps, directional_derivative(P, Hu, w))
            if lhs != rhs and der is None:
                der = {"defect": str(lhs - rhs)}
        tag = f"eps={Fraction(eps)}"
        rep.add(Check(f"skew_adjoint[{tag}]", skew is None, skew, checked=len(trips)))
        rep.add(Check(f"cyclic[{tag}]", cyc is None, cyc, checked=len(trips)))
        rep.add(Check(f"derivation_rule[{tag}]", der is None, der, checked=len(trips)))
    return rep


def sample_gbar(P: PolarizedSpec, rng: random.Random, parity: int, variables: Sequence[VarId],
                max_j: int = 3, terms: int = 3) -> AlgElement:
    labels = [lab for lab in P.alg.labels if abs(lab[1]) <= max_j]
    out = AlgElement()
    while not out:
        for lab in rng.sample(labels, min(terms, len(labels))):
            c = sample_poly(rng, variables, (lab[0] + parity) % 2, max_terms=2, max_degree=1)
            if not variables:
                c = SuperPoly.const(rng.choice([-2, -1, 1, 2]))
            out = out + AlgElement({P.alg.index(lab): c})
    return out


def cyclic_splitting_check(P: PolarizedSpec, n: int = 50, seed: int = 0,
                           variables: Optional[Sequence[VarId]] = None, max_j: int = 3) -> Report:
    """Both cyclic rewritings of <u, vw> in terms of +/- parts, on sampled homogeneous triples."""
    rep = Report(f"cyclic splitting identity {P.name}".strip())
    variables = list(variables) if variables is not None else [xvar(0, 1), xvar(0, 2), xvar(1, 1), xvar(1, 2)]
    rng = random.Random(seed)
    has_odd = P.sizes[1] > 0 or any(v.parity for v in variables)
    bad1 = bad2 = None
    pl = lambda x: project_pm(P, x, 1)
    mi = lambda x: project_pm(P, x, -1)
    form = lambda a, b: gbar_form(P, a, b)
    mul = lambda a, b: gbar_mul(P, a, b)
    for _ in range(n):
        i1, i2, i3 = (rng.randint(0, 1) if has_odd else 0 for _ in range(3))
        u = sample_gbar(P, rng, i1, variables, max_j)
        v = sample_gbar(P, rng, i2, variables, max_j)
        w = sample_gbar(P, rng, i3, variables, max_j)
        s2, s3 = _sign(i1 * (i2 + i3)), _sign((i1 + i2) * i3)
        base = form(u, mul(v, w))
        one = form(u, mul(pl(v), mi(w))) + form(v, mul(pl(w), mi(u))).scale(s2) + form(w, mul(pl(u), mi(v))).scale(s3)
        two = form(u, mul(mi(v), pl(w))) + form(v, mul(mi(w), pl(u))).scale(s2) + form(w, mul(mi(u), pl(v))).scale(s3)
        if base != one and bad1 is None:
            bad1 = {"parities": [i1, i2, i3], "difference": str(base - one)}
        if base != two and bad2 is None:
            bad2 = {"parities": [i1, i2, i3], "difference": str(base - two)}
    rep.add(Check("plus_minus_form", bad1 is None, bad1, checked=n))
    rep.add(Check("minus_plus_form", bad2 is None, bad2, checked=n))
    return rep


def differential_check(Lop: LOperator, max_degree: int = 3) -> Report:
    """<u, df> = d_u f for every basis derivation u and monomial f up to the given degree."""
    rep = Report("differential")
    vs = Lop.variables()
    bad = None
    count = 0
    monos = [()]
    for d in range(1, max_degree + 1):
        monos += list(itertools.combinations_with_replacement(vs, d))
    for m in monos:
        f = ONE
        for v in m:
            f = f * SuperPoly.var(v)
        if not f:
            continue
        df = differential(Lop, f)
        for i, j in Lop.g_keys():
            u = AlgElement({Lop.P.idx(i, j): ONE})
            count += 1
            if gbar_form(Lop.P, u, df) != f.derive(xvar(i, j)) and bad is None:
                bad = {"monomial": str(f), "direction": [i, j]}
    rep.add(Check("pairing_is_derivative", bad is None, bad, checked=count))
    return rep


# name used by the published API contract
lemma42_check = cyclic_splitting_check
