"""Finite-dimensional Z2-graded associative algebras with a bilinear form.

Elements carry :class:`SuperPoly` coefficients and multiply by the Koszul
rule ``(f a)(g b) = (-1)^{|a||g|} f g (a b)``; the form follows the same
rule.  Windowed models of infinite-dimensional algebras reuse the same
structure with an ``overflow`` set of basis pairs whose product leaves the
window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import BasisMismatch, CocycleError, WindowOverflow
from .reports import Check, Report
from .superpoly import MIXED, ONE, ZERO, SuperPoly

Table = Dict[Tuple[int, int], Dict[int, Fraction]]


@dataclass(frozen=True, eq=False)
class GradedAlgebraSpec:
    labels: Tuple[Hashable, ...]
    parities: Tuple[int, ...]
    table: Table
    gram: Tuple[Tuple[Fraction, ...], ...]
    identity: Optional[Dict[int, Fraction]] = None
    overflow: FrozenSet[Tuple[int, int]] = frozenset()
    name: str = ""
    _index: Dict[Hashable, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index.update({lab: k for k, lab in enumerate(self.labels)})

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def basis_product(self, a: int, b: int) -> Dict[int, Fraction]:
        if (a, b) in self.overflow:
            raise WindowOverflow(f"product {self.labels[a]}*{self.labels[b]} leaves the window")
        return self.table.get((a, b), {})

    def form(self, a: int, b: int) -> Fraction:
        return self.gram[a][b]

    def perturbed(self, a: int, b: int, c: int, delta=1) -> "GradedAlgebraSpec":
        """Copy with one structure constant shifted by ``delta`` (negative controls)."""
        table = {k: dict(v) for k, v in self.table.items()}
        entry = table.setdefault((a, b), {})
        entry[c] = entry.get(c, Fraction(0)) + Fraction(delta)
        if not entry[c]:
            del entry[c]
        return replace(self, table=table, _index={}, name=self.name + "-perturbed")

    def basis_element(self, a: int, coeff=1) -> "AlgElement":
        return AlgElement({a: SuperPoly.coerce(coeff)})

    def identity_element(self) -> "AlgElement":
        if self.identity is None:
            raise ValueError(f"algebra {self.name!r} has no identity")
        return AlgElement({a: SuperPoly.const(c) for a, c in self.identity.items()})

    def dual_basis(self) -> Dict[int, Dict[int, Fraction]]:
        """Elements ``b^v`` with ``<b, b^v> = 1`` and ``<b', b^v> = 0`` otherwise."""
        n = self.dim
        # <a, sum_c X[b][c] c> = sum_c gram[a][c] X[b][c] = delta_ab  =>  X = (gram^{-1})^T
        inv = linalg.inverse(self.gram)
        return {b: {c: inv[c][b] for c in range(n) if inv[c][b]} for b in range(n)}


class AlgElement:
    """Sparse ``{basis index: SuperPoly}`` element; coefficients sit left of the basis."""

    __slots__ = ("coords",)

    def __init__(self, coords: Optional[Mapping[int, object]] = None):
        clean = {}
        if coords:
            for a, c in coords.items():
                c = SuperPoly.coerce(c)
                if c:
                    clean[a] = c
        self.coords: Dict[int, SuperPoly] = clean

    @classmethod
    def _raw(cls, coords):
        obj = cls.__new__(cls)
        obj.coords = coords
        return obj

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def __add__(self, other: "AlgElement") -> "AlgElement":
        out = dict(self.coords)
        for a, c in other.coords.items():
            s = out.get(a)
            s = c if s is None else s + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return AlgElement._raw(out)

    def __neg__(self):
        return AlgElement._raw({a: -c for a, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "AlgElement":
        """Left multiplication by a scalar polynomial ``f``."""
        f = SuperPoly.coerce(f)
        out = {}
        for a, c in self.coords.items():
            p = f * c
            if p:
                out[a] = p
        return AlgElement._raw(out)

    def map_coeffs(self, fn) -> "AlgElement":
        out = {}
        for a, c in self.coords.items():
            p = fn(c)
            if p:
                out[a] = p
        return AlgElement._raw(out)

    def restrict(self, keep) -> "AlgElement":
        return AlgElement._raw({a: c for a, c in self.coords.items() if keep(a)})

    def __repr__(self):
        return "AlgElement(" + ", ".join(f"{a}: {c}" for a, c in sorted(self.coords.items())) + ")"


def element_parity(A: GradedAlgebraSpec, u: AlgElement):
    """Total degree of ``u``; coefficient parity plus basis parity."""
    ps = set()
    for a, c in u.coords.items():
        cp = c.parity()
        if cp == MIXED:
            return MIXED
        ps.add((cp + A.parities[a]) % 2)
    if not ps:
        return 0
    return ps.pop() if len(ps) == 1 else MIXED


def _check_basis(A: GradedAlgebraSpec, *elems: AlgElement) -> None:
    n = A.dim
    for u in elems:
        for a in u.coords:
            if not 0 <= a < n:
                raise BasisMismatch(f"index {a} outside basis of size {n}")


def _koszul(A: GradedAlgebraSpec, v: AlgElement):
    """For each basis index of ``v``: (coefficient, coefficient with odd part negated)."""
    out = {}
    for b, g in v.coords.items():
        even, odd = g.split_parity()
        out[b] = (g, even - odd if odd else g)
    return out


def alg_mul(A: GradedAlgebraSpec, u: AlgElement, v: AlgElement, strict: bool = True) -> AlgElement:
    """Product of elements; ``strict=False`` keeps only in-window parts of overflowing pairs."""
    _check_basis(A, u, v)
    if not u.coords or not v.coords:
        return AlgElement()
    kv = _koszul(A, v)
    acc: Dict[int, SuperPoly] = {}
    for a, f in u.coords.items():
        odd_a = A.parities[a]
        for b, (g, g_flip) in kv.items():
            prod = A.basis_product(a, b) if strict else A.table.get((a, b))
            if not prod:
                continue
            fg = f * (g_flip if odd_a else g)
            if not fg:
                continue
            for c, s in prod.items():
                term = fg.scale(s)
                prev = acc.get(c)
                acc[c] = term if prev is None else prev + term
    return AlgElement({c: p for c, p in acc.items() if p})


def alg_form(A: GradedAlgebraSpec, u: AlgElement, v: AlgElement) -> SuperPoly:
    _check_basis(A, u, v)
    kv = _koszul(A, v)
    out = ZERO
    for a, f in u.coords.items():
        row = A.gram[a]
        odd_a = A.parities[a]
        for b, (g, g_flip) in kv.items():
            s = row[b]
            if s:
                out = out + (f * (g_flip if odd_a else g)).scale(s)
    return out


def commutator(A: GradedAlgebraSpec, u: AlgElement, v: AlgElement) -> AlgElement:
    pu, pv = element_parity(A, u), element_parity(A, v)
    if MIXED in (pu, pv):
        raise ValueError("commutator needs homogeneous arguments")
    uv, vu = alg_mul(A, u, v), alg_mul(A, v, u)
    return uv - vu if not (pu and pv) else uv + vu


# -- verification ------------------------------------------------------------

def _scalar_prod(A, x: Dict[int, Fraction], y: Dict[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for c, s in A.basis_product(a, b).items():
                out[c] = out.get(c, 0) + ca * cb * s
    return {c: v for c, v in out.items() if v}


def _scalar_form(A, x, y) -> Fraction:
    return sum((ca * cb * A.gram[a][b] for a, ca in x.items() for b, cb in y.items()), Fraction(0))


def verify_algebra(A: GradedAlgebraSpec, check_nondegenerate: bool = True) -> Report:
    """Exhaustive axiom check over basis triples; windowed triples that overflow are skipped."""
    rep = Report(f"algebra {A.name}".strip())
    n = A.dim
    P = A.parities

    bad = None
    count = 0
    for (a, b), prod in A.table.items():
        for c, s in prod.items():
            count += 1
            if s and P[c] != (P[a] + P[b]) % 2:
                bad = bad or [A.labels[a], A.labels[b], A.labels[c]]
    for a in range(n):
        for b in range(n):
            if A.gram[a][b] and P[a] != P[b]:
                bad = bad or ["form", A.labels[a], A.labels[b]]
    rep.add(Check("grading", bad is None, bad, checked=count + n * n))

    e = [{a: Fraction(1)} for a in range(n)]
    assoc_bad = form_bad = None
    checked = skipped = 0
    for a, b, c in itertools.product(range(n), repeat=3):
        try:
            ab = _scalar_prod(A, e[a], e[b])
            bc = _scalar_prod(A, e[b], e[c])
            left = _scalar_prod(A, ab, e[c])
            right = _scalar_prod(A, e[a], bc)
        except WindowOverflow:
            skipped += 1
            continue
        checked += 1
        if assoc_bad is None and left != right:
            assoc_bad = [A.labels[a], A.labels[b], A.labels[c]]
        if form_bad is None and _scalar_form(A, ab, e[c]) != _scalar_form(A, e[a], bc):
            form_bad = [A.labels[a], A.labels[b], A.labels[c]]
    rep.add(Check("associativity", assoc_bad is None, assoc_bad, checked=checked, skipped=skipped))
    rep.add(Check("form_associativity", form_bad is None, form_bad, checked=checked, skipped=skipped))

    sym_bad = None
    for a in range(n):
        for b in range(n):
            sign = -1 if P[a] and P[b] else 1
            if A.gram[a][b] != sign * A.gram[b][a]:
                sym_bad = sym_bad or [A.labels[a], A.labels[b]]
    rep.add(Check("supersymmetry", sym_bad is None, sym_bad, checked=n * n))

    if check_nondegenerate:
        r = linalg.rank(A.gram)
        rep.add(Check("nondegeneracy", r == n, None if r == n else {"rank": r, "dim": n},
                      detail=f"gram rank {r} of {n}", checked=1))

    if A.identity is not None:
        one = dict(A.identity)
        id_bad = None
        id_skip = 0
        for a in range(n):
            try:
                if _scalar_prod(A, one, e[a]) != e[a] or _scalar_prod(A, e[a], one) != e[a]:
                    id_bad = id_bad or A.labels[a]
            except WindowOverflow:
                id_skip += 1
        rep.add(Check("identity", id_bad is None, id_bad, checked=n - id_skip, skipped=id_skip))
    return rep


# -- constructors ------------------------------------------------------------

def make_ground_field() -> GradedAlgebraSpec:
    """The one-dimensional even algebra F with <1,1> = 1."""
    return GradedAlgebraSpec(("1",), (0,), {(0, 0): {0: Fraction(1)}}, ((Fraction(1),),),
                             identity={0: Fraction(1)}, name="F")


def make_matrix_superalgebra(k: int, k1: int) -> GradedAlgebraSpec:
    """M_{k x k}(F) with matrix units E_{j,l}, graded by blocks and paired by the supertrace."""
    if k < 1 or not 0 <= k1 <= k - 1:
        raise ValueError("need k >= 1 and 0 <= k1 <= k-1")
    labels = tuple(f"E{j}{l}" if k < 10 else f"E{j},{l}" for j in range(1, k + 1) for l in range(1, k + 1))
    idx = lambda j, l: (j - 1) * k + (l - 1)
    inner = lambda j: j <= k1
    parities = tuple(0 if inner(j) == inner(l) else 1 for j in range(1, k + 1) for l in range(1, k + 1))
    sign = lambda j: 1 if inner(j) else -1
    table: Table = {}
    gram = [[Fraction(0)] * (k * k) for _ in range(k * k)]
    for j, l, q in itertools.product(range(1, k + 1), repeat=3):
        # E_{j,l} E_{l,q} = E_{j,q}
        table[(idx(j, l), idx(l, q))] = {idx(j, q): Fraction(1)}
    for j, l in itertools.product(range(1, k + 1), repeat=2):
        # Tr(E_{j,l} E_{l,j}) = Tr(E_{j,j})
        gram[idx(j, l)][idx(l, j)] = Fraction(sign(j))
    identity = {idx(j, j): Fraction(1) for j in range(1, k + 1)}
    return GradedAlgebraSpec(labels, parities, table, tuple(map(tuple, gram)), identity,
                             name=f"M({k},{k1})")


def supertrace(A: GradedAlgebraSpec, u: Dict[int, Fraction]) -> Fraction:
    """Tr(a) = <1, a>; requires an identity."""
    return _scalar_form(A, dict(A.identity), u)


def _group_identity(table: Sequence[Sequence[int]]) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            return e
    raise ValueError("multiplication table has no identity")


def make_twisted_group_algebra(table: Sequence[Sequence[int]], eps: Sequence[Sequence]) -> GradedAlgebraSpec:
    """F[G]_eps with u_g u_h = eps(g,h) u_{gh}, trace delta_{g,e}, purely even."""
    n = len(table)
    if any(len(row) != n for row in table) or len(eps) != n or any(len(r) != n for r in eps):
        raise ValueError("group table and cocycle must be square of the same size")
    e = _group_identity(table)
    for g, h, k in itertools.product(range(n), repeat=3):
        if table[table[g][h]][k] != table[g][table[h][k]]:
            raise ValueError(f"group table is not associative at {(g, h, k)}")
    for g in range(n):
        if e not in table[g]:
            raise ValueError(f"element {g} has no inverse")
    E = [[Fraction(x) for x in row] for row in eps]
    for g, h in itertools.product(range(n), repeat=2):
        if not E[g][h]:
            raise CocycleError(f"eps({g},{h}) = 0", witness=[g, h])
    for g1, g2, g3 in itertools.product(range(n), repeat=3):
        lhs = E[g1][g2] * E[table[g1][g2]][g3]
        rhs = E[g1][table[g2][g3]] * E[g2][g3]
        if lhs != rhs:
            raise CocycleError(f"cocycle identity fails at {(g1, g2, g3)}", witness=[g1, g2, g3])
    tab: Table = {(g, h): {table[g][h]: E[g][h]} for g in range(n) for h in range(n)}
    gram = tuple(tuple(E[g][h] if table[g][h] == e else Fraction(0) for h in range(n)) for g in range(n))
    identity = {e: 1 / E[e][e]}
    return GradedAlgebraSpec(tuple(f"u{g}" for g in range(n)), (0,) * n, tab, gram, identity,
                             name=f"F[G]eps({n})")


def cyclic_group_table(n: int):
    return [[(g + h) % n for h in range(n)] for g in range(n)]


# Hecke algebras -------------------------------------------------------------

def _inversions(w) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def _s(i: int, k: int):
    p = list(range(k))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def _compose(a, b):
    """(a o b)(x) = a(b(x))."""
    return tuple(a[x] for x in b)


def _inverse_perm(w):
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x] = i
    return tuple(out)


def reduced_word(w) -> Tuple[int, ...]:
    """Lexicographically minimal reduced word ``(i1,...,ir)`` with ``w = s_i1 ... s_ir``."""
    k = len(w)
    word = []
    cur = tuple(w)
    ell = _inversions(cur)
    while ell:
        for i in range(1, k):
            nxt = _compose(_s(i, k), cur)
            if _inversions(nxt) < ell:
                word.append(i)
                cur, ell = nxt, ell - 1
                break
    return tuple(word)


class _Hecke:
    def __init__(self, k: int, q: Fraction, zeta: Fraction):
        self.k, self.q, self.zeta = k, q, zeta
        self.perms = sorted(itertools.permutations(range(k)), key=lambda w: (_inversions(w), reduced_word(w)))
        self.gens = {i: _s(i, k) for i in range(1, k)}
        self._tr: Dict[tuple, Fraction] = {}

    def left_gen(self, i: int, x: Dict[tuple, Fraction]) -> Dict[tuple, Fraction]:
        out: Dict[tuple, Fraction] = {}
        s = self.gens[i]
        for w, c in x.items():
            sw = _compose(s, w)
            if _inversions(sw) > _inversions(w):
                out[sw] = out.get(sw, 0) + c
            else:
                out[w] = out.get(w, 0) + c * (self.q - 1)
                out[sw] = out.get(sw, 0) + c * self.q
        return {w: c for w, c in out.items() if c}

    def right_gen(self, x: Dict[tuple, Fraction], i: int) -> Dict[tuple, Fraction]:
        out: Dict[tuple, Fraction] = {}
        s = self.gens[i]
        for w, c in x.items():
            ws = _compose(w, s)
            if _inversions(ws) > _inversions(w):
                out[ws] = out.get(ws, 0) + c
            else:
                out[w] = out.get(w, 0) + c * (self.q - 1)
                out[ws] = out.get(ws, 0) + c * self.q
        return {w: c for w, c in out.items() if c}

    def mul_basis(self, u, w) -> Dict[tuple, Fraction]:
        x = {w: Fraction(1)}
        for i in reversed(reduced_word(u)):
            x = self.left_gen(i, x)
        return x

    def trace_perm(self, w) -> Fraction:
        if w in self._tr:
            return self._tr[w]
        moved = [p + 1 for p in range(self.k) if w[p] != p]
        if not moved:
            val = Fraction(1)
        else:
            n = max(moved)
            j = _inverse_perm(w)[n - 1] + 1
            c = tuple(range(self.k))
            for i in range(j, n):  # c = s_{n-1} ... s_j
                c = _compose(self.gens[i], c)
            u = _compose(w, _inverse_perm(c))
            x = {u: Fraction(1)}
            for i in range(n - 2, j - 1, -1):
                x = self.right_gen(x, i)
            val = self.zeta * self.trace(x)
        self._tr[w] = val
        return val

    def trace(self, x: Dict[tuple, Fraction]) -> Fraction:
        return sum((c * self.trace_perm(w) for w, c in x.items()), Fraction(0))


def make_hecke_algebra(k: int, q, zeta, max_k: int = 4) -> GradedAlgebraSpec:
    """Hecke algebra H_k on the basis T_w, paired by the Markov trace."""
    q, zeta = Fraction(q), Fraction(zeta)
    if q == 0:
        raise ValueError("q must be nonzero")
    if k < 2:
        raise ValueError("need k >= 2")
    if k > max_k:
        raise ValueError(f"k = {k} exceeds the configured bound {max_k}")
    H = _Hecke(k, q, zeta)
    perms = H.perms
    pos = {w: n for n, w in enumerate(perms)}
    table: Table = {}
    for u, w in itertools.product(perms, repeat=2):
        prod = H.mul_basis(u, w)
        if prod:
            table[(pos[u], pos[w])] = {pos[x]: c for x, c in prod.items()}
    gram = tuple(tuple(H.trace(H.mul_basis(u, w)) for w in perms) for u in perms)
    labels = tuple("T" + ("".join(map(str, reduced_word(w))) or "e") for w in perms)
    return GradedAlgebraSpec(labels, (0,) * len(perms), table, gram, identity={0: Fraction(1)},
                             name=f"H({k},q={q},zeta={zeta})")


def hecke_trace(A: GradedAlgebraSpec, x: Dict[int, Fraction]) -> Fraction:
    return supertrace(A, x)


# Tensor products ------------------------------------------------------------

def tensor_algebras(A: GradedAlgebraSpec, B: GradedAlgebraSpec, name: str = "") -> GradedAlgebraSpec:
    """Super tensor product with (a1 b1)(a2 b2) = (-1)^{|b1||a2|} a1a2 b1b2."""
    nb = B.dim
    idx = lambda a, b: a * nb + b
    labels = tuple((la, lb) for la in A.labels for lb in B.labels)
    parities = tuple((pa + pb) % 2 for pa in A.parities for pb in B.parities)
    table: Table = {}
    overflow = set()
    b_items = [(key, val) for key, val in B.table.items() if val]
    for (a1, a2), pa in A.table.items():
        if not pa and (a1, a2) not in A.overflow:
            continue
        for (b1, b2), pb in b_items:
            sign = -1 if B.parities[b1] and A.parities[a2] else 1
            key = (idx(a1, b1), idx(a2, b2))
            if (a1, a2) in A.overflow:
                overflow.add(key)
            entry = {idx(c, d): sign * x * y for c, x in pa.items() for d, y in pb.items()}
            if entry:
                table[key] = entry
    for (a1, a2) in A.overflow:
        if (a1, a2) in A.table:
            continue
        for (b1, b2), pb in b_items:
            overflow.add((idx(a1, b1), idx(a2, b2)))
    n = A.dim * nb
    gram = [[Fraction(0)] * n for _ in range(n)]
    for a1, a2 in itertools.product(range(A.dim), repeat=2):
        fa = A.gram[a1][a2]
        if not fa:
            continue
        for b1, b2 in itertools.product(range(nb), repeat=2):
            fb = B.gram[b1][b2]
            if fb:
                sign = -1 if B.parities[b1] and A.parities[a2] else 1
                gram[idx(a1, b1)][idx(a2, b2)] = sign * fa * fb
    identity = None
    if A.identity is not None and B.identity is not None:
        identity = {idx(a, b): x * y for a, x in A.identity.items() for b, y in B.identity.items()}
    return GradedAlgebraSpec(labels, parities, table, tuple(map(tuple, gram)), identity,
                             frozenset(overflow), name=name or f"{A.name}(x){B.name}")


def tensor_product(A, B: GradedAlgebraSpec):
    """Tensor a (possibly polarized) algebra with a finite algebra carrying a nondegenerate form."""
    from .polarization import PolarizedSpec, tensor_polarized

    if isinstance(A, PolarizedSpec):
        return tensor_polarized(A, B)
    return tensor_algebras(A, B)


def scalar_vector(u: AlgElement) -> Dict[int, Fraction]:
    """Coordinates of an element whose coefficients are all constants."""
    out = {}
    for a, c in u.coords.items():
        if c.variables():
            raise ValueError("element has non-constant coefficients")
        out[a] = c.constant_term()
    return out


def const_element(vec: Mapping[int, object]) -> AlgElement:
    return AlgElement({a: SuperPoly.const(Fraction(c)) for a, c in vec.items()})


__all__ = [
    "GradedAlgebraSpec", "AlgElement", "alg_mul", "alg_form", "commutator", "element_parity",
    "verify_algebra", "make_ground_field", "make_matrix_superalgebra", "make_twisted_group_algebra",
    "make_hecke_algebra", "tensor_product", "tensor_algebras", "supertrace", "cyclic_group_table",
    "reduced_word", "scalar_vector", "const_element", "ONE",
]
