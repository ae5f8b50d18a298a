"""Polarized graded algebras on a finite window.

A polarized algebra has a basis ``s+_{i,j}`` of the isotropic subalgebra A+
and a dual basis ``s-_{i,j}`` of A- with ``<s-_{i,j}, s+_{i,l}> = delta_{jl}``.
Basis labels are ``(i, j)`` with ``j > 0`` for A+ and ``j < 0`` for A-.
Infinite models (Laurent loops) keep ``j`` in ``1..n_i``; pairs whose product
leaves the window are listed in ``alg.overflow`` and only their in-window
components are stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from . import linalg
from .errors import CompatibilityError, WindowOverflow
from .graded_algebra import GradedAlgebraSpec, verify_algebra
from .reports import Check, Report

Key = Tuple[int, int]           # (parity, j) with j > 0
Consts = Dict[Tuple[Key, Key], Dict[Key, Fraction]]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass(frozen=True, eq=False)
class PolarizedSpec:
    alg: GradedAlgebraSpec
    sizes: Tuple[int, int]
    window: int
    origin: Dict[Tuple[int, int], object] = field(default_factory=dict)
    name: str = ""
    mixed_exact: bool = True

    def idx(self, i: int, j: int) -> int:
        if j == 0 or abs(j) > self.sizes[i]:
            raise WindowOverflow(f"index ({i},{j}) outside the window 1..{self.sizes[i]}")
        return self.alg.index((i, j))

    def keys(self, i: Optional[int] = None) -> List[Key]:
        ps = (0, 1) if i is None else (i,)
        return [(p, j) for p in ps for j in range(1, self.sizes[p] + 1)]

    def label(self, i: int, j: int) -> str:
        o = self.origin.get((i, j))
        return f"s{'+' if j > 0 else '-'}({i},{abs(j)})" + (f"={o}" if o is not None else "")

    def perturbed(self, a, b, c, delta=1) -> "PolarizedSpec":
        A = self.alg
        return replace(self, alg=A.perturbed(A.index(a), A.index(b), A.index(c), delta),
                       name=self.name + "-perturbed")


@dataclass(frozen=True, eq=False)
class PairOfProducts:
    """Two graded products on one space with basis ``theta_{i,j}`` (the data of a polarization)."""

    sizes: Tuple[int, int]
    plus: Consts
    minus: Consts
    plus_overflow: FrozenSet[Tuple[Key, Key]] = frozenset()
    minus_overflow: FrozenSet[Tuple[Key, Key]] = frozenset()
    window: int = 0
    name: str = ""


# -- constant extraction -------------------------------------------------------

def _constants(P: PolarizedSpec, sign: int):
    A = P.alg
    table: Consts = {}
    over = set()
    keys = P.keys()
    for k1, k2 in itertools.product(keys, repeat=2):
        a, b = A.index((k1[0], sign * k1[1])), A.index((k2[0], sign * k2[1]))
        row = {}
        for c, v in A.table.get((a, b), {}).items():
            i3, j3 = A.labels[c]
            if j3 * sign < 0:
                raise CompatibilityError(f"A{'+' if sign > 0 else '-'} is not a subalgebra at {k1},{k2}",
                                         witness=[k1, k2])
            row[(i3, abs(j3))] = v
        if row:
            table[(k1, k2)] = row
        if (a, b) in A.overflow:
            over.add((k1, k2))
    return table, frozenset(over)


def plus_constants(P: PolarizedSpec) -> Tuple[Consts, FrozenSet]:
    """``a^{+,j3}_{i1,j1;i2,j2}`` = coefficient of s+_{j3} in s+_{j1} s+_{j2}."""
    return _constants(P, 1)


def minus_constants(P: PolarizedSpec) -> Tuple[Consts, FrozenSet]:
    return _constants(P, -1)


def extract_pair(P: PolarizedSpec) -> PairOfProducts:
    plus, pov = plus_constants(P)
    minus, mov = minus_constants(P)
    return PairOfProducts(P.sizes, plus, minus, pov, mov, P.window, P.name)


class _Index:
    """Lookups ``coef(x, y -> z)`` regrouped by the fixed pair of arguments."""

    def __init__(self, consts: Consts):
        self.full = consts
        self.left: Dict[Tuple[Key, Key], Dict[Key, Fraction]] = {}    # (x, z) -> {y: c}
        self.right: Dict[Tuple[Key, Key], Dict[Key, Fraction]] = {}   # (y, z) -> {x: c}
        for (x, y), row in consts.items():
            for z, c in row.items():
                self.left.setdefault((x, z), {})[y] = c
                self.right.setdefault((y, z), {})[x] = c

    def row(self, x, y):
        return self.full.get((x, y), {})

    def L(self, x, z):
        return self.left.get((x, z), {})

    def R(self, y, z):
        return self.right.get((y, z), {})


def _acc(out, vec, scale):
    for k, v in vec.items():
        out[k] = out.get(k, 0) + scale * v


def _mixed_from_constants(ip: _Index, im: _Index, side: str, k1: Key, k2: Key):
    """(plus part, minus part) of s+_1 s-_2 or s-_1 s+_2, assembled from the constants alone."""
    i1, i2 = k1[0], k2[0]
    if side == "+-":
        pos = {k: _sign(i2) * v for k, v in im.L(k2, k1).items()}
        neg = {k: _sign(i1) * v for k, v in ip.R(k1, k2).items()}
    elif side == "-+":
        neg = dict(ip.L(k2, k1))
        pos = dict(im.R(k1, k2))
    else:
        raise ValueError("side must be '+-' or '-+'")
    return pos, neg


def mixed_product(P: PolarizedSpec, side: str, i1: int, j1: int, i2: int, j2: int):
    """Mixed product of basis elements from the closed forms; returns {label: coefficient}."""
    P.idx(i1, j1), P.idx(i2, j2)
    if not P.mixed_exact:
        raise WindowOverflow("mixed products of this polarized algebra are not window-exact")
    plus, _ = plus_constants(P)
    minus, _ = minus_constants(P)
    pos, neg = _mixed_from_constants(_Index(plus), _Index(minus), side, (i1, j1), (i2, j2))
    out = {(i, j): v for (i, j), v in pos.items() if v}
    out.update({(i, -j): v for (i, j), v in neg.items() if v})
    return out


def _clean(d):
    return {k: v for k, v in d.items() if v}


def verify_compatibility(pair, limit: Optional[int] = None) -> Report:
    """Check the two quadratic identities between the + and - constants on the window.

    The first compares s+_{j5} coefficients of (s+ s+) s- and s+ (s+ s-); the
    second those of (s+ s-) s+ and s+ (s- s+).  Terms of the first identity are
    skipped when both the ++ pair and the -- pair overflow the window.
    """
    if isinstance(pair, PolarizedSpec):
        pair = extract_pair(pair)
    rep = Report(f"compatibility {pair.name}".strip())
    ip, im = _Index(pair.plus), _Index(pair.minus)
    keys = [(p, j) for p in (0, 1) for j in range(1, pair.sizes[p] + 1)]
    bad15 = bad16 = None
    n15 = n16 = skip15 = 0
    for k1, k2, k3 in itertools.product(keys, repeat=3):
        i1, i2, i3 = k1[0], k2[0], k3[0]
        i5 = (i1 + i2 + i3) % 2
        # (++)- against +(+-)
        lhs: Dict[Key, Fraction] = {}
        for k4, c in ip.row(k1, k2).items():
            _acc(lhs, im.L(k3, k4), c)
        rhs: Dict[Key, Fraction] = {}
        for k4, c in im.L(k3, k2).items():
            _acc(rhs, ip.row(k1, k4), c)
        for k4, c in ip.R(k2, k3).items():
            _acc(rhs, im.L(k4, k1), c)
        over12 = (k1, k2) in pair.plus_overflow
        for j5 in range(1, pair.sizes[i5] + 1):
            k5 = (i5, j5)
            if over12 and (k3, k5) in pair.minus_overflow:
                skip15 += 1
                continue
            n15 += 1
            if bad15 is None and lhs.get(k5, 0) != rhs.get(k5, 0):
                bad15 = {"indices": [k1, k2, k3, k5], "lhs": lhs.get(k5, 0), "rhs": rhs.get(k5, 0)}
        # (+-)+ against +(-+)
        lhs = {}
        for k4, c in im.L(k2, k1).items():
            _acc(lhs, ip.row(k4, k3), _sign(i2) * c)
        for k4, c in ip.R(k1, k2).items():
            _acc(lhs, im.R(k4, k3), _sign(i1) * c)
        rhs = {}
        for k4, c in ip.L(k3, k2).items():
            _acc(rhs, im.L(k4, k1), _sign(i2 + i3) * c)
        for k4, c in im.R(k2, k3).items():
            _acc(rhs, ip.row(k1, k4), c)
        lhs, rhs = _clean(lhs), _clean(rhs)
        n16 += pair.sizes[i5]
        if bad16 is None and lhs != rhs:
            k5 = next(k for k in sorted(set(lhs) | set(rhs)) if lhs.get(k, 0) != rhs.get(k, 0))
            bad16 = {"indices": [k1, k2, k3, k5], "lhs": lhs.get(k5, 0), "rhs": rhs.get(k5, 0)}
    detail = "window-truncated" if pair.plus_overflow or pair.minus_overflow else ""
    rep.add(Check("identity_pp_m", bad15 is None, bad15, detail, n15, skip15))
    rep.add(Check("identity_pm_p", bad16 is None, bad16, detail, n16))
    return rep


def build_from_pair(pair: PairOfProducts, check: bool = True, identity=None) -> PolarizedSpec:
    """Assemble the polarized algebra whose +/- products are the given pair."""
    if check:
        rep = verify_compatibility(pair)
        if not rep.passed:
            bad = rep.failures()[0]
            raise CompatibilityError(f"constants fail {bad.name}", witness=bad.witness)
    n0, n1 = pair.sizes
    labels = tuple([(i, j) for i in (0, 1) for j in range(1, pair.sizes[i] + 1)]
                   + [(i, -j) for i in (0, 1) for j in range(1, pair.sizes[i] + 1)])
    pos = {lab: k for k, lab in enumerate(labels)}
    parities = tuple(lab[0] for lab in labels)
    keys = [lab for lab in labels if lab[1] > 0]
    ip, im = _Index(pair.plus), _Index(pair.minus)
    table = {}
    overflow = set()

    def put(a, b, pos_part, neg_part):
        row = {}
        for (i, j), v in pos_part.items():
            if v:
                row[pos[(i, j)]] = v
        for (i, j), v in neg_part.items():
            if v:
                row[pos[(i, -j)]] = v
        if row:
            table[(a, b)] = row

    for k1, k2 in itertools.product(keys, repeat=2):
        p1, p2 = pos[k1], pos[k2]
        m1, m2 = pos[(k1[0], -k1[1])], pos[(k2[0], -k2[1])]
        put(p1, p2, ip.row(k1, k2), {})
        put(m1, m2, {}, im.row(k1, k2))
        if (k1, k2) in pair.plus_overflow:
            overflow.add((p1, p2))
        if (k1, k2) in pair.minus_overflow:
            overflow.add((m1, m2))
        put(p1, m2, *_mixed_from_constants(ip, im, "+-", k1, k2))
        put(m1, p2, *_mixed_from_constants(ip, im, "-+", k1, k2))
    n = len(labels)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i, j in keys:
        gram[pos[(i, -j)]][pos[(i, j)]] = Fraction(1)
        gram[pos[(i, j)]][pos[(i, -j)]] = Fraction(_sign(i))
    alg = GradedAlgebraSpec(labels, parities, table, tuple(map(tuple, gram)), identity,
                            frozenset(overflow), name=pair.name)
    return PolarizedSpec(alg, pair.sizes, pair.window or max(pair.sizes), name=pair.name)


# -- constructors ----------------------------------------------------------------

def make_laurent_polarized(N: int) -> PolarizedSpec:
    """F[t, 1/t] with s+_j = t^{j-1}, s-_j = t^{-j} (j = 1..N)."""
    if N < 1:
        raise ValueError("window must be positive")
    labels = tuple([(0, j) for j in range(1, N + 1)] + [(0, -j) for j in range(1, N + 1)])
    expo = {lab: (lab[1] - 1 if lab[1] > 0 else lab[1]) for lab in labels}
    back = {e: k for k, e in enumerate(expo[lab] for lab in labels)}
    table = {}
    overflow = set()
    for a, la in enumerate(labels):
        for b, lb in enumerate(labels):
            e = expo[la] + expo[lb]
            if e in back:
                table[(a, b)] = {back[e]: Fraction(1)}
            else:
                overflow.add((a, b))
    n = len(labels)
    gram = tuple(tuple(Fraction(int(expo[la] + expo[lb] == -1)) for lb in labels) for la in labels)
    alg = GradedAlgebraSpec(labels, (0,) * n, table, gram, {back[0]: Fraction(1)},
                            frozenset(overflow), name=f"Laurent[{N}]")
    origin = {lab: f"t^{expo[lab]}" for lab in labels}
    return PolarizedSpec(alg, (N, 0), N, origin, name=f"Laurent[{N}]")


def _left_dual(B: GradedAlgebraSpec) -> List[Dict[int, Fraction]]:
    """b^L with <b^L, b'> = delta_{b,b'}; rows of the inverse Gram matrix."""
    inv = linalg.inverse(B.gram)
    return [{c: inv[b][c] for c in range(B.dim) if inv[b][c]} for b in range(B.dim)]


def change_basis(A: GradedAlgebraSpec, rows, inv_rows, labels, parities, name="", identity=None) -> GradedAlgebraSpec:
    """Re-express ``A`` in the basis ``new_k = sum rows[k][a] old_a``; ``inv_rows`` gives old in new."""
    n = len(rows)
    table = {}
    overflow = set()
    for k1 in range(n):
        for k2 in range(n):
            old: Dict[int, Fraction] = {}
            over = False
            for a, ca in rows[k1].items():
                for b, cb in rows[k2].items():
                    if (a, b) in A.overflow:
                        over = True
                    for c, s in A.table.get((a, b), {}).items():
                        old[c] = old.get(c, 0) + ca * cb * s
            new: Dict[int, Fraction] = {}
            for c, v in old.items():
                if v:
                    for k, w in inv_rows[c].items():
                        new[k] = new.get(k, 0) + v * w
            new = {k: v for k, v in new.items() if v}
            if new:
                table[(k1, k2)] = new
            if over:
                overflow.add((k1, k2))
    gram = tuple(tuple(sum((ca * cb * A.gram[a][b] for a, ca in rows[k1].items() for b, cb in rows[k2].items()),
                           Fraction(0)) for k2 in range(n)) for k1 in range(n))
    return GradedAlgebraSpec(tuple(labels), tuple(parities), table, gram, identity, frozenset(overflow), name=name)


def tensor_polarized(P: PolarizedSpec, B: GradedAlgebraSpec, name: str = "") -> PolarizedSpec:
    """P (x) B with A+ = P+ (x) B and A- = P- (x) B, rebased to dual bases."""
    from .graded_algebra import tensor_algebras

    T = tensor_algebras(P.alg, B)
    nb = B.dim
    old = lambda a, b: a * nb + b
    dual = _left_dual(B)
    # s+ candidates ordered by the index of P, then parity, then B basis
    plus_src = [((i, j), b) for j in range(1, max(P.sizes) + 1) for i in (0, 1) if j <= P.sizes[i]
                for b in range(nb)]
    new_keys: Dict[int, List] = {0: [], 1: []}
    for (i, j), b in plus_src:
        new_keys[(i + B.parities[b]) % 2].append(((i, j), b))
    labels, parities, rows, origin = [], [], [], {}
    for sgn in (1, -1):
        for p in (0, 1):
            for jj, ((i, j), b) in enumerate(new_keys[p], start=1):
                lab = (p, sgn * jj)
                labels.append(lab)
                parities.append(p)
                a = P.alg.index((i, sgn * j))
                if sgn > 0:
                    rows.append({old(a, b): Fraction(1)})
                else:
                    # <s-_k (x) b^L, s+_k' (x) b'> = (-1)^{|b| i_k} delta delta
                    s = _sign(B.parities[b] * i)
                    rows.append({old(a, c): s * v for c, v in dual[b].items()})
                src = P.origin.get((i, sgn * j), (i, sgn * j))
                origin[lab] = f"{src}(x){B.labels[b]}" if sgn > 0 else f"dual[{src}(x){B.labels[b]}]"
    new_pos = {lab: k for k, lab in enumerate(labels)}
    # old basis in terms of new: plus part is a permutation; minus via c = sum_b G[c][b] b^L
    inv_rows = [dict() for _ in range(T.dim)]
    for p in (0, 1):
        for jj, ((i, j), b) in enumerate(new_keys[p], start=1):
            a_plus = P.alg.index((i, j))
            inv_rows[old(a_plus, b)] = {new_pos[(p, jj)]: Fraction(1)}
    slot = {}
    for p in (0, 1):
        for jj, ((i, j), b) in enumerate(new_keys[p], start=1):
            slot[((i, j), b)] = new_pos[(p, -jj)]
    for i in (0, 1):
        for j in range(1, P.sizes[i] + 1):
            a_minus = P.alg.index((i, -j))
            for c in range(nb):
                inv_rows[old(a_minus, c)] = {slot[((i, j), b)]: _sign(B.parities[b] * i) * B.gram[c][b]
                                             for b in range(nb) if B.gram[c][b]}
    identity = None
    if T.identity is not None:
        identity = {}
        for c, v in T.identity.items():
            for k, w in inv_rows[c].items():
                identity[k] = identity.get(k, 0) + v * w
        identity = {k: v for k, v in identity.items() if v}
    nm = name or f"{P.name}(x){B.name}"
    alg = change_basis(T, rows, inv_rows, labels, parities, nm, identity)
    sizes = (len(new_keys[0]), len(new_keys[1]))
    return PolarizedSpec(alg, sizes, P.window, origin, nm, P.mixed_exact)


def make_matrix_laurent(k: int, k1: int, N: int) -> PolarizedSpec:
    from .graded_algebra import make_matrix_superalgebra

    return tensor_polarized(make_laurent_polarized(N), make_matrix_superalgebra(k, k1),
                            name=f"M({k},{k1})[t,1/t][{N}]")


def verify_polarization(P: PolarizedSpec) -> Report:
    """Duality, isotropy and the sign law of the form on the window."""
    rep = Report(f"polarization {P.name}".strip())
    A = P.alg
    bad = None
    count = 0
    for la, lb in itertools.product(A.labels, repeat=2):
        count += 1
        g = A.form(A.index(la), A.index(lb))
        (i1, j1), (i2, j2) = la, lb
        if (j1 > 0) == (j2 > 0):
            want = 0
        elif j1 < 0:
            want = int(i1 == i2 and -j1 == j2)
        else:
            want = _sign(i1) * int(i1 == i2 and j1 == -j2)
        if g != want and bad is None:
            bad = {"pair": [la, lb], "form": g, "expected": want}
    rep.add(Check("duality_isotropy", bad is None, bad, checked=count))
    return rep


# -- filtration ------------------------------------------------------------------

@dataclass
class FiltrationTable:
    """Spans of A^(n) on the window, per parity, as rows over the s+ (n >= 0) or s- (n < 0) basis."""

    spans: Dict[Tuple[int, int], List[List[Fraction]]]
    top: int
    bottom: int
    sets: Dict[Tuple[int, int], Optional[Tuple[int, ...]]]
    adapted: bool
    prefix: bool

    def dim(self, level: int, parity: int) -> int:
        return len(self.spans[(level, parity)])

    def k(self, parity: int, level: int) -> int:
        """k_{i,m} = dim A^(m)_i."""
        return self.dim(level, parity)

    def levels(self):
        return range(self.bottom, self.top + 1)

    def to_dict(self):
        return {str(n): {str(p): list(self.sets[(n, p)]) if self.sets[(n, p)] is not None
                         else f"dim {self.dim(n, p)}" for p in (0, 1)} for n in self.levels()}


def _coords(P: PolarizedSpec, row: Dict[int, Fraction], sign: int, parity: int) -> List[Fraction]:
    n = P.sizes[parity]
    vec = [Fraction(0)] * n
    for c, v in row.items():
        i, j = P.alg.labels[c]
        if i == parity and j * sign > 0:
            vec[abs(j) - 1] += v
    return vec


def _index_set(rows: List[List[Fraction]]):
    support = sorted({j for r in rows for j, v in enumerate(r) if v})
    return tuple(j + 1 for j in support) if len(support) == len(rows) else None


def compute_filtration(P: PolarizedSpec, top: Optional[int] = None) -> FiltrationTable:
    """A^(0) = {u in A+ : (A- u)_+ = 0}, A^(m+1) = {u : (A- u)_+ in A^(m)}; negatives by orthogonality."""
    if P.window < 2:
        raise WindowOverflow("window too small for a filtration")
    if not P.mixed_exact:
        raise WindowOverflow("mixed products are not window-exact")
    A = P.alg
    top = P.window - 2 if top is None else top
    spans = {}
    # image[(p, k)] = plus-part coordinates (parity p + i_k) of s-_k s+_{p,j} for each j
    images = {}
    for p in (0, 1):
        for kk in P.keys():
            q = (p + kk[0]) % 2
            cols = []
            for j in range(1, P.sizes[p] + 1):
                row = A.table.get((P.idx(kk[0], -kk[1]), P.idx(p, j)), {})
                cols.append(_coords(P, row, 1, q))
            images[(p, kk)] = cols
    prev = {0: [], 1: []}
    for m in range(top + 1):
        cur = {}
        for p in (0, 1):
            n = P.sizes[p]
            constraints = []
            for kk in P.keys():
                q = (p + kk[0]) % 2
                cols = images[(p, kk)]
                # complement of the span of prev[q]: project out via nullspace functionals
                funcs = linalg.nullspace(prev[q], P.sizes[q]) if prev[q] else \
                    [[Fraction(int(a == b)) for b in range(P.sizes[q])] for a in range(P.sizes[q])]
                for f in funcs:
                    constraints.append([sum((f[r] * cols[j][r] for r in range(P.sizes[q]) if f[r]), Fraction(0))
                                        for j in range(n)])
            constraints = [c for c in constraints if any(c)]
            basis = linalg.nullspace(constraints, n) if n else []
            cur[p] = linalg.rref(basis)[0] if basis else []
            spans[(m, p)] = cur[p]
        prev = cur
    for p in (0, 1):
        n = P.sizes[p]
        spans[(-1, p)] = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    bottom = -1
    for m in range(top + 1):
        if -2 - m < -P.window:
            break
        for p in (0, 1):
            n = P.sizes[p]
            rows = spans[(m, p)]
            ann = linalg.nullspace(rows, n) if rows else spans[(-1, p)]
            spans[(-2 - m, p)] = linalg.rref(ann)[0] if ann else []
        bottom = -2 - m
    sets = {key: _index_set(rows) for key, rows in spans.items()}
    adapted = all(s is not None for s in sets.values())
    prefix = adapted and all(sets[(m, p)] == tuple(range(1, len(sets[(m, p)]) + 1))
                             for m in range(top + 1) for p in (0, 1))
    return FiltrationTable(spans, top, bottom, sets, adapted, prefix)


def _member(vec, rows) -> bool:
    return linalg.in_span(vec, rows) if any(vec) else True


def verify_filtration_products(P: PolarizedSpec, T: Optional[FiltrationTable] = None) -> Report:
    """Products of filtration levels land in the predicted levels (four inclusion families)."""
    T = T or compute_filtration(P)
    A = P.alg
    rep = Report(f"filtration products {P.name}".strip())
    rep.extra["filtration"] = T.to_dict()
    rep.extra["validity"] = {"top": T.top, "bottom": T.bottom}

    def elements(level, parity):
        sign = 1 if level >= 0 else -1
        out = []
        for r in T.spans[(level, parity)]:
            out.append({P.idx(parity, sign * (j + 1)): v for j, v in enumerate(r) if v})
        return out

    def product(x, y):
        acc = {}
        over = False
        for a, ca in x.items():
            for b, cb in y.items():
                if (a, b) in A.overflow:
                    over = True
                for c, s in A.table.get((a, b), {}).items():
                    acc[c] = acc.get(c, 0) + ca * cb * s
        return acc, over

    def in_level(vec, level, sign, parity):
        v = _coords(P, vec, sign, parity)
        if level is None:  # the zero space
            return not any(v)
        if level == "all":
            return True
        return _member(v, T.spans[(level, parity)])

    families = {"plus_plus": [0, 0, None], "plus_minus_plus_part": [0, 0, None],
                "plus_minus_into_negative": [0, 0, None], "minus_minus": [0, 0, None]}

    def run(fam, la, lb, targets, tag):
        st = families[fam]
        for p1, p2 in itertools.product((0, 1), repeat=2):
            q = (p1 + p2) % 2
            for x in elements(la, p1):
                for y in elements(lb, p2):
                    prod, over = product(x, y)
                    if over and fam != "minus_minus":
                        st[1] += 1
                        continue
                    st[0] += 1
                    ok = all(in_level(prod, lvl, sgn, q) for lvl, sgn in targets)
                    if not ok and st[2] is None:
                        st[2] = {"levels": [la, lb], "order": tag, "parities": [p1, p2]}

    top = T.top
    for m in range(top + 1):
        for n in range(top + 1 - m):
            run("plus_plus", m, n, [(m + n, 1), (None, -1)], "mn")
            neg = -n - 1
            if neg >= T.bottom:
                tgt = [(m - 1 if m >= 1 else None, 1)]
                run("plus_minus_plus_part", m + n, neg, tgt, "a.b")
                run("plus_minus_plus_part", neg, m + n, tgt, "b.a")
            if -m - n - 2 >= T.bottom:
                tgt = [(None, 1), (-n - 2, -1)]
                run("plus_minus_into_negative", m, -m - n - 2, tgt, "a.b")
                run("plus_minus_into_negative", -m - n - 2, m, tgt, "b.a")
            if -m - n - 2 >= T.bottom and -m - 1 >= T.bottom and -n - 1 >= T.bottom:
                run("minus_minus", -m - 1, -n - 1, [(None, 1), (-m - n - 2, -1)], "ab")
    for name, (checked, skipped, bad) in families.items():
        rep.add(Check(name, bad is None, bad, "window-truncated" if skipped else "", checked, skipped))
    rep.add(Check("nested", all(_nested(T, n, p) for n in range(T.bottom, T.top) for p in (0, 1)),
                  checked=2 * (T.top - T.bottom)))
    return rep


def _nested(T: FiltrationTable, n: int, p: int) -> bool:
    if n == -1:
        return True  # A^(-1) = A- and A^(0) sit in complementary halves
    lo = T.spans[(n, p)]
    hi = T.spans[(n + 1, p)]
    return all(_member(r, hi) for r in lo)


def verify_polarized(P: PolarizedSpec) -> Report:
    rep = verify_algebra(P.alg)
    rep.title = f"polarized algebra {P.name}"
    rep.extend(verify_polarization(P))
    rep.extend(verify_compatibility(P), prefix="compat_")
    return rep


# names used by the published API contract
verify_prop33 = verify_filtration_products
