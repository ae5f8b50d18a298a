"""Pseudo-differential operators over a graded algebra with jet coefficients.

An operator is stored in left normal form ``sum phi_l d^l`` with coefficients
in the free module over differential polynomials.  Negative orders generate
infinite tails, so every operator carries a ``floor``: all coefficients at
orders ``>= floor`` are exact, nothing below it is known.  ``floor=None``
means the operator is exact (a finite sum).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import EscapeError, FloorContamination, SupportError
from .graded_algebra import AlgElement, GradedAlgebraSpec, alg_form, alg_mul, element_parity
from .reports import Check, Report
from .superpoly import MIXED, ZERO, SuperPoly, VarId, uvar

#: tail length used when an exact product would otherwise be infinite
DEFAULT_DEPTH = 6


def binom(m: int, p: int) -> int:
    """Binomial coefficient valid for negative ``m``."""
    if p < 0:
        return 0
    if m >= 0:
        return math.comb(m, p)
    return (-1) ** p * math.comb(p - m - 1, p)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _d(x: AlgElement) -> AlgElement:
    return x.map_coeffs(SuperPoly.total_derivative)


def _is_constant(x: AlgElement) -> bool:
    return all(not c.variables() for c in x.coords.values())


def _max_floor(*fs):
    fs = [f for f in fs if f is not None]
    return max(fs) if fs else None


class PDO:
    """``sum_l coeffs[l] d^l`` over ``alg``; exact at orders ``>= floor``."""

    __slots__ = ("alg", "coeffs", "floor")

    def __init__(self, alg: GradedAlgebraSpec, coeffs: Optional[Mapping[int, AlgElement]] = None,
                 floor: Optional[int] = None):
        self.alg = alg
        self.floor = floor
        self.coeffs: Dict[int, AlgElement] = {
            l: c for l, c in (coeffs or {}).items() if c and (floor is None or l >= floor)
        }

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, alg, floor=None) -> "PDO":
        return cls(alg, {}, floor)

    @classmethod
    def d(cls, alg, m: int = 1, coeff: Optional[AlgElement] = None, floor=None) -> "PDO":
        """``coeff * d^m``; ``coeff`` defaults to the identity of ``alg``."""
        if coeff is None:
            coeff = alg.identity_element()
        return cls(alg, {m: coeff}, floor)

    @classmethod
    def from_right(cls, alg, right: Mapping[int, AlgElement], floor: Optional[int] = None) -> "PDO":
        """Operator given in right normal form ``sum d^k psi_k``."""
        cut = floor
        if cut is None and any(k < 0 and not _is_constant(c) for k, c in right.items() if c):
            top = max(right)
            cut = top - DEFAULT_DEPTH
        out: Dict[int, AlgElement] = {}
        for k, psi in right.items():
            p, cur = 0, psi
            while cur:
                if k >= 0 and p > k:
                    break
                order = k - p
                if cut is not None and order < cut:
                    break
                out[order] = out.get(order, AlgElement()) + cur.map_coeffs(lambda f, c=binom(k, p): f.scale(c))
                p += 1
                cur = _d(cur)
        return cls(alg, out, cut)

    # -- queries -------------------------------------------------------------
    @property
    def top(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, l: int) -> AlgElement:
        if self.floor is not None and l < self.floor:
            raise FloorContamination(f"order {l} requested below exact floor {self.floor}")
        return self.coeffs.get(l, AlgElement())

    def parity(self):
        ps = {element_parity(self.alg, c) for c in self.coeffs.values()}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else MIXED

    def variables(self) -> set:
        out = set()
        for c in self.coeffs.values():
            for f in c.coords.values():
                out |= f.variables()
        return out

    def truncate(self, floor: int) -> "PDO":
        return PDO(self.alg, self.coeffs, _max_floor(self.floor, floor))

    def equal_above(self, other: "PDO", floor: Optional[int] = None) -> bool:
        """Equality on the orders where both sides are exact (and ``>= floor``)."""
        cut = _max_floor(self.floor, other.floor, floor)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(l, AlgElement()) == other.coeffs.get(l, AlgElement())
                   for l in keys if cut is None or l >= cut)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: "PDO") -> "PDO":
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            out[l] = out[l] + c if l in out else c
        return PDO(self.alg, out, _max_floor(self.floor, other.floor))

    def __neg__(self) -> "PDO":
        return PDO(self.alg, {l: -c for l, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other: "PDO") -> "PDO":
        return self + (-other)

    def scale(self, f) -> "PDO":
        """Left multiplication by a scalar polynomial."""
        return PDO(self.alg, {l: c.scale(f) for l, c in self.coeffs.items()}, self.floor)

    def __mul__(self, other: "PDO") -> "PDO":
        return pdo_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, PDO):
            return NotImplemented
        return self.floor == other.floor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.floor, frozenset(self.coeffs.items())))

    def __repr__(self):
        body = " + ".join(f"({c})d^{l}" for l, c in sorted(self.coeffs.items(), reverse=True)) or "0"
        return f"PDO({body}; floor={self.floor})"


def pdo_mul(a: PDO, b: PDO, floor: Optional[int] = None) -> PDO:
    """Product by the binomial rule ``(phi d^m)(psi d^n) = sum C(m,p) phi psi^(p) d^(m+n-p)``.

    The result is exact at orders ``>= max(a.floor + top(b), b.floor + top(a))``; an
    explicit ``floor`` may only raise that bound.
    """
    A = a.alg
    if not a.coeffs or not b.coeffs:
        return PDO(A, {}, _max_floor(a.floor, b.floor, floor))
    ta, tb = a.top, b.top
    natural = _max_floor(None if a.floor is None else a.floor + tb,
                         None if b.floor is None else b.floor + ta)
    cut = _max_floor(natural, floor)
    if cut is None and any(m < 0 for m in a.coeffs) and not all(_is_constant(c) for c in b.coeffs.values()):
        cut = ta + tb - DEFAULT_DEPTH
    out: Dict[int, AlgElement] = {}
    for n, psi in b.coeffs.items():
        derivs = [psi]
        for m, phi in a.coeffs.items():
            p = 0
            while True:
                if m >= 0 and p > m:
                    break
                order = m + n - p
                if cut is not None and order < cut:
                    break
                while len(derivs) <= p:
                    derivs.append(_d(derivs[-1]))
                cur = derivs[p]
                if not cur:
                    break
                term = alg_mul(A, phi, cur)
                c = binom(m, p)
                if c != 1:
                    term = term.map_coeffs(lambda f: f.scale(c))
                out[order] = out[order] + term if order in out else term
                p += 1
    return PDO(A, out, cut)


def pdo_power(a: PDO, n: int, floor: Optional[int] = None) -> PDO:
    if n < 1:
        raise ValueError("power must be positive")
    out = a
    for _ in range(n - 1):
        out = pdo_mul(out, a, floor)
    return out


def pdo_project(a: PDO, sign) -> PDO:
    """``a_+`` (orders >= 0) for sign ``+``, ``a_-`` (orders <= -1) for sign ``-``."""
    plus = sign in ("+", 1, "plus")
    return PDO(a.alg, {l: c for l, c in a.coeffs.items() if (l >= 0) == plus}, a.floor)


def pdo_commutator(a: PDO, b: PDO, floor: Optional[int] = None) -> PDO:
    pa, pb = a.parity(), b.parity()
    if MIXED in (pa, pb):
        raise ValueError("commutator needs homogeneous operators")
    return pdo_mul(a, b, floor) - pdo_mul(b, a, floor).scale(_sign(pa * pb))


def to_right(a: PDO, floor: Optional[int] = None) -> Dict[int, AlgElement]:
    """Right normal form: ``phi d^n = sum_p (-1)^p C(n,p) d^(n-p) phi^(p)``.

    Coefficients are exact at orders ``>= floor`` (default: the operator's floor).
    """
    cut = _max_floor(a.floor, floor)
    if cut is None and any(n < 0 and not _is_constant(c) for n, c in a.coeffs.items()):
        cut = a.top - DEFAULT_DEPTH
    out: Dict[int, AlgElement] = {}
    for n, phi in a.coeffs.items():
        p, cur = 0, phi
        while cur:
            if n >= 0 and p > n:
                break
            order = n - p
            if cut is not None and order < cut:
                break
            c = _sign(p) * binom(n, p)
            term = cur.map_coeffs(lambda f: f.scale(c))
            out[order] = out[order] + term if order in out else term
            p += 1
            cur = _d(cur)
    return {k: v for k, v in out.items() if v}


def right_floor(a: PDO, floor: Optional[int] = None) -> Optional[int]:
    """The floor :func:`to_right` works to for the same arguments."""
    cut = _max_floor(a.floor, floor)
    if cut is None and any(n < 0 and not _is_constant(c) for n, c in a.coeffs.items()):
        cut = a.top - DEFAULT_DEPTH
    return cut


# -- slots: basis element x order <-> jet variable ------------------------------

def slot_basis(A: GradedAlgebraSpec) -> Dict[Tuple[int, int], int]:
    """``(parity, l) -> basis index`` with ``l`` counting from 1 inside each parity."""
    out, count = {}, [0, 0]
    for a, p in enumerate(A.parities):
        count[p] += 1
        out[(p, count[p])] = a
    return out


def slot_var(A: GradedAlgebraSpec, a: int, order: int, jet: int = 0) -> VarId:
    inv = {v: k for k, v in slot_basis(A).items()}
    i, l = inv[a]
    return uvar(i, l, order, jet)


def var_slot(A: GradedAlgebraSpec, v: VarId) -> Tuple[int, int]:
    """``(basis index, order)`` of a jet variable."""
    if v.kind != "u":
        raise ValueError(f"{v} is not a jet variable")
    j1, j2 = v.index
    return slot_basis(A)[(v.parity, j1)], j2


def base_var(v: VarId) -> VarId:
    return VarId(v.parity, v.index, 0, v.kind)


# -- variational calculus -----------------------------------------------------

def variational_derivative(i: int, j: Tuple[int, int], f) -> SuperPoly:
    """``delta = sum_m (-d)^m o d/du^(m)`` for the jet family ``u_{i,j}``."""
    f = SuperPoly.coerce(f)
    jets = [v.jet for v in f.variables() if v.kind == "u" and v.parity == i % 2 and v.index == tuple(j)]
    out = ZERO
    for m in range(max(jets) + 1 if jets else 0):
        g = f.derive(uvar(i, j[0], j[1], m))
        for _ in range(m):
            g = -g.total_derivative()
        out = out + g
    return out


def delta_of(f: SuperPoly, v: VarId) -> SuperPoly:
    return variational_derivative(v.parity, v.index, f)


def density_families(f: SuperPoly) -> List[VarId]:
    return sorted({base_var(v) for v in f.variables() if v.kind == "u"})


def is_total_derivative(f) -> bool:
    """Membership test for the image of d: zero constant term and all variational derivatives vanish."""
    f = SuperPoly.coerce(f)
    if f.constant_term():
        return False
    return all(not delta_of(f, v) for v in density_families(f))


class TildeDensity:
    """A density modulo total derivatives."""

    __slots__ = ("rep",)

    def __init__(self, rep):
        self.rep = SuperPoly.coerce(rep)

    def __add__(self, other):
        return TildeDensity(self.rep + _rep(other))

    def __sub__(self, other):
        return TildeDensity(self.rep - _rep(other))

    def __neg__(self):
        return TildeDensity(-self.rep)

    def scale(self, c):
        return TildeDensity(self.rep.scale(c))

    def is_zero(self) -> bool:
        return is_total_derivative(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            return is_total_derivative(self.rep - _rep(other))
        except TypeError:
            return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"~({self.rep})"


def _rep(x) -> SuperPoly:
    if isinstance(x, TildeDensity):
        return x.rep
    return SuperPoly.coerce(x)


# -- pairing and trace --------------------------------------------------------

def pairing_rep(v: PDO, w: PDO) -> SuperPoly:
    """Representative of ``<v, w> = sum_j <phi_j, psi_{-j-1}>`` with ``w = sum d^k psi_k``.

    ``v`` is read in left normal form and ``w`` in right normal form, which makes
    the pairing agree with the residue of ``vw`` modulo total derivatives.
    """
    A = v.alg
    if not v.coeffs or not w.coeffs:
        return ZERO
    need = -v.top - 1
    if w.floor is not None and need < w.floor:
        bad = [j for j in v.coeffs if -j - 1 < w.floor]
        if bad:
            raise FloorContamination(f"pairing needs order {-max(bad) - 1} of an operator exact only to {w.floor}")
    cut = _max_floor(w.floor, need)
    right = to_right(w, cut)
    out = ZERO
    for k, psi in right.items():
        j = -k - 1
        if v.floor is not None and j < v.floor:
            raise FloorContamination(f"pairing needs order {j} of an operator exact only to {v.floor}")
        phi = v.coeffs.get(j)
        if phi:
            out = out + alg_form(A, phi, psi)
    return out


def pdo_pairing(v: PDO, w: PDO) -> TildeDensity:
    return TildeDensity(pairing_rep(v, w))


def trace_element(A: GradedAlgebraSpec, x: AlgElement) -> SuperPoly:
    """``Tr(x) = <1, x>``."""
    return alg_form(A, A.identity_element(), x)


def residue_trace_rep(a: PDO) -> SuperPoly:
    return trace_element(a.alg, a.coeff(-1))


def residue_trace(a: PDO) -> TildeDensity:
    """Trace of the order -1 coefficient (left normal form)."""
    return TildeDensity(residue_trace_rep(a))


# -- the differential of a density ----------------------------------------------

def chi_right(A: GradedAlgebraSpec, f) -> Dict[int, AlgElement]:
    """Right-form coefficients of ``chi_f = sum (-1)^{i(1+p)} d^(-j2-1) delta_{i,j}(f) b^v``.

    ``b^v`` is the dual basis element, so that ``<v, chi_f> = d_v f`` modulo d.
    """
    f = SuperPoly.coerce(f)
    dual = A.dual_basis()
    out: Dict[int, AlgElement] = {}
    for part in f.split_parity():
        if not part:
            continue
        p = part.parity()
        for v in density_families(part):
            delta = delta_of(part, v)
            if not delta:
                continue
            a, order = var_slot(A, v)
            s = _sign(v.parity * (1 + p))
            k = -order - 1
            term = AlgElement({c: delta.scale(s * x) for c, x in dual[a].items()})
            out[k] = out[k] + term if k in out else term
    return {k: x for k, x in out.items() if x}


def chi(A: GradedAlgebraSpec, f, floor: Optional[int] = None) -> PDO:
    """``chi_f`` as an operator in left normal form, exact down to ``floor``."""
    right = chi_right(A, f)
    if floor is None and right:
        floor = min(right) - DEFAULT_DEPTH
    return PDO.from_right(A, right, floor)


# -- vector fields -----------------------------------------------------------------

def apply_field(v: PDO, g) -> SuperPoly:
    """``d_v g = sum f^(m)_{a,l} d g / d u^(m)_{a,l}`` for ``v = sum f_{a,l} b_a d^l``."""
    A = v.alg
    g = SuperPoly.coerce(g)
    out = ZERO
    for x in g.variables():
        if x.kind != "u":
            continue
        a, l = var_slot(A, x)
        if v.floor is not None and l < v.floor:
            raise FloorContamination(f"vector field needed at order {l} below floor {v.floor}")
        c = v.coeffs.get(l)
        f = c.coords.get(a) if c else None
        if not f:
            continue
        for _ in range(x.jet):
            f = f.total_derivative()
        out = out + f * g.derive(x)
    return out


def directional_derivative_pdo(v: PDO, w: PDO) -> PDO:
    """Coefficientwise ``d_v(w)``."""
    return PDO(w.alg, {l: c.map_coeffs(lambda f: apply_field(v, f)) for l, c in w.coeffs.items()}, w.floor)


def field_bracket(v: PDO, w: PDO) -> PDO:
    """``[v, w]_0 = d_v(w) - (-1)^{|v||w|} d_w(v)``."""
    pv, pw = v.parity(), w.parity()
    if MIXED in (pv, pw):
        raise ValueError("bracket needs homogeneous fields")
    return directional_derivative_pdo(v, w) - directional_derivative_pdo(w, v).scale(_sign(pv * pw))


def variable_part(v: PDO, orders: Optional[Iterable[int]] = None) -> PDO:
    """The vector field of generic coordinates: ``sum u_{a,l} b_a d^l`` over given orders."""
    A = v.alg
    out: Dict[int, AlgElement] = {}
    for l in orders if orders is not None else v.coeffs:
        out[l] = AlgElement({a: SuperPoly.var(slot_var(A, a, l)) for a in range(A.dim)})
    return PDO(A, out)


# -- Lax operators and the Adler maps ---------------------------------------------

@dataclass(eq=False)
class LaxOperator:
    """``L = L0 + sum_{(a,l) in slots} u_{a,l} b_a d^l`` with constant ``L0`` and ``kappa``."""

    alg: GradedAlgebraSpec
    iota: int
    L0: PDO
    kappa: AlgElement
    slots: Tuple[Tuple[int, int], ...]
    name: str = ""
    h2_sign: int = -1
    _cache: Dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return self.iota + 1

    @property
    def L(self) -> PDO:
        if "L" not in self._cache:
            A = self.alg
            var = PDO(A, {})
            for a, l in self.slots:
                var = var + PDO(A, {l: AlgElement({a: SuperPoly.var(slot_var(A, a, l))})})
            self._cache["L"] = self.L0 + var
        return self._cache["L"]

    def variables(self) -> List[VarId]:
        return [slot_var(self.alg, a, l) for a, l in self.slots]

    def jet_variables(self, max_jet: int = 2) -> List[VarId]:
        return [v.shifted(k) for v in self.variables() for k in range(max_jet + 1)]

    @property
    def omega_floor(self) -> int:
        """Deepest order a one-form needs so that H(one-form) is exact on every slot."""
        low = min((l for _, l in self.slots), default=0)
        return low - 2 * self.order

    @property
    def kappa_op(self) -> PDO:
        return PDO(self.alg, {0: self.kappa})


def _const(A: GradedAlgebraSpec, vec) -> AlgElement:
    return AlgElement({a: SuperPoly.const(Fraction(c)) for a, c in vec.items()})


def make_lax(A: GradedAlgebraSpec, iota: int, L0: Mapping[int, Mapping[int, object]],
             kappa: Optional[Mapping[int, object]] = None, slots: Optional[Iterable[Tuple[int, int]]] = None,
             name: str = "", h2_sign: int = -1) -> LaxOperator:
    """Build a Lax operator.

    ``L0`` maps orders to constant even elements, ``kappa`` is a constant even element
    (default: the identity) and ``slots`` lists the ``(basis index, order)`` pairs that
    carry a jet variable (default: every basis element at every order 0..iota).
    """
    if iota < 0:
        raise ValueError("iota must be nonnegative")
    L0op = PDO(A, {int(m): _const(A, vec) for m, vec in L0.items()})
    for m, c in L0op.coeffs.items():
        if m > iota + 1:
            raise ValueError(f"L0 has order {m} above iota+1")
        if element_parity(A, c) != 0:
            raise ValueError(f"L0 coefficient at order {m} is not even")
    if kappa is None:
        kappa = A.identity or {}
    kap = _const(A, kappa)
    if kap and element_parity(A, kap) != 0:
        raise ValueError("kappa must be even")
    if slots is None:
        slots = [(a, l) for l in range(0, iota + 1) for a in range(A.dim)]
    slots = tuple(sorted(set((int(a), int(l)) for a, l in slots), key=lambda s: (-s[1], s[0])))
    for a, l in slots:
        if l > iota:
            raise ValueError(f"slot order {l} exceeds iota")
        if not 0 <= a < A.dim:
            raise ValueError(f"slot basis index {a} out of range")
    if h2_sign not in (1, -1):
        raise ValueError("h2_sign must be +1 or -1")
    return LaxOperator(A, iota, L0op, kap, slots, name, h2_sign)


def kappa_central(lax: LaxOperator) -> Check:
    A = lax.alg
    for b in range(A.dim):
        x = A.basis_element(b)
        d = alg_mul(A, lax.kappa, x) - alg_mul(A, x, lax.kappa)
        if d:
            return Check("kappa_central", False, {"basis": str(A.labels[b]), "defect": repr(d)})
    return Check("kappa_central", True, checked=A.dim)


def in_omega(lax: LaxOperator, w: PDO) -> bool:
    """Right normal form of ``w`` has no orders below ``-iota-1`` (on its exact part)."""
    right = to_right(w, w.floor if w.floor is not None else -lax.order)
    return all(k >= -lax.order for k in right)


def _check_g(lax: LaxOperator, x: PDO, what: str) -> PDO:
    bad = [l for l in x.coeffs if l > lax.iota]
    if bad:
        raise EscapeError(f"{what} has order {max(bad)} above iota={lax.iota}")
    return x


def adler_maps(lax: LaxOperator, w: PDO, check_omega: bool = True) -> Tuple[PDO, PDO]:
    """``H1 = kappa[L,w]_- + [(kappa w)_-, L]`` and ``H2 = (Lw)_- L - L(wL)_-``."""
    A = lax.alg
    if not w.coeffs:
        return PDO(A, {}, w.floor), PDO(A, {}, w.floor)
    if check_omega and not in_omega(lax, w):
        raise ValueError("argument is not a one-form: right normal form reaches below -iota-1")
    L = lax.L
    Lw = pdo_mul(L, w)
    wL = pdo_mul(w, L)
    comm = Lw - wL  # L is even
    K = lax.kappa_op
    h1 = pdo_mul(K, pdo_project(comm, "-"))
    kw = pdo_project(pdo_mul(K, w), "-")
    h1 = h1 + (pdo_mul(kw, L) - pdo_mul(L, kw))
    h2 = pdo_mul(pdo_project(Lw, "-"), L) + pdo_mul(L, pdo_project(wL, "-")).scale(lax.h2_sign)
    return _check_g(lax, h1, "H1"), _check_g(lax, h2, "H2")


def hamiltonian_op(lax: LaxOperator, lam, w: PDO) -> PDO:
    h1, h2 = adler_maps(lax, w, check_omega=False)
    lam = Fraction(lam)
    return h2 + h1.scale(lam) if lam else h2


def _pair_right(v: PDO, right: Mapping[int, AlgElement]) -> SuperPoly:
    out = ZERO
    for k, psi in right.items():
        phi = v.coeff(-k - 1)
        if phi:
            out = out + alg_form(v.alg, phi, psi)
    return out


def _chi(lax: LaxOperator, f) -> Tuple[PDO, Dict[int, AlgElement]]:
    key = ("chi", f)
    hit = lax._cache.get(key)
    if hit is None:
        right = chi_right(lax.alg, f)
        hit = (PDO.from_right(lax.alg, right, lax.omega_floor), right)
        if len(lax._cache) < 4096:
            lax._cache[key] = hit
    return hit


def bracket(lax: LaxOperator, lam, f, g) -> SuperPoly:
    """Representative of ``{f, g} = <(lam H1 + H2)(chi_f), chi_g>``."""
    f, g = SuperPoly.coerce(f), SuperPoly.coerce(g)
    wf, _ = _chi(lax, f)
    _, rg = _chi(lax, g)
    if not wf.coeffs or not rg:
        return ZERO
    return _pair_right(hamiltonian_op(lax, lam, wf), rg)


def _par(f: SuperPoly) -> int:
    p = f.parity()
    if p == MIXED:
        raise ValueError("sampled densities must be homogeneous")
    return p


def sample_density(rng: random.Random, variables: Sequence[VarId], parity: int, max_terms: int = 3,
                   max_degree: int = 2) -> SuperPoly:
    from .poisson import sample_poly
    return sample_poly(rng, variables, parity, max_terms=max_terms, max_degree=max_degree)


def sample_densities(lax: LaxOperator, n: int, seed: int = 0, max_jet: int = 2) -> List[Tuple[SuperPoly, ...]]:
    rng = random.Random(seed)
    vs = lax.jet_variables(max_jet)
    has_odd = any(v.parity for v in vs)
    out = []
    for _ in range(n):
        ps = [rng.randint(0, 1) if has_odd else 0 for _ in range(3)]
        out.append(tuple(sample_density(rng, vs, p, max_terms=2) for p in ps))
    return out


def verify_hamiltonian_superpair(lax: LaxOperator, samples: Optional[list] = None, lambdas=(0, 1, -1, 2),
                                 n: int = 6, seed: int = 0) -> Report:
    """Skew-symmetry and super-Jacobi modulo total derivatives for ``lam {,}_1 + {,}_2``."""
    rep = Report(f"Hamiltonian superpair {lax.name}".strip())
    rep.add(kappa_central(lax))
    samples = samples if samples is not None else sample_densities(lax, n, seed)
    rep.extra["samples"] = len(samples)
    for lam in lambdas:
        lam = Fraction(lam)
        br = lambda a, b: bracket(lax, lam, a, b)
        skew = jac = None
        for f, g, h in samples:
            pf, pg, ph = _par(f), _par(g), _par(h)
            if skew is None:
                for (a, pa), (b, pb) in itertools.combinations(((f, pf), (g, pg), (h, ph)), 2):
                    d = br(a, b) + br(b, a).scale(_sign(pa * pb))
                    if not is_total_derivative(d):
                        skew = {"f": str(a), "g": str(b), "defect": str(d)}
                        break
            if jac is None:
                total = (br(f, br(g, h)).scale(_sign(pf * ph)) + br(g, br(h, f)).scale(_sign(pg * pf))
                         + br(h, br(f, g)).scale(_sign(ph * pg)))
                if not is_total_derivative(total):
                    jac = {"f": str(f), "g": str(g), "h": str(h), "defect": str(total)}
        tag = f"lambda={lam}"
        rep.add(Check(f"skew[{tag}]", skew is None, skew, checked=3 * len(samples)))
        rep.add(Check(f"jacobi[{tag}]", jac is None, jac, checked=len(samples)))
    return rep


# -- the hierarchy --------------------------------------------------------------------

def _check_monic(lax: LaxOperator) -> AlgElement:
    A = lax.alg
    if A.identity is None:
        raise ValueError("fractional roots need an algebra with identity")
    one = A.identity_element()
    L = lax.L
    if L.top != lax.order or L.coeffs[lax.order] != one:
        raise ValueError("fractional roots need L with leading term 1 d^(iota+1)")
    return one


def fractional_root(lax: LaxOperator, depth: int = 6) -> PDO:
    """``R = d + sum_{m<depth} f_m d^(-m)`` with ``R^(iota+1) = L``; exact at orders ``>= 1-depth``.

    ``f_m`` is fixed by the order ``iota-m`` coefficient of ``R^(iota+1)``, which equals
    ``(iota+1) f_m`` plus terms in ``f_0..f_{m-1}``.
    """
    one = _check_monic(lax)
    A, n, L = lax.alg, lax.order, lax.L
    key = ("root", depth)
    if key in lax._cache:
        return lax._cache[key]
    coeffs = {1: one}
    inv = Fraction(1, n)
    for m in range(depth):
        t = n - 1 - m
        R = PDO(A, coeffs, -m)
        X = pdo_power(R, n)
        gap = L.coeff(t) - X.coeff(t)
        coeffs[-m] = gap.map_coeffs(lambda f: f.scale(inv))
    root = PDO(A, coeffs, 1 - depth)
    lax._cache[key] = root
    return root


def root_power(lax: LaxOperator, m: int, depth: Optional[int] = None) -> PDO:
    """``L^(m/(iota+1))``, exact at orders ``>= m - depth``."""
    depth = depth if depth is not None else m + 1
    key = ("power", m, depth)
    if key not in lax._cache:
        lax._cache[key] = pdo_power(fractional_root(lax, depth), m)
    return lax._cache[key]


def flow_generator(lax: LaxOperator, m: int, depth: Optional[int] = None) -> PDO:
    """``B_m = (L^(m/(iota+1)))_+`` as an exact differential operator."""
    P = root_power(lax, m, depth if depth is not None else m)
    if P.floor is not None and P.floor > 0:
        raise FloorContamination(f"B_{m} needs the root to depth >= {m}; got exact floor {P.floor}")
    return PDO(lax.alg, pdo_project(P, "+").coeffs)


def flow_field(lax: LaxOperator, m: int, depth: Optional[int] = None) -> PDO:
    """``dL/dt_m = [L, B_m]``, checked to lie on the declared variable pattern."""
    B = flow_generator(lax, m, depth)
    L = lax.L
    rhs = pdo_mul(L, B) - pdo_mul(B, L)
    allowed = set(lax.slots)
    for l, c in rhs.coeffs.items():
        for a, f in c.coords.items():
            if (a, l) not in allowed:
                raise SupportError(f"flow {m} produces {f} on {lax.alg.labels[a]} d^{l}, outside the pattern of L")
    return rhs


def lax_rhs(lax: LaxOperator, m: int, depth: Optional[int] = None) -> Dict[VarId, SuperPoly]:
    """Evolution equations ``du_{a,l}/dt`` extracted from ``[L, B_m]``."""
    rhs = flow_field(lax, m, depth)
    A = lax.alg
    out = {}
    for a, l in lax.slots:
        c = rhs.coeffs.get(l)
        out[slot_var(A, a, l)] = c.coords.get(a, ZERO) if c else ZERO
    return out


def conserved_density(lax: LaxOperator, n: int, depth: Optional[int] = None) -> TildeDensity:
    """``Tr(L^(n/(iota+1)))``; the default depth makes the residue exact."""
    return residue_trace(root_power(lax, n, depth if depth is not None else n + 1))


def conservation_check(lax: LaxOperator, m: int, n: int, flow: Optional[PDO] = None,
                       depth: Optional[int] = None) -> Report:
    """``d/dt_m Tr(L^(n/(iota+1)))`` is a total derivative; ``flow`` overrides ``[L, B_m]``."""
    rep = Report(f"conservation {lax.name} m={m} n={n}".strip())
    v = flow if flow is not None else flow_field(lax, m, depth)
    rho = conserved_density(lax, n, depth).rep
    rate = apply_field(v, rho)
    ok = is_total_derivative(rate)
    witness = None if ok else {"density": str(rho), "rate": str(rate)}
    rep.add(Check(f"conserved[m={m},n={n}]", ok, witness, checked=1))
    rep.extra["density"] = str(rho)
    rep.extra["floor"] = root_power(lax, n, depth if depth is not None else n + 1).floor
    return rep


def zero_curvature_residual(lax: LaxOperator, m: int, n: int, depth: Optional[int] = None) -> PDO:
    """``dB_m/dt_n - dB_n/dt_m - [B_m, B_n]``."""
    Bm, Bn = flow_generator(lax, m, depth), flow_generator(lax, n, depth)
    vm, vn = flow_field(lax, m, depth), flow_field(lax, n, depth)
    comm = pdo_mul(Bm, Bn) - pdo_mul(Bn, Bm)
    return directional_derivative_pdo(vn, Bm) - directional_derivative_pdo(vm, Bn) - comm


def hierarchy_report(lax: LaxOperator, flows: Sequence[int] = (2, 3), depth: Optional[int] = None) -> Report:
    """Conservation for every pair of flows and zero curvature for every pair."""
    rep = Report(f"hierarchy {lax.name}".strip())
    for m in flows:
        for n in flows:
            rep.extend(conservation_check(lax, m, n, depth=depth))
    for m, n in itertools.combinations_with_replacement(flows, 2):
        res = zero_curvature_residual(lax, m, n, depth)
        rep.add(Check(f"zero_curvature[{m},{n}]", not res.coeffs, None if not res.coeffs else repr(res), checked=1))
    rep.extra.pop("density", None)
    rep.extra["depth"] = depth if depth is not None else "auto"
    return rep


# -- sampling for property checks -----------------------------------------------------

def jet_variables(A: GradedAlgebraSpec, orders: Iterable[int] = (0,), max_jet: int = 2) -> List[VarId]:
    return [slot_var(A, a, l, k) for l in orders for a in range(A.dim) for k in range(max_jet + 1)]


def sample_pdo(rng: random.Random, A: GradedAlgebraSpec, variables: Sequence[VarId], parity: int = 0,
               orders: Sequence[int] = (-2, -1, 0, 1, 2), max_orders: int = 3) -> PDO:
    """Exact random homogeneous operator with at most ``max_orders`` nonzero orders."""
    odd_vars = any(v.parity for v in variables)
    basis = [a for a in range(A.dim) if odd_vars or A.parities[a] == parity % 2]
    if not basis:
        raise ValueError(f"no operators of parity {parity} over these variables")
    out: Dict[int, AlgElement] = {}
    while not out:
        for l in rng.sample(list(orders), rng.randint(1, max_orders)):
            a = rng.choice(basis)
            f = sample_density(rng, variables, (parity + A.parities[a]) % 2, max_terms=2)
            if f:
                out[l] = AlgElement({a: f})
    return PDO(A, out)


def _parity_choice(rng, A, vs) -> int:
    return rng.randint(0, 1) if any(A.parities) or any(v.parity for v in vs) else 0


def associativity_check(A: GradedAlgebraSpec, n: int = 100, seed: int = 0, floor: int = -4) -> Check:
    """``(ab)c = a(bc)`` on every order where both sides are exact."""
    rng = random.Random(seed)
    vs = jet_variables(A, (0,), 1)
    for k in range(n):
        a, b, c = (sample_pdo(rng, A, vs, _parity_choice(rng, A, vs)) for _ in range(3))
        lhs = pdo_mul(pdo_mul(a, b, floor), c, floor)
        rhs = pdo_mul(a, pdo_mul(b, c, floor), floor)
        if not lhs.equal_above(rhs):
            return Check("pdo_associativity", False, {"a": repr(a), "b": repr(b), "c": repr(c)}, checked=k + 1)
    return Check("pdo_associativity", True, checked=n)


def trace_commutator_check(A: GradedAlgebraSpec, n: int = 50, seed: int = 1) -> Check:
    """``Tr(ab) - (-1)^{|a||b|} Tr(ba)`` is a total derivative."""
    rng = random.Random(seed)
    vs = jet_variables(A, (0,), 1)
    for k in range(n):
        pa, pb = _parity_choice(rng, A, vs), _parity_choice(rng, A, vs)
        a, b = sample_pdo(rng, A, vs, pa), sample_pdo(rng, A, vs, pb)
        d = residue_trace_rep(pdo_mul(a, b, -1)) - residue_trace_rep(pdo_mul(b, a, -1)).scale(_sign(pa * pb))
        if not is_total_derivative(d):
            return Check("trace_of_commutator", False, {"a": repr(a), "b": repr(b), "defect": str(d)}, checked=k + 1)
    return Check("trace_of_commutator", True, checked=n)


def annihilation_check(A: GradedAlgebraSpec, n: int = 50, seed: int = 2) -> Check:
    """Variational derivatives kill every total derivative."""
    rng = random.Random(seed)
    vs = jet_variables(A, (0, -1), 2)
    fams = sorted({base_var(v) for v in vs})
    for k in range(n):
        f = sample_density(rng, vs, rng.randint(0, 1) if any(v.parity for v in vs) else 0, max_terms=3)
        df = f.total_derivative()
        for v in fams:
            if delta_of(df, v):
                return Check("variational_annihilation", False, {"f": str(f), "family": str(v)}, checked=k + 1)
    return Check("variational_annihilation", True, checked=n)
