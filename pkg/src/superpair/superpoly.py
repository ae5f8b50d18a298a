"""Exact super-commutative polynomials in Z2-graded variables.

A monomial is a sorted tuple of ``(VarId, exponent)`` pairs.  Odd variables
always carry exponent 1 and appear in the global variable order, so the sign
produced by reordering odd factors is absorbed into the coefficient.  Even
variables sort before odd ones because parity is the leading key.

Two families of variables share the type: plain variables ``x_{i,j}``
(``kind="x"``) and jet variables ``u^{(m)}_{i,j}`` (``kind="u"``).  A single
polynomial never mixes the two.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Tuple, Union

MIXED = "mixed"


class VarId(NamedTuple):
    parity: int
    index: Tuple[int, ...]
    jet: int = 0
    kind: str = "x"

    def shifted(self, k: int = 1) -> "VarId":
        return VarId(self.parity, self.index, self.jet + k, self.kind)

    def __str__(self) -> str:
        name = self.kind + "_" + ",".join([str(self.parity)] + [str(j) for j in self.index])
        if self.kind == "u" and self.jet:
            return f"{name}^({self.jet})"
        return name


def xvar(parity: int, j: int) -> VarId:
    """The variable ``x_{parity,j}`` of the finite polynomial ring."""
    return VarId(parity % 2, (j,), 0, "x")


def uvar(parity: int, j1: int, j2: int, jet: int = 0) -> VarId:
    """The jet variable ``u^{(jet)}_{parity,(j1,j2)}``."""
    return VarId(parity % 2, (j1, j2), jet, "u")


Monomial = Tuple[Tuple[VarId, int], ...]
Scalar = Union[int, Fraction]

ONE_MONO: Monomial = ()


def mono_parity(m: Monomial) -> int:
    return sum(1 for v, _ in m if v.parity) % 2


def mono_mul(a: Monomial, b: Monomial) -> Tuple[int, Monomial]:
    """Product of two monomials as ``(sign, monomial)``; sign 0 means zero."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    sign = 1
    i = j = 0
    # odd factors of ``a`` not yet emitted; each odd factor of ``b`` emitted
    # early jumps over them
    odd_left_a = sum(1 for v, _ in a if v.parity)
    na, nb = len(a), len(b)
    while i < na and j < nb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            if va.parity:
                return 0, ()
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append((va, ea))
            if va.parity:
                odd_left_a -= 1
            i += 1
        else:
            out.append((vb, eb))
            if vb.parity and odd_left_a % 2:
                sign = -sign
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def sort_odd(vars_: Iterable[VarId]) -> Tuple[int, Tuple[VarId, ...]]:
    """Sort odd variables, returning the permutation sign (0 on repeats)."""
    seq = list(vars_)
    sign = 1
    for i in range(1, len(seq)):
        k = i
        while k > 0 and seq[k - 1] > seq[k]:
            seq[k - 1], seq[k] = seq[k], seq[k - 1]
            sign = -sign
            k -= 1
        if k > 0 and seq[k - 1] == seq[k]:
            return 0, ()
    return sign, tuple(seq)


def _normalize(evens: Dict[VarId, int], odds: Iterable[VarId]) -> Tuple[int, Monomial]:
    sign, odd_sorted = sort_odd(odds)
    if sign == 0:
        return 0, ()
    mono = tuple(sorted(evens.items())) + tuple((v, 1) for v in odd_sorted)
    return sign, mono


class SuperPoly:
    """Immutable polynomial ``{monomial: Fraction}`` with Koszul-sign products."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[Monomial, Scalar]] = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "SuperPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "SuperPoly":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, v: VarId, coeff: Scalar = 1) -> "SuperPoly":
        return cls({((v, 1),): coeff})

    @classmethod
    def coerce(cls, other) -> "SuperPoly":
        if isinstance(other, SuperPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.const(other)
        raise TypeError(f"cannot coerce {type(other).__name__} to SuperPoly")

    # -- inspection ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def kinds(self) -> set:
        return {v.kind for v in self.variables()}

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def parity(self):
        """0 or 1 for homogeneous polynomials (zero counts as even), else MIXED."""
        ps = {mono_parity(m) for m in self.terms}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return MIXED

    def split_parity(self) -> Tuple["SuperPoly", "SuperPoly"]:
        even, odd = {}, {}
        for m, c in self.terms.items():
            (odd if mono_parity(m) else even)[m] = c
        return SuperPoly._raw(even), SuperPoly._raw(odd)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "SuperPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            other = SuperPoly.const(other)
        elif not isinstance(other, SuperPoly):
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return SuperPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "SuperPoly":
        return SuperPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "SuperPoly":
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SuperPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "SuperPoly":
        if not c:
            return ZERO
        if c == 1:
            return self
        return SuperPoly._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "SuperPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        _check_mixing(self, other)
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s, m = mono_mul(ma, mb)
                if not s:
                    continue
                c = ca * cb if s > 0 else -(ca * cb)
                prev = out.get(m)
                if prev is None:
                    out[m] = c
                else:
                    prev += c
                    if prev:
                        out[m] = prev
                    else:
                        del out[m]
        return SuperPoly._raw(out)

    def __rmul__(self, other) -> "SuperPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "SuperPoly":
        if n < 0:
            raise ValueError("negative power")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SuperPoly.const(other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus -----------------------------------------------------------

    def derive(self, v: VarId) -> "SuperPoly":
        """Left super-derivation with respect to ``v``."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            res = _derive_mono(m, v)
            if res is None:
                continue
            coef, mono = res
            val = out.get(mono, 0) + c * coef
            if val:
                out[mono] = val
            else:
                out.pop(mono, None)
        return SuperPoly._raw(out)

    def total_derivative(self) -> "SuperPoly":
        """The even derivation ``sum u^{(m+1)} d/du^{(m)}`` on jet variables."""
        if "x" in self.kinds():
            raise ValueError("total derivative is defined on jet variables only")
        out = ZERO
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for coef, mono in _tdiff_mono(m):
                val = acc.get(mono, 0) + c * coef
                if val:
                    acc[mono] = val
                else:
                    acc.pop(mono, None)
        out = SuperPoly._raw(acc)
        return out

    def rename(self, mapping) -> "SuperPoly":
        """Substitute variables by other variables of the same parity."""
        out = ZERO
        for m, c in self.terms.items():
            evens: Dict[VarId, int] = {}
            odds = []
            for v, e in m:
                w = mapping(v)
                if w.parity != v.parity:
                    raise ValueError("renaming must preserve parity")
                if w.parity:
                    odds.append(w)
                else:
                    evens[w] = evens.get(w, 0) + e
            s, mono = _normalize(evens, odds)
            if s:
                out = out + SuperPoly._raw({mono: c * s})
        return out

    # -- display ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"SuperPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in m]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


ZERO = SuperPoly()
ONE = SuperPoly.const(1)


def _check_mixing(a: SuperPoly, b: SuperPoly) -> None:
    ka = {v.kind for m in a.terms for v, _ in m}
    if not ka:
        return
    kb = {v.kind for m in b.terms for v, _ in m}
    if kb and (ka | kb) == {"x", "u"}:
        raise ValueError("plain and jet variables cannot be mixed in one polynomial")


def _derive_mono(m: Monomial, v: VarId):
    odd_before = 0
    for pos, (w, e) in enumerate(m):
        if w == v:
            rest = m[:pos] + m[pos + 1:]
            if v.parity:
                return (-1 if odd_before % 2 else 1), rest
            if e == 1:
                return e, rest
            return e, m[:pos] + ((w, e - 1),) + m[pos + 1:]
        if w.parity:
            odd_before += 1
    return None


def _tdiff_mono(m: Monomial):
    """Leibniz expansion of the total derivative on one monomial."""
    evens = {v: e for v, e in m if not v.parity}
    odds = [v for v, _ in m if v.parity]
    for v, e in evens.items():
        new = dict(evens)
        if e == 1:
            del new[v]
        else:
            new[v] = e - 1
        w = v.shifted()
        new[w] = new.get(w, 0) + 1
        s, mono = _normalize(new, odds)
        if s:
            yield e * s, mono
    for k, v in enumerate(odds):
        new_odds = odds[:k] + [v.shifted()] + odds[k + 1:]
        s, mono = _normalize(evens, new_odds)
        if s:
            yield s, mono


# -- functional surface ------------------------------------------------------

def sp_mul(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    return SuperPoly.coerce(f) * SuperPoly.coerce(g)


def sp_derive(v: VarId, f: SuperPoly) -> SuperPoly:
    return SuperPoly.coerce(f).derive(v)


def sp_total_derivative(f: SuperPoly) -> SuperPoly:
    return SuperPoly.coerce(f).total_derivative()


def sp_parity(f: SuperPoly):
    return SuperPoly.coerce(f).parity()


def total_derivative_power(f: SuperPoly, k: int) -> SuperPoly:
    for _ in range(k):
        f = f.total_derivative()
    return f
