"""JSON documents: loading, validation and serialization.

Every document is an object with a ``kind`` (algebra, polarized,
pair-of-products, L4, L5) plus kind-specific fields.  Rationals are written as
strings ``"p/q"`` or integers; floats are rejected so nothing inexact sneaks in.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Tuple

from .errors import SuperpairError
from .graded_algebra import (GradedAlgebraSpec, cyclic_group_table, make_ground_field, make_hecke_algebra,
                             make_matrix_superalgebra, make_twisted_group_algebra, tensor_product)
from .polarization import (PairOfProducts, PolarizedSpec, extract_pair, make_laurent_polarized,
                           make_matrix_laurent)

KINDS = ("algebra", "polarized", "pair-of-products", "L4", "L5")


class DocumentError(SuperpairError):
    """Malformed or schema-invalid document."""


def rational(x, where: str = "value") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DocumentError(f"{where}: {x!r} is not an exact rational (use \"p/q\")")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"{where}: cannot parse rational {x!r}") from None
    raise DocumentError(f"{where}: expected a rational, got {type(x).__name__}")


def rat_str(x: Fraction) -> str:
    return str(Fraction(x))


def _int(x, where: str, positive: bool = False) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer, got {x!r}")
    if positive and x <= 0:
        raise DocumentError(f"{where}: must be positive")
    return x


def _get(d: Dict, key: str, where: str):
    if not isinstance(d, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in d:
        raise DocumentError(f"{where}: missing field {key!r}")
    return d[key]


def _label_key(label) -> Any:
    return list(label) if isinstance(label, tuple) else label


def resolve_label(A: GradedAlgebraSpec, x, where: str = "label") -> int:
    """Basis index of a label given as written in a document (string or list)."""
    target = tuple(_tuplify(x)) if isinstance(x, list) else x
    for k, lab in enumerate(A.labels):
        if lab == target or str(lab) == str(x):
            return k
    raise DocumentError(f"{where}: unknown basis label {x!r}")


def _tuplify(x):
    return tuple(_tuplify(y) for y in x) if isinstance(x, list) else x


# -- algebras --------------------------------------------------------------------

def build_algebra(c: Dict, where: str = "algebra"):
    kind = _get(c, "type", where)
    if kind == "field":
        A = make_ground_field()
    elif kind == "matrix":
        A = make_matrix_superalgebra(_int(_get(c, "k", where), f"{where}.k", True), _int(c.get("k1", 0), f"{where}.k1"))
    elif kind == "twisted":
        n = _int(_get(c, "n", where), f"{where}.n", True)
        eps = _get(c, "eps", where)
        if not isinstance(eps, list) or len(eps) != n or any(not isinstance(r, list) or len(r) != n for r in eps):
            raise DocumentError(f"{where}.eps: expected an {n}x{n} matrix")
        A = make_twisted_group_algebra(cyclic_group_table(n),
                                       [[rational(x, f"{where}.eps") for x in r] for r in eps])
    elif kind == "hecke":
        A = make_hecke_algebra(_int(_get(c, "k", where), f"{where}.k", True),
                               rational(_get(c, "q", where), f"{where}.q"),
                               rational(_get(c, "zeta", where), f"{where}.zeta"))
    elif kind == "tensor":
        fs = _get(c, "factors", where)
        if not isinstance(fs, list) or len(fs) < 2:
            raise DocumentError(f"{where}.factors: need at least two factors")
        A = build_algebra(fs[0], f"{where}.factors[0]")
        for k, f in enumerate(fs[1:], 1):
            B = build_algebra(f, f"{where}.factors[{k}]")
            if isinstance(B, PolarizedSpec):
                raise DocumentError(f"{where}.factors[{k}]: only the first factor may be polarized")
            A = tensor_product(A, B)
    elif kind == "laurent":
        A = make_laurent_polarized(_int(_get(c, "N", where), f"{where}.N", True))
    elif kind == "matrix-laurent":
        A = make_matrix_laurent(_int(_get(c, "k", where), f"{where}.k", True), _int(c.get("k1", 0), f"{where}.k1"),
                                _int(_get(c, "N", where), f"{where}.N", True))
    elif kind == "explicit":
        A = _explicit_algebra(c, where)
    else:
        raise DocumentError(f"{where}: unknown algebra type {kind!r}")
    pert = c.get("perturb")
    if pert is not None:
        alg = A.alg if isinstance(A, PolarizedSpec) else A
        a, b, t = (resolve_label(alg, _get(pert, k, f"{where}.perturb"), f"{where}.perturb.{k}") for k in "abc")
        delta = rational(pert.get("delta", 1), f"{where}.perturb.delta")
        if isinstance(A, PolarizedSpec):
            A = A.perturbed(alg.labels[a], alg.labels[b], alg.labels[t], delta)
        else:
            A = A.perturbed(a, b, t, delta)
    return A


def _explicit_algebra(c: Dict, where: str):
    labels = [_tuplify(x) for x in _get(c, "labels", where)]
    parities = _get(c, "parities", where)
    if len(parities) != len(labels) or any(p not in (0, 1) for p in parities):
        raise DocumentError(f"{where}.parities: need one 0/1 entry per label")
    pos = {lab: k for k, lab in enumerate(labels)}
    if len(pos) != len(labels):
        raise DocumentError(f"{where}.labels: duplicate labels")

    def ix(x, w):
        x = _tuplify(x)
        if x not in pos:
            raise DocumentError(f"{w}: unknown label {x!r}")
        return pos[x]

    table = {}
    for k, entry in enumerate(_get(c, "table", where)):
        w = f"{where}.table[{k}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise DocumentError(f"{w}: expected [a, b, c, value]")
        key = (ix(entry[0], w), ix(entry[1], w))
        val = rational(entry[3], w)
        if val:
            table.setdefault(key, {})[ix(entry[2], w)] = val
    n = len(labels)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for k, entry in enumerate(_get(c, "gram", where)):
        w = f"{where}.gram[{k}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise DocumentError(f"{w}: expected [a, b, value]")
        gram[ix(entry[0], w)][ix(entry[1], w)] = rational(entry[2], w)
    identity = None
    if c.get("identity") is not None:
        identity = {ix(x, f"{where}.identity"): rational(v, f"{where}.identity") for x, v in c["identity"]}
    overflow = frozenset((ix(a, f"{where}.overflow"), ix(b, f"{where}.overflow")) for a, b in c.get("overflow", []))
    A = GradedAlgebraSpec(tuple(labels), tuple(parities), table, tuple(map(tuple, gram)), identity, overflow,
                          name=str(c.get("name", "explicit")))
    if "sizes" in c:
        sizes = tuple(_int(s, f"{where}.sizes") for s in c["sizes"])
        window = _int(c.get("window", max(sizes)), f"{where}.window", True)
        return PolarizedSpec(A, sizes, window, name=A.name)
    return A


def algebra_to_doc(A) -> Dict:
    """Explicit serialization of a (possibly polarized) algebra."""
    P = A if isinstance(A, PolarizedSpec) else None
    alg = P.alg if P else A
    L = [_label_key(x) for x in alg.labels]
    table = [[L[a], L[b], L[c], rat_str(v)] for (a, b), row in sorted(alg.table.items()) for c, v in sorted(row.items())]
    gram = [[L[a], L[b], rat_str(v)] for a, row in enumerate(alg.gram) for b, v in enumerate(row) if v]
    out = {"type": "explicit", "name": alg.name, "labels": L, "parities": list(alg.parities),
           "table": table, "gram": gram}
    if alg.identity is not None:
        out["identity"] = [[L[a], rat_str(v)] for a, v in sorted(alg.identity.items())]
    if alg.overflow:
        out["overflow"] = [[L[a], L[b]] for a, b in sorted(alg.overflow)]
    if P:
        out["sizes"] = list(P.sizes)
        out["window"] = P.window
    return out


# -- pairs of products ----------------------------------------------------------------

def _key(x, where) -> Tuple[int, int]:
    if not isinstance(x, list) or len(x) != 2:
        raise DocumentError(f"{where}: expected [parity, j]")
    i, j = _int(x[0], where), _int(x[1], where, True)
    if i not in (0, 1):
        raise DocumentError(f"{where}: parity must be 0 or 1")
    return i, j


def build_pair(doc: Dict, where: str = "pair") -> PairOfProducts:
    if "from" in doc:
        P = build_algebra(doc["from"], f"{where}.from")
        if not isinstance(P, PolarizedSpec):
            raise DocumentError(f"{where}.from: expected a polarized algebra")
        pair = extract_pair(P)
    else:
        sizes = tuple(_int(s, f"{where}.sizes") for s in _get(doc, "sizes", where))
        if len(sizes) != 2:
            raise DocumentError(f"{where}.sizes: expected [n0, n1]")
        consts = {}
        for side in ("plus", "minus"):
            table = {}
            for k, entry in enumerate(doc.get(side, [])):
                w = f"{where}.{side}[{k}]"
                if not isinstance(entry, list) or len(entry) != 4:
                    raise DocumentError(f"{w}: expected [k1, k2, k3, value]")
                k1, k2, k3 = (_key(e, w) for e in entry[:3])
                for i, j in (k1, k2, k3):
                    if j > sizes[i]:
                        raise DocumentError(f"{w}: index ({i},{j}) exceeds sizes")
                v = rational(entry[3], w)
                if v:
                    table.setdefault((k1, k2), {})[k3] = v
            consts[side] = table
        over = {s: frozenset((_key(a, where), _key(b, where)) for a, b in doc.get(f"{s}_overflow", []))
                for s in ("plus", "minus")}
        pair = PairOfProducts(sizes, consts["plus"], consts["minus"], over["plus"], over["minus"],
                              _int(doc.get("window", max(sizes) or 1), f"{where}.window", True), str(doc.get("name", "")))
    pert = doc.get("perturb")
    if pert is not None:
        side = pert.get("side", "plus")
        if side not in ("plus", "minus"):
            raise DocumentError(f"{where}.perturb.side must be plus or minus")
        k1, k2, k3 = (_key(_get(pert, k, f"{where}.perturb"), f"{where}.perturb.{k}") for k in ("k1", "k2", "k3"))
        table = {k: dict(v) for k, v in getattr(pair, side).items()}
        row = table.setdefault((k1, k2), {})
        row[k3] = row.get(k3, Fraction(0)) + rational(pert.get("delta", 1), f"{where}.perturb.delta")
        fields = {"plus": pair.plus, "minus": pair.minus, side: table}
        pair = PairOfProducts(pair.sizes, fields["plus"], fields["minus"], pair.plus_overflow, pair.minus_overflow,
                              pair.window, (pair.name or "pair") + "-perturbed")
    return pair


def pair_to_doc(pair: PairOfProducts) -> Dict:
    def enc(table):
        return [[list(k1), list(k2), list(k3), rat_str(v)] for (k1, k2), row in sorted(table.items())
                for k3, v in sorted(row.items())]
    return {"kind": "pair-of-products", "name": pair.name, "sizes": list(pair.sizes), "window": pair.window,
            "plus": enc(pair.plus), "minus": enc(pair.minus),
            "plus_overflow": [[list(a), list(b)] for a, b in sorted(pair.plus_overflow)],
            "minus_overflow": [[list(a), list(b)] for a, b in sorted(pair.minus_overflow)]}


# -- operator setups ------------------------------------------------------------

def build_l4(doc: Dict, where: str = "L4"):
    from .poisson import make_loperator

    P = build_algebra(_get(doc, "polarized", where), f"{where}.polarized")
    if not isinstance(P, PolarizedSpec):
        raise DocumentError(f"{where}.polarized: expected a polarized algebra")

    def elem(name):
        out = {}
        for k, e in enumerate(doc.get(name, [])):
            w = f"{where}.{name}[{k}]"
            if not isinstance(e, list) or len(e) != 3:
                raise DocumentError(f"{w}: expected [parity, j, value]")
            out[(_int(e[0], w), _int(e[1], w))] = rational(e[2], w)
        return out

    variant = doc.get("variant", "minus")
    if variant not in ("minus", "plus"):
        raise DocumentError(f"{where}.variant must be 'minus' or 'plus'")
    return make_loperator(P, _int(_get(doc, "iota", where), f"{where}.iota", True), elem("L0"), elem("kappa"),
                          name=str(doc.get("name", P.name)), variant=variant)


def build_l5(doc: Dict, where: str = "L5"):
    from .pdo import make_lax

    A = build_algebra(_get(doc, "algebra", where), f"{where}.algebra")
    if isinstance(A, PolarizedSpec):
        raise DocumentError(f"{where}.algebra: expected a finite-dimensional algebra")
    L0 = {}
    for k, e in enumerate(_get(doc, "L0", where)):
        w = f"{where}.L0[{k}]"
        if not isinstance(e, list) or len(e) != 3:
            raise DocumentError(f"{w}: expected [order, label, value]")
        L0.setdefault(_int(e[0], w), {})[resolve_label(A, e[1], w)] = rational(e[2], w)
    kappa = None
    if doc.get("kappa") is not None:
        kappa = {resolve_label(A, e[0], f"{where}.kappa"): rational(e[1], f"{where}.kappa") for e in doc["kappa"]}
    slots = None
    if doc.get("slots") is not None:
        slots = [(resolve_label(A, e[0], f"{where}.slots"), _int(e[1], f"{where}.slots")) for e in doc["slots"]]
    h2 = doc.get("h2_sign", -1)
    if h2 not in (1, -1):
        raise DocumentError(f"{where}.h2_sign must be 1 or -1")
    return make_lax(A, _int(_get(doc, "iota", where), f"{where}.iota"), L0, kappa, slots,
                    name=str(doc.get("name", A.name)), h2_sign=h2)


# -- top level ---------------------------------------------------------------------

BUILTIN_PREFIX = "builtin:"


def fixture_names():
    return sorted(p.name[:-5] for p in resources.files("superpair").joinpath("fixtures").iterdir()
                  if p.name.endswith(".json"))


def fixture_path(name: str):
    """Path of a shipped fixture, e.g. ``fixture_path("laurent-8")``."""
    p = resources.files("superpair").joinpath("fixtures", f"{name}.json")
    if not p.is_file():
        raise DocumentError(f"no built-in fixture {name!r}; available: {', '.join(fixture_names())}")
    return p


def load_document(path) -> Tuple[Dict, str]:
    """Parse a document file (or ``builtin:NAME``); returns ``(document, sha256 digest)``."""
    if isinstance(path, str) and path.startswith(BUILTIN_PREFIX):
        path = fixture_path(path[len(BUILTIN_PREFIX):])
    try:
        raw = path.read_bytes() if hasattr(path, "read_bytes") else Path(path).read_bytes()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DocumentError(f"{path}: invalid JSON ({e})") from None
    validate(doc)
    return doc, hashlib.sha256(raw).hexdigest()


def validate(doc) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown or missing kind {kind!r}; expected one of {', '.join(KINDS)}")
    required = {"algebra": ("algebra",), "polarized": ("polarized",), "L4": ("polarized", "iota", "L0"),
                "L5": ("algebra", "iota", "L0"), "pair-of-products": ()}[kind]
    for key in required:
        _get(doc, key, kind)
    if kind == "pair-of-products" and "from" not in doc and "sizes" not in doc:
        raise DocumentError("pair-of-products needs either 'from' or 'sizes'")


def build(doc: Dict):
    """Materialize the object a document describes."""
    kind = doc["kind"]
    try:
        if kind == "algebra":
            return build_algebra(doc["algebra"])
        if kind == "polarized":
            P = build_algebra(doc["polarized"], "polarized")
            if not isinstance(P, PolarizedSpec):
                raise DocumentError("polarized: construct is not polarized")
            return P
        if kind == "pair-of-products":
            return build_pair(doc)
        if kind == "L4":
            return build_l4(doc)
        return build_l5(doc)
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise DocumentError(f"{kind}: invalid document ({e})") from None
