"""Command-line entry point: ``superpair {verify,superpair,hierarchy,build} FILE``.

Exit status: 0 when every check passes, 1 when a check fails (or the library
rejects the input mathematically), 2 when the document cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .document import DocumentError, algebra_to_doc, build, load_document
from .errors import SuperpairError
from .reports import Check, Report

DEFAULT_LAMBDAS = ("0", "1", "-1", "2")
REPORT_DIR_ENV = "SUPERPAIR_REPORT_DIR"


def _error_check(name: str, err: Exception) -> Check:
    witness = getattr(err, "witness", None)
    return Check(name, False, witness, detail=f"{type(err).__name__}: {err}")


def _timed(rep: Report, fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    if isinstance(out, Report):
        for c in out.checks:
            if c.seconds is None:
                c.seconds = (time.perf_counter() - t) / max(len(out.checks), 1)
        rep.extend(out)
    return out


# -- commands -----------------------------------------------------------------

def run_verify(doc, args) -> Report:
    from .graded_algebra import verify_algebra
    from .polarization import (PairOfProducts, PolarizedSpec, build_from_pair, compute_filtration,
                               verify_compatibility, verify_filtration_products, verify_polarized)

    kind = doc["kind"]
    if kind == "L4":
        return run_superpair(doc, args)
    if kind == "L5":
        return run_hierarchy(doc, args)
    rep = Report(f"verify {kind}")
    obj = build(doc)
    if isinstance(obj, PairOfProducts):
        _timed(rep, verify_compatibility, obj)
        if rep.passed:
            P = build_from_pair(obj, check=False)
            _timed(rep, verify_polarized, P)
    elif isinstance(obj, PolarizedSpec):
        _timed(rep, verify_polarized, obj)
        if doc.get("filtration", True):
            T = compute_filtration(obj)
            rep.extra["filtration"] = T.to_dict()
            _timed(rep, verify_filtration_products, obj, T)
    else:
        _timed(rep, verify_algebra, obj)
    rep.extra["object"] = getattr(obj, "name", "")
    return rep


def _lambdas(args, doc) -> List[Fraction]:
    raw = args.lambdas if getattr(args, "lambdas", None) else None
    if raw is not None:
        items = [x for x in raw.split(",") if x.strip()]
    else:
        items = [str(x) for x in doc.get("lambdas", [])]
    if not items:
        items = list(DEFAULT_LAMBDAS)
    try:
        return [Fraction(x.strip()) for x in items]
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"cannot parse lambda list {raw!r}") from None


def _seed_samples(args, doc, default_samples):
    seed = args.seed if getattr(args, "seed", None) is not None else doc.get("seed", 0)
    n = args.samples if getattr(args, "samples", None) is not None else doc.get("samples", default_samples)
    if not isinstance(seed, int) or not isinstance(n, int) or n <= 0:
        raise DocumentError("seed and samples must be integers, samples positive")
    return seed, n


def run_superpair(doc, args) -> Report:
    from .poisson import consistency_check, sample_polys, verify_superpair

    if doc["kind"] != "L4":
        raise DocumentError("superpair needs an L4 document")
    Lop = build(doc)
    lams = _lambdas(args, doc)
    seed, n = _seed_samples(args, doc, 25)
    samples = sample_polys(Lop.variables(), n, seed)
    rep = Report(f"superpair {Lop.name}")
    _timed(rep, verify_superpair, Lop, samples, lams)
    _timed(rep, consistency_check, Lop, samples, lams)
    rep.extra.update({"lambdas": [str(x) for x in lams], "seed": seed, "samples": n, "variant": Lop.variant})
    return rep


def _pairs(text, where):
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise DocumentError(f"{where}: expected integers m,n") from None
    if len(vals) != 2 or min(vals) < 1:
        raise DocumentError(f"{where}: expected two positive integers m,n")
    return tuple(vals)


def run_hierarchy(doc, args) -> Report:
    from .pdo import (conservation_check, sample_densities, verify_hamiltonian_superpair,
                      zero_curvature_residual)

    if doc["kind"] != "L5":
        raise DocumentError("hierarchy needs an L5 document")
    lax = build(doc)
    depth = args.depth if getattr(args, "depth", None) is not None else doc.get("depth")
    if depth is not None and (not isinstance(depth, int) or depth <= 0):
        raise DocumentError("depth must be a positive integer")
    if getattr(args, "flows", None):
        pair = _pairs(args.flows, "--flows")
        cons, zc = [pair], [pair]
    else:
        cons = [tuple(p) for p in doc.get("conservation", [])]
        zc = [tuple(p) for p in doc.get("zero_curvature", [])]
    rep = Report(f"hierarchy {lax.name}")
    floors = {}
    for m, n in cons:
        try:
            sub = _timed(rep, conservation_check, lax, m, n, depth=depth)
            floors[f"conserved[m={m},n={n}]"] = sub.extra.get("floor")
        except SuperpairError as e:
            rep.add(_error_check(f"conserved[m={m},n={n}]", e))
    for m, n in zc:
        try:
            res = zero_curvature_residual(lax, m, n, depth)
            rep.add(Check(f"zero_curvature[{m},{n}]", not res.coeffs, None if not res.coeffs else repr(res), checked=1))
        except SuperpairError as e:
            rep.add(_error_check(f"zero_curvature[{m},{n}]", e))
    if doc.get("hamiltonian", True):
        lams = _lambdas(args, doc)
        seed, n = _seed_samples(args, doc, 6)
        _timed(rep, verify_hamiltonian_superpair, lax, sample_densities(lax, n, seed), lams)
        rep.extra.update({"lambdas": [str(x) for x in lams], "seed": seed, "samples": n})
    rep.extra["floors"] = floors
    rep.extra["depth"] = depth if depth is not None else "auto"
    return rep


def run_build(doc, args):
    from .polarization import build_from_pair

    if doc["kind"] != "pair-of-products":
        raise DocumentError("build needs a pair-of-products document")
    pair = build(doc)
    P = build_from_pair(pair, check=True)
    return {"kind": "polarized", "name": P.name, "polarized": algebra_to_doc(P)}


# -- plumbing --------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superpair", description="Build and verify polarized superalgebras, "
                                "Poisson superpairs and Lax hierarchies from JSON documents.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="JSON document, or builtin:NAME for a shipped fixture")
        sp.add_argument("--report", help="write the machine-readable report here")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
        sp.add_argument("--quiet", action="store_true", help="only print the summary line")

    common(sub.add_parser("verify", help="run the checks appropriate to the document kind"))
    sp = sub.add_parser("superpair", help="Poisson superpair checks for an L4 document")
    common(sp)
    sp.add_argument("--lambdas", help="comma-separated rationals (default 0,1,-1,2)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp = sub.add_parser("hierarchy", help="conservation, zero curvature and Hamiltonian checks for an L5 document")
    common(sp)
    sp.add_argument("--flows", help="a single pair m,n")
    sp.add_argument("--depth", type=int, help="fractional-root depth (default: floor driven)")
    sp.add_argument("--lambdas")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp = sub.add_parser("build", help="reconstruct a polarized algebra from a pair of products")
    sp.add_argument("file")
    sp.add_argument("--output", help="write the polarized document here instead of stdout")
    return p


def _report_path(args, command: str) -> Optional[Path]:
    if getattr(args, "report", None):
        return Path(args.report)
    d = os.environ.get(REPORT_DIR_ENV)
    if d:
        return Path(d) / f"{_stem(args.file)}.{command}.json"
    return None


def _stem(name: str) -> str:
    return name.split(":", 1)[1] if name.startswith("builtin:") else Path(name).stem


def _emit(rep: Report, args, digest: str, code: int) -> None:
    payload = {"artifact": "superpair", "version": __version__, "command": args.command,
               "input": _stem(args.file), "digest": digest, "exit": code,
               "report": rep.to_dict(getattr(args, "timings", False))}
    path = _report_path(args, args.command)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if not getattr(args, "quiet", False):
        for line in rep.lines():
            print(line)
    print(f"{'PASS' if code == 0 else 'FAIL'}: {rep.title} ({len(rep.checks)} checks, "
          f"{len(rep.failures())} failed)")


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        doc, digest = load_document(args.file)
        if args.command == "build":
            try:
                out = run_build(doc, args)
            except DocumentError:
                raise
            except SuperpairError as e:
                print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
                if getattr(e, "witness", None) is not None:
                    print(f"witness: {json.dumps(e.witness, default=str)}", file=sys.stderr)
                return 1
            text = json.dumps(out, indent=2, sort_keys=True) + "\n"
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return 0
        runner = {"verify": run_verify, "superpair": run_superpair, "hierarchy": run_hierarchy}[args.command]
        try:
            rep = runner(doc, args)
        except DocumentError:
            raise
        except SuperpairError as e:
            rep = Report(f"{args.command} {doc['kind']}")
            rep.add(_error_check("construction", e))
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    code = 0 if rep.passed else 1
    _emit(rep, args, digest, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
