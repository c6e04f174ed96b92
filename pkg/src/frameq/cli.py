"""Command-line interface.

Every subcommand reads JSON files (0-based indices), calls one library
function and prints its serialized result.  Exit codes:

    0  ok / equivalent
    1  not equivalent
    2  malformed or invalid input
    3  size mismatch between inputs
    4  missing cycle product, or an index out of range
    5  unknown (search budget exhausted)

``--format pretty`` prints a human-readable view with 1-based indices.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import formats
from .core import Frame, Tolerance, gram
from .equivalence import (
    DEFAULT_BUDGET,
    projective_equiv,
    projective_equiv_reindex,
    reconstruct_from_products,
    unitary_verdict,
)
from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FrameqError,
    InconsistentModulus,
    InvalidInput,
    MissingCycleProduct,
    NotInSpan,
    NotPSD,
    NotPSDWarning,
    NotRealEquiangular,
    SearchBudgetExceeded,
    SizeMismatch,
    ZeroVector,
)
from .graph import build_frame_graph
from .harmonic import CSV_HEADER, AbelianGroup, census, harmonic_frame
from .invariants import determining_set, triangle_determining_set, triple_product_set, tuple_product_set
from .selfcheck import selftest
from .similarity import projectively_similar, similar

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INVALID = 2
EXIT_SIZE = 3
EXIT_MISSING = 4
EXIT_UNKNOWN = 5


class UsageError(Exception):
    """Bad command-line values; mapped to exit code 2."""


# ----------------------------------------------------------------- parsing


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from exc


def _load_gram(path: str):
    obj = formats.load_frame_or_gram(_read_json(path))
    return gram(obj) if isinstance(obj, Frame) else obj


def _load_frame(path: str) -> Frame:
    data = _read_json(path)
    if not isinstance(data, dict) or "vectors" not in data:
        raise UsageError(f"{path}: a frame file (with 'vectors') is required")
    return formats.frame_from_json(data)


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _int_range(text: str) -> list:
    """``"8"``, ``"2..15"`` or ``"2,3,5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}") from exc
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def _phase_arg(text: str):
    """``j,k=re,im`` (or ``j,k=re``) -> ((j, k), complex)."""
    try:
        edge, value = text.split("=")
        j, k = (int(x) for x in edge.split(","))
        parts = [float(x) for x in value.split(",")]
        z = complex(parts[0], parts[1] if len(parts) > 1 else 0.0)
    except ValueError as exc:
        raise UsageError(f"bad --phase {text!r}; expected j,k=re,im") from exc
    return (j, k), z


def _tree_arg(text: str) -> list:
    """``"0-2,2-1,1-3"`` -> [(0, 2), (2, 1), (1, 3)]."""
    edges = []
    for part in text.split(","):
        try:
            a, b = part.strip().split("-")
            edges.append((int(a), int(b)))
        except ValueError as exc:
            raise UsageError(f"bad --tree edge {part!r}; expected j-k") from exc
    return edges


def _group_arg(text: str) -> AbelianGroup:
    try:
        factors = [int(x) for x in text.lower().split("x")]
    except ValueError as exc:
        raise UsageError(f"bad --group {text!r}; expected n or n1xn2x...") from exc
    return AbelianGroup(factors)


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


# ------------------------------------------------------------------ output


def _fmt_complex(z) -> str:
    z = complex(z)
    if abs(z.imag) < 5e-13:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _pretty(kind: str, data: dict) -> str:
    lines = ["(indices are 1-based)"]
    if kind == "gram":
        for row in data["entries"]:
            lines.append("  ".join(f"{_fmt_complex(complex(*e)):>18}" for e in row))
    elif kind == "frame":
        for j, v in enumerate(data["vectors"], 1):
            lines.append(f"v{j} = (" + ", ".join(_fmt_complex(complex(*e)) for e in v) + ")")
    elif kind == "graph":
        lines.append(f"{data['n']} vertices, {len(data['edges'])} edges")
        lines.append(" ".join(f"{a + 1}-{b + 1}" for a, b in data["edges"]))
    elif kind == "products":
        for j, x in enumerate(data["norms"], 1):
            lines.append(f"<v{j},v{j}> = {x:.6g}")
        for c in data["cycles"]:
            idx = ",".join(str(j + 1) for j in c["indices"])
            lines.append(f"D({idx}) = {_fmt_complex(complex(*c['value']))}")
    elif kind == "verdict":
        eq = data["equivalent"]
        lines.append("equivalent" if eq else ("unknown" if eq is None else "not equivalent"))
        if "permutation" in data:
            lines.append("reindexing: " + " ".join(f"{a + 1}->{p + 1}" for a, p in enumerate(data["permutation"])))
        if "phases" in data:
            lines.append("phases: " + ", ".join(f"c{j}={_fmt_complex(complex(*c))}" for j, c in enumerate(data["phases"], 1)))
        w = data.get("witness")
        if w:
            if "indices" in w:
                lines.append(f"witness ({w['kind']}): cycle " + ",".join(str(j + 1) for j in w["indices"]))
            elif "entry" in w:
                lines.append(f"witness ({w['kind']}): entry ({w['entry'][0] + 1},{w['entry'][1] + 1})")
            else:
                lines.append(f"witness: {json.dumps(w)}")
    else:
        lines.append(formats.dumps(data))
    return "\n".join(lines)


def _emit(args, kind: str, data: dict) -> None:
    fmt = args.format or "json"
    if fmt == "csv":
        raise UsageError("--format csv is only available for 'harmonic census'")
    print(_pretty(kind, data) if fmt == "pretty" else formats.dumps(data))


# ---------------------------------------------------------------- commands


def cmd_gram(args) -> int:
    _emit(args, "gram", formats.gram_to_json(gram(_load_frame(args.frame))))
    return EXIT_OK


def cmd_products(args) -> int:
    G = _load_gram(args.file)
    if args.tuple is not None:
        p = tuple_product_set(G, _int_list(args.tuple))
    elif args.triples:
        p = triple_product_set(G)
    else:
        p = determining_set(G, args.tol)
    _emit(args, "products", formats.products_to_json(p))
    return EXIT_OK


def cmd_detset(args) -> int:
    G = _load_gram(args.file)
    if args.triangles:
        p = triangle_determining_set(G, args.tol)
        if p is None:
            raise InvalidInput("the frame graph has no triangle basis")
    else:
        p = determining_set(G, args.tol)
    _emit(args, "products", formats.products_to_json(p))
    return EXIT_OK


def cmd_graph(args) -> int:
    _emit(args, "graph", formats.graph_to_json(build_frame_graph(_load_gram(args.file), args.tol)))
    return EXIT_OK


def _verdict_exit(args, data: dict) -> int:
    _emit(args, "verdict", data)
    eq = data["equivalent"]
    return EXIT_UNKNOWN if eq is None else (EXIT_OK if eq else EXIT_NOT_EQUIVALENT)


def _similar_verdict(args) -> dict:
    f1, f2 = _load_frame(args.a), _load_frame(args.b)
    if args.projective:
        return projectively_similar(f1, f2, args.tol).to_dict()
    return {"equivalent": similar(f1, f2, args.tol), "status": "decided"}


def cmd_equiv(args) -> int:
    if args.similar:
        if args.reindex:
            raise UsageError("--similar cannot be combined with --reindex")
        return _verdict_exit(args, _similar_verdict(args))
    g1, g2 = _load_gram(args.a), _load_gram(args.b)
    if args.reindex:
        try:
            v = projective_equiv_reindex(g1, g2, args.tol, args.budget, unitary=not args.projective)
        except SearchBudgetExceeded as exc:
            data = {"equivalent": None, "status": "unknown", "witness": {"kind": "budget", "nodes": exc.nodes}}
            return _verdict_exit(args, data)
    elif args.projective:
        v = projective_equiv(g1, g2, args.tol)
    else:
        v = unitary_verdict(g1, g2, args.tol)
    return _verdict_exit(args, v.to_dict())


def cmd_similar(args) -> int:
    return _verdict_exit(args, _similar_verdict(args))


def cmd_reconstruct(args) -> int:
    p = formats.products_from_json(_read_json(args.products))
    free = dict(_phase_arg(t) for t in args.phase)
    forest = _tree_arg(args.tree) if args.tree else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NotPSDWarning)
        G = reconstruct_from_products(p, free, args.tol, forest=forest)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(args, "gram", formats.gram_to_json(G))
    return EXIT_OK


def cmd_harmonic_gen(args) -> int:
    group = _group_arg(args.group)
    _emit(args, "frame", formats.frame_to_json(harmonic_frame(group, _int_list(args.subset))))
    return EXIT_OK


def cmd_harmonic_census(args) -> int:
    fmt = args.format or "csv"
    if fmt == "csv":
        print(CSV_HEADER, flush=True)
    for n in _int_range(args.n):
        for d in _int_range(args.d):
            if not 1 <= d <= n:
                continue
            row = census(n, d, args.mode, args.budget, args.tol)
            if fmt == "csv":
                print(row.csv(), flush=True)
            elif fmt == "json":
                print(formats.dumps(row.to_dict()), flush=True)
            else:
                print("  ".join(f"{k}={v}" for k, v in row.to_dict().items()), flush=True)
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = selftest(args.seed, args.tol)
    _emit(args, "selftest", report)
    return EXIT_OK if report["failed"] == 0 else EXIT_NOT_EQUIVALENT


# ------------------------------------------------------------------ driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-zero", type=_positive_float, default=None, help="absolute zero threshold (default 1e-9)")
    common.add_argument("--tol-match", type=_positive_float, default=None, help="relative match tolerance (default 1e-8)")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET, help="node budget for reindexing searches")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized self-tests")

    parser = argparse.ArgumentParser(
        prog="frameq",
        description="Unitary and projective unitary equivalence of finite frames. File indices are 0-based.",
        epilog="exit codes: 0 ok/equivalent, 1 not equivalent, 2 invalid input, 3 size mismatch, "
        "4 missing cycle product or index out of range, 5 unknown (budget exhausted)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of a frame")
    p.add_argument("frame")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("products", parents=[common], help="m-products in the products schema")
    p.add_argument("file", help="frame or Gram JSON")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--detset", action="store_true", help="fundamental-cycle determining set (default)")
    mode.add_argument("--triples", action="store_true", help="all distinct-index triple products")
    mode.add_argument("--tuple", metavar="J1,...,JM", help="one m-product (0-based indices)")
    p.set_defaults(func=cmd_products)

    p = sub.add_parser("detset", parents=[common], help="determining set")
    p.add_argument("file")
    p.add_argument("--triangles", action="store_true", help="use a triangle basis (2- and 3-products only)")
    p.set_defaults(func=cmd_detset)

    p = sub.add_parser("graph", parents=[common], help="frame graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two frames or Gramians")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--projective", action="store_true", help="allow per-vector unit scalars")
    p.add_argument("--reindex", action="store_true", help="allow reordering the second input")
    p.add_argument("--similar", action="store_true", help="similarity (invertible map) instead of unitary")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("similar", parents=[common], help="(projective) similarity of two frames")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--projective", action="store_true")
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("reconstruct", parents=[common], help="Gram matrix from a products file")
    p.add_argument("products")
    p.add_argument("--phase", action="append", default=[], metavar="J,K=RE,IM", help="phase of <w_j, w_k> on a tree edge")
    p.add_argument("--tree", metavar="J-K,...", help="spanning tree edges (default: breadth-first)")
    p.set_defaults(func=cmd_reconstruct)

    h = sub.add_parser("harmonic", help="harmonic frames")
    hsub = h.add_subparsers(dest="harmonic_command", required=True)
    p = hsub.add_parser("gen", parents=[common], help="harmonic frame of a group and subset")
    p.add_argument("--group", required=True, help="n or n1xn2x...")
    p.add_argument("--subset", required=True, help="comma-separated element indices (mixed radix, last factor fastest)")
    p.set_defaults(func=cmd_harmonic_gen)
    p = hsub.add_parser("census", parents=[common], help="orbit counts and exact class counts")
    p.add_argument("--n", required=True, help="e.g. 8, 2..15 or 5,7")
    p.add_argument("--d", required=True)
    p.add_argument("--mode", choices=("orbits", "exact"), default="orbits")
    p.set_defaults(func=cmd_harmonic_census)

    p = sub.add_parser("selftest", parents=[common], help="randomized planted-equivalence checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def _tolerance(args) -> Tolerance:
    kw = {}
    if args.tol_zero is not None:
        kw["abs_zero"] = args.tol_zero
    if args.tol_match is not None:
        kw["rel_match"] = args.tol_match
    return Tolerance(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    np.set_printoptions(precision=6)
    try:
        args.tol = _tolerance(args)
        return args.func(args)
    except SizeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (MissingCycleProduct, NotInSpan, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (
        UsageError,
        InvalidInput,
        DimensionMismatch,
        NotPSD,
        ZeroVector,
        InconsistentModulus,
        NotRealEquiangular,
        DivisionByZero,
        FrameqError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
