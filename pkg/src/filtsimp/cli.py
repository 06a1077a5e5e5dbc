"""Command line entry point: ``filtsimp <subcommand> ...``.

Exit status: 0 success, 1 failed ``verify`` check, 2 bad input, 3 a brute
force cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from pathlib import Path
from typing import Optional

from . import fixtures
from .codensity import codensity_matrix
from .complex import DEFAULT_CAP_BRUTE, FilteredComplex
from .errors import FeasibilityError, InputError
from .fileio import format_codensity, format_diagrams, format_filtration, load_distance_csv, load_filtration
from .interleaving import DEFAULT_CAP_GH, DEFAULT_CAP_PAIRS, dgh_exact, dif_exact, dif_strong
from .persistence import barcodes, bottleneck
from .simplify import core, greedy_simplify
from .transforms import clique_completion, single_vertex_extension, tail_transform, vietoris_rips

TOL = 1e-9
# covers every self-map of a 6-vertex complex; library default is smaller
CLI_CAP_MORPHISMS = 6**6


def _jsonable(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return _jsonable(x.item())
    return x


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text)
        except OSError as e:
            raise InputError(f"cannot write {path}: {e.strerror}") from None


def _vertex_index(c: FilteredComplex, label: int) -> int:
    try:
        return list(c.labels).index(label)
    except ValueError:
        raise InputError(f"vertex {label} not in complex (vertices: {list(c.labels)})") from None


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return v


def _preprocess(c: FilteredComplex, args) -> FilteredComplex:
    if getattr(args, "clique", None) is not None:
        c = clique_completion(c, args.clique)
    if getattr(args, "tail", None) is not None:
        c = tail_transform(c, args.tail)
    return c


# -- subcommands ---------------------------------------------------------------


def cmd_rips(args) -> int:
    d = load_distance_csv(args.input)
    _emit(format_filtration(vietoris_rips(d, args.maxdim)), args.output)
    return 0


def cmd_transform(args) -> int:
    if (args.clique is None) == (args.tail is None):
        raise InputError("transform needs exactly one of --clique k or --tail k")
    c = _preprocess(load_filtration(args.input), args)
    _emit(format_filtration(c), args.output)
    return 0


def cmd_extend(args) -> int:
    c = load_filtration(args.input)
    w = _vertex_index(c, args.vertex)
    _emit(format_filtration(single_vertex_extension(c, w, args.r, cap=args.cap_brute)), args.output)
    return 0


def cmd_codensity(args) -> int:
    c = load_filtration(args.input)
    _emit(format_codensity(codensity_matrix(c, args.mode, args.cap_brute)), args.output)
    return 0


def cmd_simplify(args) -> int:
    c = _preprocess(load_filtration(args.input), args)
    out, log = greedy_simplify(c, args.remove, recompute=args.recompute, mode=args.mode, cap=args.cap_brute)
    _emit(format_filtration(out), args.output)
    if args.log:
        _emit(_dump(log.to_json()), args.log)
    return 0


def cmd_core(args) -> int:
    c = load_filtration(args.input)
    rng = random.Random(args.seed) if args.seed is not None else None
    out, log = core(c, mode=args.mode, cap=args.cap_brute, rng=rng)
    _emit(format_filtration(out), args.output)
    if args.log:
        _emit(_dump(log.to_json()), args.log)
    return 0


def cmd_ph(args) -> int:
    c = load_filtration(args.input)
    _emit(format_diagrams(barcodes(c, args.maxdim)), args.output)
    return 0


def cmd_bottleneck(args) -> int:
    a, b = load_filtration(args.a), load_filtration(args.b)
    da = barcodes(a, args.dim)[args.dim]
    db = barcodes(b, args.dim)[args.dim]
    _emit(_dump({"dim": args.dim, "bottleneck": bottleneck(da, db)}), args.output)
    return 0


def _distance(kind: str, a, b, args):
    if kind == "gh":
        return dgh_exact(a, b, cap=args.cap_gh)
    fn = dif_exact if kind == "if" else dif_strong
    return fn(a, b, cap_morphisms=args.cap_morphisms, cap_pairs=args.cap_pairs)


def cmd_dist(args) -> int:
    a, b = load_filtration(args.a), load_filtration(args.b)
    r = _distance(args.kind, a, b, args)
    _emit(_dump({"kind": args.kind, "value": r.value, "witness": r.witness, "stats": r.stats}), args.output)
    return 0


def cmd_verify(args) -> int:
    a, b = load_filtration(args.a), load_filtration(args.b)
    gh = dgh_exact(a, b, cap=args.cap_gh)
    dif = dif_exact(a, b, cap_morphisms=args.cap_morphisms, cap_pairs=args.cap_pairs)
    da, db = barcodes(a, args.maxdim), barcodes(b, args.maxdim)
    checks = []
    bn = {}
    for k in range(args.maxdim + 1):
        v = bottleneck(da[k], db[k])
        bn[str(k)] = v
        checks.append({"check": f"bottleneck_{k} <= dIF", "ok": v <= dif.value + TOL})
    checks.append({"check": "dIF <= 2 dGH", "ok": dif.value <= 2 * gh.value + TOL})
    ok = all(ch["ok"] for ch in checks)
    report = {
        "ok": ok,
        "dgh": gh.value,
        "dif": dif.value,
        "bottleneck": bn,
        "checks": checks,
        "witness": {"gh": gh.witness, "if": dif.witness},
    }
    _emit(_dump(report), args.output)
    return 0 if ok else 1


def cmd_fixture(args) -> int:
    if args.name == "random":
        rng = random.Random(args.seed)
        c = fixtures.random_complex(args.n, rng)
    elif args.name == "random-rips":
        rng = random.Random(args.seed)
        c = fixtures.random_vr(args.n, rng, max_dim=min(2, args.n - 1))
    else:
        try:
            c = fixtures.named(args.name, args.n)
        except KeyError:
            raise InputError(f"unknown fixture {args.name!r}") from None
    _emit(format_filtration(c), args.output)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="filtsimp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--cap-brute", type=_positive, default=DEFAULT_CAP_BRUTE, help="max vertices for 2**n scans")
    caps.add_argument("--cap-morphisms", type=_positive, default=CLI_CAP_MORPHISMS)
    caps.add_argument("--cap-pairs", type=_positive, default=DEFAULT_CAP_PAIRS)
    caps.add_argument("--cap-gh", type=_positive, default=DEFAULT_CAP_GH, help="max total vertices for dGH")
    caps.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    def mode_arg(sp):
        sp.add_argument("--mode", default="auto", type=lambda s: int(s) if s.isdigit() else s,
                        help="codensity mode: auto, brute, or an integer k")

    s = sub.add_parser("rips", parents=[caps], help="Rips filtration from a distance CSV")
    s.add_argument("input")
    s.add_argument("--maxdim", type=int, default=2, help="top simplex dimension")
    s.set_defaults(func=cmd_rips)

    s = sub.add_parser("transform", parents=[caps], help="clique completion or tail transform")
    s.add_argument("input")
    s.add_argument("--clique", type=int)
    s.add_argument("--tail", type=int)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("extend", parents=[caps], help="add a shifted copy of a vertex")
    s.add_argument("input")
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--r", type=float, required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("codensity", parents=[caps], help="quasi-distance matrix as CSV")
    s.add_argument("input")
    mode_arg(s)
    s.set_defaults(func=cmd_codensity)

    s = sub.add_parser("simplify", parents=[caps], help="greedy vertex removal")
    s.add_argument("input")
    s.add_argument("--remove", type=int, required=True)
    s.add_argument("--recompute", action="store_true", help="recompute codensities after each removal")
    s.add_argument("--tail", type=int)
    s.add_argument("--clique", type=int)
    s.add_argument("--log", help="JSON log path")
    mode_arg(s)
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("core", parents=[caps], help="strip zero-codensity vertices")
    s.add_argument("input")
    s.add_argument("--log")
    s.add_argument("--seed", type=int, help="randomize the removal order")
    mode_arg(s)
    s.set_defaults(func=cmd_core)

    s = sub.add_parser("ph", parents=[caps], help="persistence diagrams")
    s.add_argument("input")
    s.add_argument("--maxdim", type=int, default=1)
    s.set_defaults(func=cmd_ph)

    s = sub.add_parser("bottleneck", parents=[caps], help="bottleneck distance between two filtrations")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--dim", type=int, default=0)
    s.set_defaults(func=cmd_bottleneck)

    s = sub.add_parser("dist", parents=[caps], help="exact GH or interleaving distance")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--kind", choices=["gh", "if", "if-strong"], default="if")
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("verify", parents=[caps], help="check bottleneck <= dIF <= 2 dGH")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--maxdim", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fixture", parents=[caps], help="write a named or random test complex")
    s.add_argument("name", help="simplex-star, path-simplex, constant, hollow-triangle, m3, sq4, random, random-rips")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FeasibilityError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
