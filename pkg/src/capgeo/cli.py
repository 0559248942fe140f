"""``capgeo`` command line.

Exit status is 0 on success, 2 for usage or input errors and 3 when the
input is well formed but the operation is undefined on it.
"""
from __future__ import annotations

import argparse
import json
import string
import sys
from pathlib import Path

from . import magma, mpab, quasigroup, simplex, toric
from .errors import DomainError, InputError

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


# -- subcommands ------------------------------------------------------------------


def cmd_segre_cube(args) -> int:
    diagram = simplex.hypercube_diagram(args.n)
    if args.dot:
        _write(args.dot, simplex.emit_dot(diagram))
    print(f"{len(diagram.vertices)} vertices, {len(diagram.edges)} edges")
    return EXIT_OK


def cmd_distort(args) -> int:
    square = quasigroup.read_latin(_read(args.latin))
    word = magma.parse_word(args.word, normalize=args.normalize)
    plan = [p.strip() for p in args.plan.split(",")]
    print(magma.format_word(magma.distort(word, plan, square)))
    return EXIT_OK


def cmd_dyck(args) -> int:
    if args.invert:
        path = magma.DyckPath(args.value.strip())
        letters = args.letters or string.ascii_lowercase[: path.semilength + 1]
        if args.letters and ("," in letters or " " in letters):
            letters = [x for x in letters.replace(",", " ").split()]
        print(magma.format_word(magma.from_dyck(path, letters)))
    else:
        word = magma.parse_word(args.value, normalize=args.normalize)
        print(magma.to_dyck(word))
    return EXIT_OK


def cmd_latin(args) -> int:
    square = quasigroup.read_latin(_read(args.file))
    e = square.identity_element()
    print(f"order: {square.order}")
    print(f"identity: {e if e is not None else 'none'}")
    print(f"loop: {str(square.is_loop()).lower()}")
    print(f"associative: {str(square.is_associative(seed=args.seed)).lower()}")
    print(f"moufang: {str(square.is_moufang(seed=args.seed)).lower()}")
    print(f"moufang_standard: {str(square.is_moufang(standard=True, seed=args.seed)).lower()}")
    return EXIT_OK


def cmd_code(args) -> int:
    point = quasigroup.code_point(quasigroup.read_code(_read(args.file)))
    rate = simplex.fraction_text(point.rate) if point.rate_exact else repr(point.rate)
    print(f"rate: {rate}")
    print(f"rate_exact: {str(point.rate_exact).lower()}")
    print(f"rate_floor: {simplex.fraction_text(point.rate_floor)}")
    print(f"delta: {simplex.fraction_text(point.delta)}")
    return EXIT_OK


def _braid(path):
    return mpab.braid_from_json(_read(path))


def cmd_braid(args) -> int:
    op = args.op
    if op == "truncate":
        if args.m is None:
            raise InputError("truncate needs --m")
        combo = mpab.combination_from_json(_read(args.files[0]))
        print(mpab.combination_to_json(mpab.truncate(combo, args.m)))
        return EXIT_OK
    need = 2 if op == "compose" else 1
    if len(args.files) != need:
        raise InputError(f"braid {op} takes {need} file(s), got {len(args.files)}")
    b = _braid(args.files[0])
    if op == "compose":
        out = mpab.compose(b, _braid(args.files[1]))
    elif op == "inverse":
        out = mpab.inverse(b)
    elif op in ("cable", "remove"):
        if args.i is None:
            raise InputError(f"{op} needs --i")
        out = mpab.cable(b, args.i) if op == "cable" else mpab.remove_strand(b, args.i)
    elif op == "extend":
        out = mpab.extend(b, args.side, args.letter)
    elif op == "skeleton":
        print(json.dumps(mpab.translation_to_dict(b.skeleton()), sort_keys=True))
        return EXIT_OK
    else:  # render
        sys.stdout.write(mpab.render(b))
        return EXIT_OK
    print(mpab.braid_to_json(out))
    return EXIT_OK


def _family(args):
    if args.json:
        return toric.ExponentialFamily.from_json(_read(args.json))
    if args.model == "independence":
        return toric.independence_model()
    raise InputError("give --json FILE or --model independence")


def cmd_toric(args) -> int:
    op = args.op
    if op == "ideal":
        model = toric.toric_model(_family(args))
        print("kernel:")
        for u in model.kernel_basis:
            print("  " + " ".join(str(x) for x in u))
        print("binomials:")
        for b in model.binomials:
            print(f"  {b}")
        return EXIT_OK
    if op == "density":
        if not args.theta:
            raise InputError("density needs --theta")
        f = _family(args)
        d = toric.density_at(f, toric.parse_theta(args.theta))
        if d.exact is not None:
            print(",".join(simplex.fraction_text(p) for p in d.exact.weights))
        else:
            print(",".join(f"{float(p):.15g}" for p in d.probs))
        return EXIT_OK
    if not args.variety:
        raise InputError(f"toric {op} needs --variety")
    variety = toric.parse_variety(args.variety)
    if op == "count":
        if args.B is None and not args.schedule:
            raise InputError("count needs --B or --schedule")
        bounds = toric.parse_schedule(args.schedule) if args.schedule else [args.B]
        if args.csv:
            _write(args.csv, toric.count_csv(variety, bounds))
        for B in bounds:
            n = toric.count_points(toric.CountSpec(variety, B))
            print(n if len(bounds) == 1 else f"{B} {n}")
        return EXIT_OK
    # fit
    if not args.schedule:
        raise InputError("fit needs --schedule")
    report = toric.manin_fit(variety, toric.parse_schedule(args.schedule))
    if args.csv:
        _write(args.csv, report.to_csv())
    else:
        sys.stdout.write(report.to_csv())
    print(report.summary())
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _cube_size(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 1 <= n <= simplex.MAX_CUBE:
        raise argparse.ArgumentTypeError(f"n must lie in 1..{simplex.MAX_CUBE}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capgeo", description="Capacity geometry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segre-cube", help="hypercube of Segre parenthesisations")
    p.add_argument("n", type=_cube_size)
    p.add_argument("--dot", metavar="PATH", help="write the diagram as DOT ('-' for stdout)")
    p.set_defaults(func=cmd_segre_cube)

    p = sub.add_parser("distort", help="apply per-letter translations to a word")
    p.add_argument("word")
    p.add_argument("--latin", required=True, metavar="FILE", help="Latin square, CSV or JSON")
    p.add_argument("--plan", required=True, help="comma-separated maps, e.g. L_a,id,R_b,id")
    p.add_argument("--normalize", action="store_true", help="left-nest non-binary groups")
    p.set_defaults(func=cmd_distort)

    p = sub.add_parser("dyck", help="parenthesised word <-> Dyck path")
    p.add_argument("value")
    p.add_argument("--invert", action="store_true", help="read a path and print the word")
    p.add_argument("--letters", help="leaf letters for --invert (default a, b, c, ...)")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_dyck)

    p = sub.add_parser("latin", help="loop and Moufang checks for a Latin square")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks above order 8")
    p.set_defaults(func=cmd_latin)

    p = sub.add_parser("code", help="rate and relative distance of a code")
    p.add_argument("file")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("braid", help="modified braid operations on JSON files")
    p.add_argument("op", choices=["compose", "inverse", "cable", "remove", "extend", "skeleton", "truncate", "render"])
    p.add_argument("files", nargs="+")
    p.add_argument("--i", type=int, help="strand index counted at the bottom (1-based)")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--letter", default="x", help="letter carried by an added strand")
    p.add_argument("--m", type=int, help="truncation level")
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser("toric", help="toric ideals and point counts")
    p.add_argument("op", choices=["ideal", "density", "count", "fit"])
    p.add_argument("--json", metavar="FILE", help='family as {"Q": [[..]], "p0": [..]}')
    p.add_argument("--model", choices=["independence"])
    p.add_argument("--theta", help="comma-separated parameters; log(r) allowed")
    p.add_argument("--variety", help="P1, P2, P1xP1, P1^3, ...")
    p.add_argument("--B", type=int, help="anticanonical height bound")
    p.add_argument("--schedule", help="comma-separated bounds, e.g. 1e3,1e4,1e5")
    p.add_argument("--csv", metavar="PATH", help="write the CSV table here ('-' for stdout)")
    p.set_defaults(func=cmd_toric)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"capgeo: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"capgeo: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
