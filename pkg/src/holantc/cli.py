"""Command-line front end: ``holantc <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .classes import (
    classify_csp2c,
    classify_holant_c,
    in_A,
    in_A_alpha,
    in_L_characterization,
    in_L_definition,
    in_P,
    holant_star_tractable,
)
from .corpus import GENERATORS, replay_figure1
from .cyclo import Cyc8, format_cyc8, parse_cyc8
from .errors import HolantError, NotRealValued, ParseError, TooLarge
from .grid import DEFAULT_MAX_EDGES, compose_gadget, holant_brute
from .io import load_grid, load_signature, serialize_signature
from .signatures import Signature, bundles_of
from .solvers import solve_auto

EXIT_OK, EXIT_INPUT, EXIT_TOO_LARGE, EXIT_HYPOTHESIS = 0, 1, 2, 3


def _approx(z: Cyc8) -> str:
    c = complex(z)
    sign = "-" if c.imag < 0 else "+"
    return f"{c.real:.6f} {sign} {abs(c.imag):.6f}i"


def _print_value(out: TextIO, z: Cyc8, method: str | None, quiet: bool) -> None:
    if quiet:
        print(format_cyc8(z), file=out)
        return
    print(f"VALUE {format_cyc8(z)}", file=out)
    print(f"APPROX {_approx(z)}", file=out)
    if method:
        print(f"METHOD {method}", file=out)


def _write(text: str, dest: str | None, out: TextIO) -> None:
    if dest is None or dest == "-":
        out.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _symmetric(text: str) -> Signature:
    """``[f0, f1, ..., fn]`` notation, value by Hamming weight."""
    items = [t for t in text.strip().strip("[]").split(",") if t.strip()]
    try:
        return Signature.from_symmetric([parse_cyc8(t) for t in items], name="sym")
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cmd_classify_fn(args, out: TextIO) -> int:
    if (args.file is None) == (args.sym is None):
        print("error: give a signature file or --sym, not both", file=sys.stderr)
        return EXIT_INPUT
    f = load_signature(args.file) if args.file else _symmetric(args.sym)
    print(f"SIGNATURE {f.name} arity {f.arity} support {len(f.entries)}", file=out)
    try:
        print(f"BUNDLES {bundles_of(f).describe() or '(none)'}", file=out)
    except HolantError as exc:
        print(f"BUNDLES unavailable: {exc}", file=out)
    cert = in_L_characterization(f)
    for label, ok in (
        ("P", in_P(f)),
        ("A", in_A(f)),
        ("Aalpha", in_A_alpha(f)),
        ("L", cert.ok),
    ):
        print(f"{label:<7}{'yes' if ok else 'no'}", file=out)
    print(f"L-CERT {cert}", file=out)
    if args.definition:
        print(f"L-DEF  {'yes' if in_L_definition(f) else 'no'}", file=out)
    w = holant_star_tractable([f])
    print(f"HOLANT* {w if w is not None else 'no'}", file=out)
    return EXIT_OK


def cmd_classify_set(args, out: TextIO) -> int:
    sigs = [load_signature(p) for p in args.files]
    verdict = classify_holant_c(sigs) if args.mode == "holantc" else classify_csp2c(sigs)
    out.write(verdict.serialize())
    return EXIT_OK


def cmd_solve(args, out: TextIO) -> int:
    g = load_grid(args.grid)
    value, method = solve_auto(g, args.max_brute_edges, args.force_brute)
    _print_value(out, value, method, args.quiet)
    return EXIT_OK


def cmd_oracle(args, out: TextIO) -> int:
    g = load_grid(args.grid)
    _print_value(out, holant_brute(g, args.max_brute_edges), "brute", args.quiet)
    return EXIT_OK


def cmd_compose(args, out: TextIO) -> int:
    g = load_grid(args.grid)
    f = compose_gadget(g, args.max_brute_edges, name=args.name or Path(args.grid).stem)
    _write(serialize_signature(f), args.out, out)
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    gen = GENERATORS[args.name]
    params = [int(p) for p in args.params]
    try:
        f: Signature = gen(*params)
    except TypeError:
        print(f"error: wrong number of parameters for {args.name}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(serialize_signature(f), args.out, out)
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    derived, ok, c = replay_figure1()
    if ok:
        print(f"figure1: proportional to f7a(++) with constant {format_cyc8(c)}", file=out)
    else:
        print("figure1: NOT proportional to f7a(++)", file=out)
    if not args.quiet:
        print(f"bundles: {bundles_of(derived).describe()}", file=out)
    return EXIT_OK if ok else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holantc", description="Exact Holant and #CSP tools over Q(zeta_8).")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify-fn", help="membership of one signature in P, A, A^alpha and L")
    c.add_argument("file", nargs="?")
    c.add_argument("--sym", metavar="VALUES", help="symmetric signature such as '[1,0,0,1]'")
    c.add_argument("--definition", action="store_true", help="also run the definition-based L test")
    c.set_defaults(func=cmd_classify_fn)

    c = sub.add_parser("classify-set", help="dichotomy verdict for a set of signatures")
    c.add_argument("files", nargs="+")
    c.add_argument("--mode", choices=("csp2c", "holantc"), default="csp2c")
    c.set_defaults(func=cmd_classify_set)

    def brute_flags(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--max-brute-edges", type=int, default=DEFAULT_MAX_EDGES, metavar="N")
        sp.add_argument("--quiet", action="store_true", help="print the value only")

    c = sub.add_parser("solve", help="Holant value of a closed grid")
    c.add_argument("grid")
    c.add_argument("--force-brute", action="store_true")
    brute_flags(c)
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("oracle", help="Holant value by exhaustive summation")
    c.add_argument("grid")
    brute_flags(c)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("compose", help="contract a gadget into a signature file")
    c.add_argument("grid")
    c.add_argument("out", nargs="?", default="-")
    c.add_argument("--name")
    c.add_argument("--max-brute-edges", type=int, default=DEFAULT_MAX_EDGES, metavar="N")
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("gen", help="write a named signature")
    c.add_argument("name", choices=sorted(GENERATORS))
    c.add_argument("params", nargs="*", help="integer parameters (arity, bit or r)")
    c.add_argument("-o", "--out", default="-")
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="replay a built-in construction")
    c.add_argument("replay", choices=("figure1",))
    c.add_argument("--quiet", action="store_true")
    c.set_defaults(func=cmd_check)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse uses 2, which is reserved for TooLarge here
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args, out)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except NotRealValued as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (HolantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
