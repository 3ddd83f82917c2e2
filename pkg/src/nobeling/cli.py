"""Command line front end.

Exit codes: 0 success, 2 unreadable input, 3 resource cap exceeded,
4 a mathematical invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .basis import (
    DEFAULT_MAX_POINTS,
    compute_basis,
    decompose,
    good_products_greedy,
    good_products_recursive,
    prefix_filtration,
)
from .cube import CoordinateOrder, CubeSet
from .errors import (
    AmbientMismatchError,
    CapExceededError,
    ContractError,
    InvariantError,
    ParseError,
)
from .formats import format_cube, parse_cube, parse_function, parse_space
from .products import DEFAULT_MAX_N, format_product
from .profinite import (
    aligned_families,
    clopen_embedding,
    default_family,
    example_dimension,
    generate_example,
)
from .verify import verify_space

EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_INVARIANT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _load_space(args) -> CubeSet:
    if not args.input:
        raise ParseError("--input is required")
    S = parse_cube(_read(args.input))
    if args.order:
        try:
            ranks = tuple(int(r) for r in args.order.split())
            if len(ranks) != S.n:
                raise ContractError(f"--order has {len(ranks)} ranks for n = {S.n}")
            S = CubeSet(CoordinateOrder(S.n, ranks), S.points)
        except (ValueError, ContractError) as exc:
            raise ParseError(f"bad --order: {exc}") from None
    if S.n > args.max_n:
        raise CapExceededError(f"n = {S.n} exceeds --max-n {args.max_n}")
    return S


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def cmd_basis(args) -> int:
    S = _load_space(args)
    caps = dict(max_n=args.max_n, max_points=args.max_points)
    lines, status = [], EXIT_OK
    if args.method == "both":
        greedy = good_products_greedy(S, **caps)
        recursive = good_products_recursive(S, **caps)
        basis, agree = greedy, greedy.products == recursive.products
        if not agree:
            status = EXIT_INVARIANT
    else:
        basis, agree = compute_basis(S, args.method, **caps), None
    if args.format == "json":
        data = basis.to_json()
        data["method"] = args.method
        if agree is not None:
            data["agree"] = agree
            if not agree:
                data["greedy"] = [list(p) for p in greedy.products]
                data["recursive"] = [list(p) for p in recursive.products]
        _emit(args, _dump(data))
    else:
        lines.append(f"|S| = {len(S)}  |E(S)| = {len(basis)}  method = {args.method}")
        lines.extend(format_product(p) for p in basis.products)
        if agree is True:
            lines.append("ALGORITHMS AGREE")
        elif agree is False:
            lines.append("ALGORITHMS DISAGREE")
            lines.append("greedy:    " + " ".join(format_product(p) for p in greedy.products))
            lines.append("recursive: " + " ".join(format_product(p) for p in recursive.products))
        _emit(args, "\n".join(lines) + "\n")
    return status


def cmd_decompose(args) -> int:
    S = _load_space(args)
    if not args.function:
        raise ParseError("--function is required")
    f = parse_function(_read(args.function), S)
    method = "recursive" if args.method == "both" else args.method
    basis = compute_basis(S, method, args.max_n, args.max_points)
    result = decompose(basis, f)  # raises InvariantError unless it reconstructs f
    if args.format == "json":
        _emit(args, _dump(result.to_json()))
    else:
        rows = [f"{format_product(p)}\t{c}" for p, c in result.coefficients.items()]
        _emit(args, "\n".join(rows) + ("\n" if rows else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    S = _load_space(args)
    report = verify_space(S, seed=args.seed, corrupt=args.corrupt_basis)
    if args.format == "json":
        _emit(args, _dump(report.to_json()))
    else:
        lines = [f"seed {report.seed}  n = {S.n}  |S| = {len(S)}"]
        lines.extend(f"{'PASS' if c.passed else 'FAIL'}  {c.name}" for c in report.checks)
        _emit(args, "\n".join(lines) + "\n")
    if not report.passed:
        print("failed: " + ", ".join(report.failed()), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_embed(args) -> int:
    if not args.input:
        raise ParseError("--input is required")
    parsed = parse_space(_read(args.input))
    if isinstance(parsed, tuple):
        T, family = parsed
        if family is None:
            family = default_family(T, args.max_n)
    else:
        T, family = parsed.stages[-1], aligned_families(parsed)[-1]
    S, _ = clopen_embedding(T, family)
    _emit(args, format_cube(S))
    return EXIT_OK


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def cmd_gen(args) -> int:
    params = [_number(p) for p in args.params]
    kwargs = {}
    if args.name == "random_closed":
        kwargs = {"seed": args.seed}
        if args.density is not None:
            kwargs["density"] = args.density
        if args.size is not None:
            kwargs["size"] = args.size
    try:
        n = example_dimension(args.name, *params)
        if n > args.max_n:
            raise CapExceededError(f"n = {n} exceeds --max-n {args.max_n}")
        S = generate_example(args.name, *params, **kwargs)
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"bad parameters for {args.name}: {exc}") from None
    _emit(args, format_cube(S))
    return EXIT_OK


def cmd_filtration(args) -> int:
    S = _load_space(args)
    method = "recursive" if args.method == "both" else args.method
    chain = prefix_filtration(S, method, args.max_n)
    if args.format == "json":
        data = {"filtration": [{"mu": mu, "basis": [list(p) for p in E]} for mu, E in chain]}
        _emit(args, _dump(data))
    else:
        lines = [f"{mu}\t{len(E)}\t" + " ".join(format_product(p) for p in E) for mu, E in chain]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="space file (.cube, or JSON for embed); '-' for stdin")
    common.add_argument("--order", help="coordinate ranks, e.g. '1 0 2'")
    common.add_argument("--method", choices=["greedy", "recursive", "both"], default="both")
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    common.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = _Parser(prog="nobeling", description="Good-product bases of C(S, Z).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("basis", parents=[common], help="compute the good products of a space")
    p = sub.add_parser("decompose", parents=[common], help="write a function in the basis")
    p.add_argument("--function", help="JSON object mapping points to integers")
    p = sub.add_parser("verify", parents=[common], help="run every structural check")
    p.add_argument("--corrupt-basis", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("embed", parents=[common], help="embed a finite space into a cube")
    p = sub.add_parser("gen", parents=[common], help="generate an example space")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--density", type=float)
    p.add_argument("--size", type=int)
    sub.add_parser("filtration", parents=[common], help="good products of each prefix projection")
    return parser


COMMANDS = {
    "basis": cmd_basis,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "embed": cmd_embed,
    "gen": cmd_gen,
    "filtration": cmd_filtration,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_n <= 0 or args.max_points <= 0:
        print("nobeling: caps must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except (ParseError, AmbientMismatchError, ContractError) as exc:
        print(f"nobeling: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"nobeling: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantError as exc:
        print(f"nobeling: invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
