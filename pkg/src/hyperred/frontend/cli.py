"""Command-line entry point ``hyperred``.

Exit codes: 0 success, 2 malformed input or failed validation, 3 unsupported
tower or case, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from ..errors import (
    DuplicateGenerator,
    HyperredError,
    InvariantViolation,
    PreconditionViolated,
    UnsupportedCase,
    UnsupportedTower,
)
from ..field import reset_max_degree
from .build import EvaluationError, UndeclaredGenerator, build_tower, evaluate
from .formatting import FORMATS, format_value
from .parser import ExpressionSyntaxError, UnknownIdentifier

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which matches EXIT_INPUT
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tower", default=None, help='declarations such as "t1=exp(x); t2=exp(int(1/x^2))"')
    common.add_argument("--format", choices=FORMATS, default="plain")
    common.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")

    p = _Parser(prog="hyperred", description="Reductions and additive decompositions in hyperexponential towers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", parents=[common], help="additive decomposition f = g' + r")
    d.add_argument("--expr", required=True)

    i = sub.add_parser("integrate", parents=[common], help="elementary integral or non-elementary remainder")
    i.add_argument("--expr", required=True)

    r = sub.add_parser("reduce", parents=[common], help="kernel-shell reduction of g modulo V_f")
    r.add_argument("--direction", required=True, help="weakly normalized f")
    r.add_argument("--expr", required=True, help="g")
    r.add_argument("--level", type=int, default=None)

    k = sub.add_parser("kernel", parents=[common], help="kernel-shell decomposition f = eta'/eta + xi")
    k.add_argument("--expr", required=True)
    k.add_argument("--mode", choices=("weak", "normalized"), default="weak")
    k.add_argument("--level", type=int, default=None)
    return p


def _level(tw, level: Optional[int], *elems) -> int:
    if level is None:
        return max(e.level for e in elems)
    if not 0 <= level <= tw.n:
        raise PreconditionViolated(f"level {level} is outside 0..{tw.n}")
    return level


def run(args: argparse.Namespace):
    from ..additive import ad_rht
    from ..elementary import integrate
    from ..kernel import gks
    from ..reductions import gksr

    tw = build_tower(args.tower)
    if args.command == "decompose":
        return ad_rht(evaluate(args.expr, tw), args.seed)
    if args.command == "integrate":
        return integrate(evaluate(args.expr, tw), args.seed)
    if args.command == "reduce":
        f = evaluate(args.direction, tw)
        g = evaluate(args.expr, tw)
        return gksr(f, g, _level(tw, args.level, f, g))
    f = evaluate(args.expr, tw)
    return gks(f, _level(tw, args.level, f), args.mode, args.seed)


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (UnsupportedTower, UnsupportedCase)):
        return EXIT_UNSUPPORTED
    if isinstance(exc, InvariantViolation):
        return EXIT_INTERNAL
    if isinstance(
        exc,
        (
            ExpressionSyntaxError,
            UnknownIdentifier,
            EvaluationError,
            UndeclaredGenerator,
            DuplicateGenerator,
            PreconditionViolated,
        ),
    ):
        return EXIT_INPUT
    if isinstance(exc, HyperredError):
        return EXIT_INPUT
    return EXIT_INTERNAL


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        reset_max_degree()
        value = run(args)
        print(format_value(value, args.format).body)
    except Exception as exc:  # every failure maps to an exit code
        code = _exit_code(exc)
        label = "internal error" if code == EXIT_INTERNAL else "error"
        print(f"hyperred: {label}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
