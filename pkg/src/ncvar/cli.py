"""Command-line front end.

Every subcommand parses its inputs in the jet space fixed by the global
flags, runs one kernel operation and prints the canonical text form (or a
structured document with ``--json``).

Exit codes: 0 success; ``is-hamiltonian`` uses 0/1/2 for true/false/
inconclusive; 64 usage error; 65 malformed input or invalid data.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import config, frontend, testkit
from .algebra import CyclicPoly, DiffPoly
from .jet import (
    DiffOperator,
    adjoint,
    couple,
    cyclic_multilinear_adjoint,
    euler,
    normal_form,
)
from .multivector import Multivector, evaluate, multivector_from_density, odd_field, schouten
from .poisson import is_hamiltonian, jacobiator, poisson_bracket

EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _space_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    g = parser.add_argument_group("jet space")
    g.add_argument("--gens", type=int, metavar="M", default=default(1), help="number of generators")
    g.add_argument("--base-dim", type=int, metavar="N", default=default(1), help="number of independent variables")
    g.add_argument("--commutative", action="store_true", default=default(False), help="graded-commutative algebra")
    g.add_argument("--json", action="store_true", default=default(False), help="print a structured document")


# ---------------------------------------------------------------------------
# input helpers


def _poly(src: str, slots=()):
    return frontend.parse_expression(src, slots)


def _functional(src: str) -> CyclicPoly:
    value = _poly(src)
    if isinstance(value, DiffPoly):
        raise UsageError(f"expected a trace expression, got {src!r}")
    return value


def _multivector(src: str) -> Multivector:
    return multivector_from_density(_functional(src))


def _tuple(src: str, m: int) -> tuple:
    parts = [_poly(s) for s in src.split(";")]
    if any(isinstance(p, CyclicPoly) for p in parts):
        raise UsageError("covector and vector components must be open words")
    if len(parts) > m:
        raise UsageError(f"{len(parts)} components given for {m} generators")
    return tuple(parts) + (DiffPoly.zero(),) * (m - len(parts))


def _operator(args) -> DiffOperator:
    if not args.op:
        raise UsageError("--op is required")
    pieces = [piece for op in args.op for piece in op.split(";")]
    return frontend.parse_operator(pieces, args.slots.split(","))


# ---------------------------------------------------------------------------
# subcommands


def cmd_euler(args):
    F = _poly(args.expr)
    return euler(F, args.var, args.side, config.current().m)


def cmd_normal_form(args):
    return normal_form(_functional(args.expr))


def cmd_adjoint(args):
    A = _operator(args)
    if args.cyclic:
        return cyclic_multilinear_adjoint(A)
    return adjoint(A)


def cmd_couple(args):
    m = config.current().m
    return couple(_tuple(args.covector, m), _tuple(args.vector, m))


def cmd_schouten(args):
    return schouten(_multivector(args.xi), _multivector(args.eta))


def cmd_evaluate(args):
    m = config.current().m
    return evaluate(_multivector(args.xi), [_tuple(p, m) for p in args.covectors])


def cmd_q_field(args):
    Q = odd_field(_multivector(args.xi))
    if args.apply is not None:
        return Q(_multivector(args.apply))
    return Q.phi_a + Q.phi_b


def cmd_poisson(args):
    return poisson_bracket(_functional(args.h1), _functional(args.h2), _operator(args))


def cmd_jacobiator(args):
    return jacobiator(_functional(args.h1), _functional(args.h2), _functional(args.h3), _operator(args))


def cmd_is_hamiltonian(args):
    return is_hamiltonian(_operator(args), args.route, args.order_bound)


def cmd_selftest(args):
    return testkit.selftest(seed=args.seed, cases=args.cases)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncvar", description="Noncommutative variational multivector calculus.")
    _space_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _space_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def with_op(p):
        p.add_argument("--op", action="append", help="operator component (repeat, or separate with ';')")
        p.add_argument("--slots", default="p", help="comma-separated slot names (default: p)")
        return p

    p = add("euler", cmd_euler, "variational derivative of a functional")
    p.add_argument("--var", choices=("a", "b"), default="a")
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("expr")

    p = add("normal-form", cmd_normal_form, "canonical representative modulo total derivatives")
    p.add_argument("expr")

    p = with_op(add("adjoint", cmd_adjoint, "adjoint of a linear operator"))
    p.add_argument("--cyclic", action="store_true", help="cyclic adjoint of a multilinear operator")

    p = add("couple", cmd_couple, "pairing of a covector with a vector")
    p.add_argument("covector")
    p.add_argument("vector")

    p = add("schouten", cmd_schouten, "variational Schouten bracket")
    p.add_argument("xi")
    p.add_argument("eta")

    p = add("evaluate", cmd_evaluate, "value of a k-vector on k covectors")
    p.add_argument("xi")
    p.add_argument("covectors", nargs="*")

    p = add("q-field", cmd_q_field, "odd evolutionary field of a multivector")
    p.add_argument("xi")
    p.add_argument("--apply", metavar="ETA", help="act on a multivector instead of printing the field")

    p = with_op(add("poisson", cmd_poisson, "Poisson bracket of two functionals"))
    p.add_argument("h1")
    p.add_argument("h2")

    p = with_op(add("jacobiator", cmd_jacobiator, "Jacobi obstruction for three functionals"))
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("h3")

    p = with_op(add("is-hamiltonian", cmd_is_hamiltonian, "decide whether an operator is Hamiltonian"))
    p.add_argument("--route", choices=("master", "involutive", "both"), default="master")
    p.add_argument("--order-bound", type=int, metavar="N")

    p = add("selftest", cmd_selftest, "cross-check the kernel against independent oracles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    return parser


# ---------------------------------------------------------------------------
# output


def _verdict_output(verdict, as_json: bool) -> str:
    if not as_json:
        return verdict.status
    doc = {"verdict": verdict.status, "route": verdict.route, "order_bound": verdict.order_bound}
    if verdict.residual is not None:
        doc["residual"] = frontend.to_document(verdict.residual)
    if verdict.certificate is not None:
        doc["certificate"] = frontend.to_document(verdict.certificate)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _selftest_output(report, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, separators=(",", ":"))
    lines = [f"{name}: {n_ok}/{n} ok" for name, (n_ok, n) in sorted(report.items())]
    return "\n".join(lines)


def run(argv=None) -> tuple[int, str]:
    """Run the CLI and return ``(exit code, stdout text)``; errors go to stderr."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.gens < 1 or args.base_dim < 1:
        parser.error("--gens and --base-dim must be positive")
    try:
        with config.jet_space(n=args.base_dim, m=args.gens, commutative=args.commutative):
            result = args.func(args)
            if args.command == "is-hamiltonian":
                code = {"true": 0, "false": 1, "inconclusive": 2}[result.status]
                return code, _verdict_output(result, args.json)
            if args.command == "selftest":
                ok = all(n_ok == n for n_ok, n in result.values())
                return (0 if ok else 1), _selftest_output(result, args.json)
            text = frontend.serialize(result) if args.json else frontend.render(result)
            return 0, text
    except UsageError as exc:
        print(f"ncvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    except (ValueError, IndexError) as exc:
        print(f"ncvar: error: {exc}", file=sys.stderr)
        return EXIT_DATA, ""


def main(argv=None) -> int:
    code, text = run(argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
