"""Command-line front end.

    kkreals normalize "3:-" --prefix 12
    kkreals convert --from rational 1/3 --to digits --prefix 10
    kkreals convert --from digits "0:+ -" --round-trip --prefix 12
    kkreals eval --fn "n -> n * n" --at 5/2
    kkreals embed --type 2 --functional "f -> f(0)" --shift 1/2 --precision 20
    kkreals enum --k 1 --n 2
    kkreals modulus --level 2 --functional "f -> f(f(0))" --arg "n -> n + 1"
    kkreals lemma-demo --functional "x -> x(0) + x(1)" --stages 200 --probe "n -> 1"

Exit status: 0 on success, 2 on usage errors, 3 when a computation runs out
of budget (or an approximation does not settle).  ``--emit-vectors PATH``
appends one ``inputs<TAB>expected<TAB>provenance`` line per invocation.
"""

from __future__ import annotations

import argparse
import re
import shlex
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import approx_lemma, digits, embeddings, exact, kk
from .errors import BudgetExhausted, EnumerationCapExceeded, Unstabilized
from .expr import ExprError, parse_fn1, parse_fn2

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3
# values such as -2, -7/4 and "-2:+ -" are arguments, not options
_NEG_LITERAL = re.compile(r"^-\d+(:.*|/\d+)?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEG_LITERAL

    def error(self, message):
        raise UsageError(message)


@dataclass
class Command:
    name: str
    args: argparse.Namespace
    argv: list


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kkreals", description="Exact reals and embedded functionals.")
    p.add_argument("--emit-vectors", metavar="PATH")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("eval", help="evaluate a function, its interpolation, or a functional")
    s.add_argument("--fn", help="type-1 expression; with --at prints its interpolation")
    s.add_argument("--at", type=_frac, action="append")
    s.add_argument("--functional")
    s.add_argument("--arg", help="type-1 argument for --functional")

    s = sub.add_parser("convert", help="convert between digit streams, rationals and interval tables")
    s.add_argument("value")
    s.add_argument("--from", dest="src", choices=("digits", "rational"), default="digits")
    s.add_argument("--to", dest="dst", choices=("digits", "intervals"), default="intervals")
    s.add_argument("--prefix", type=_nonneg, default=16)
    s.add_argument("--round-trip", action="store_true")

    s = sub.add_parser("normalize", help="normalize a digit stream")
    s.add_argument("stream")
    s.add_argument("--prefix", type=_nonneg, default=16)

    s = sub.add_parser("embed", help="evaluate the embedded functional")
    s.add_argument("--type", type=int, choices=(1, 2), required=True)
    s.add_argument("--mode", choices=embeddings.MODES, default=embeddings.PARTITION)
    s.add_argument("--precision", type=_nonneg, default=20)
    s.add_argument("--fn", help="type-1 function (type 1)")
    s.add_argument("--at", type=_frac, help="real argument (type 1)")
    s.add_argument("--functional", help="type-2 functional (type 2)")
    s.add_argument("--arg", help="g = pi1(arg) + shift; without it g(x) = x + shift")
    s.add_argument("--shift", type=_frac, default=Fraction(0))
    s.add_argument("--digits", type=_nonneg, help="also print the intensional stream prefix")
    s.add_argument("--budget", type=_nonneg, default=embeddings.DEFAULT_BUDGET)

    s = sub.add_parser("enum", help="dump X^k_n")
    s.add_argument("--k", type=int, choices=(0, 1, 2), required=True)
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--cap", type=_nonneg, default=kk.DEFAULT_CAP)

    s = sub.add_parser("modulus", help="Grilliot modulus of convergence")
    s.add_argument("--level", type=int, choices=(1, 2), required=True)
    s.add_argument("--fn")
    s.add_argument("--at", type=_nonneg)
    s.add_argument("--functional")
    s.add_argument("--arg")

    s = sub.add_parser("lemma-demo", help="stabilization table of the approximants")
    s.add_argument("--functional", required=True)
    s.add_argument("--stages", type=_nonneg, default=200)
    s.add_argument("--probe", required=True)
    return p


def parse(argv) -> Command:
    """Validate ``argv``; raises :class:`UsageError` naming the problem."""
    argv = list(argv)
    ns = build_parser().parse_args(argv)
    need = {
        "modulus": {1: ("fn", "at"), 2: ("functional", "arg")},
        "embed": {1: ("fn", "at"), 2: ("functional",)},
    }
    if ns.command in need:
        key = ns.level if ns.command == "modulus" else ns.type
        for flag in need[ns.command][key]:
            if getattr(ns, flag) is None:
                raise UsageError(f"{ns.command} needs --{flag}")
    if ns.command == "eval" and not (ns.fn or (ns.functional and ns.arg)):
        raise UsageError("eval needs --fn, or --functional with --arg")
    if ns.command == "eval" and ns.fn and not ns.at:
        raise UsageError("eval --fn needs at least one --at")
    try:
        for flag in ("fn", "arg", "probe"):
            if getattr(ns, flag, None):
                parse_fn1(getattr(ns, flag))
        if getattr(ns, "functional", None):
            parse_fn2(ns.functional)
        if ns.command == "normalize":
            digits.parse_stream(ns.stream)
        if ns.command == "convert":
            (digits.parse_stream if ns.src == "digits" else Fraction)(ns.value)
    except (ExprError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc))
    return Command(ns.command, ns, argv)


def _g_for(ns):
    if ns.arg:
        g = embeddings.pi1(parse_fn1(ns.arg))
        return g.shifted(ns.shift) if ns.shift else g
    return embeddings.affine_fn(1, ns.shift)


def _run_eval(ns):
    if ns.fn:
        f = parse_fn1(ns.fn)
        g = embeddings.pi1(f)
        lines = []
        for x in ns.at:
            enc = g(exact.Interval.point(x))
            lines.append(f"pi1({ns.fn})({exact.format_rational(x)}) = {exact.format_rational(enc.lo)}")
        return lines
    F, f = parse_fn2(ns.functional), parse_fn1(ns.arg)
    return [f"F(f) = {F(f)}"]


def _run_convert(ns):
    n = ns.prefix
    if ns.src == "rational":
        x = digits.from_intervals(exact.rational_stream(Fraction(ns.value)))
    else:
        x = digits.parse_stream(ns.value)
    lines = []
    if ns.round_trip:
        back = digits.from_intervals(digits.to_intervals(x))
        agree = digits.decode(x, n).intersects(digits.decode(back, n))
        lines.append(f"in   {digits.format_stream(x, n)}")
        lines.append(f"out  {digits.format_stream(back, n)}")
        lines.append(f"tolerance 2^-{n} agree={'yes' if agree else 'no'}")
    elif ns.dst == "digits":
        lines.append(digits.format_stream(x, n))
    else:
        lines.append(exact.format_prefix(digits.to_intervals(x), n))
    return lines


def _run_embed(ns):
    p = ns.precision
    if ns.type == 1:
        enc = embeddings.pi1(parse_fn1(ns.fn))(exact.Interval.point(ns.at), p)
        return [f"{enc}"]
    F = parse_fn2(ns.functional)
    g = _g_for(ns)
    enc = embeddings.pi2(F, g, p, ns.mode, ns.budget)
    lines = [f"{enc} width<=2^-{p} mode={ns.mode}"]
    if ns.digits is not None:
        s = embeddings.pi2_S(F, embeddings.lift(g), ns.mode, ns.budget)
        lines.append(digits.format_stream(s, ns.digits))
    return lines


def _run_modulus(ns):
    if ns.level == 1:
        return [str(kk.modulus(1, ns.at, parse_fn1(ns.fn)))]
    return [str(kk.modulus(2, parse_fn1(ns.arg), parse_fn2(ns.functional)))]


def _run_lemma(ns):
    F, x = parse_fn2(ns.functional), parse_fn1(ns.probe)
    scheme = approx_lemma.approximants(F, ns.stages)
    traj = scheme.trajectory(x)
    lines = [f"{n}\t{v}" for n, v in enumerate(traj)]
    n0 = scheme.stabilization(x)
    target = F(x)
    if n0 is None:
        raise Unstabilized(f"f(x) = {target} not reached stably by stage {ns.stages}", [ns.probe])
    lines.append(f"f(x) = {target}, stable from n = {n0}")
    return lines


def run(cmd: Command) -> tuple[int, str]:
    ns = cmd.args
    try:
        if cmd.name == "eval":
            lines = _run_eval(ns)
        elif cmd.name == "convert":
            lines = _run_convert(ns)
        elif cmd.name == "normalize":
            lines = [digits.format_stream(digits.normalize(digits.parse_stream(ns.stream)), ns.prefix)]
        elif cmd.name == "embed":
            lines = _run_embed(ns)
        elif cmd.name == "enum":
            lines = [str(a) for a in kk.enum_X(ns.k, ns.n, ns.cap)]
        elif cmd.name == "modulus":
            lines = _run_modulus(ns)
        else:
            lines = _run_lemma(ns)
    except (BudgetExhausted, Unstabilized, EnumerationCapExceeded) as exc:
        detail = getattr(exc, "diagnostic", None) or getattr(exc, "points", None)
        msg = f"error: {exc}"
        if detail:
            msg += f"\ndiagnostic: {detail}"
        return EXIT_BUDGET, msg + "\n"
    return EXIT_OK, "\n".join(lines) + "\n"


def _emit(path, cmd, out):
    argv = [a for i, a in enumerate(cmd.argv)
            if a != "--emit-vectors" and (i == 0 or cmd.argv[i - 1] != "--emit-vectors")
            and not a.startswith("--emit-vectors=")]
    expected = out.strip().replace("\t", " ").replace("\n", " | ")
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(f"{shlex.join(argv)}\t{expected}\tcli:{cmd.name}\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    status, out = run(cmd)
    (sys.stdout if status == EXIT_OK else sys.stderr).write(out)
    if status == EXIT_OK and cmd.args.emit_vectors:
        _emit(cmd.args.emit_vectors, cmd, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
