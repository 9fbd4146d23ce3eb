"""
Command-line front end.

    momentkit check-cm --file seq.txt --order 20
    momentkit moments --measure mu.msr --count 40 [--out seq.txt]
    momentkit eval --measure mu.msr --z RE,IM
    momentkit polylog --alpha A --z RE,IM
    momentkit hadamard --f f.msr --g g.msr --z RE,IM
    momentkit verify <claim> [--f mu.msr] [--grid name=lo:hi:count[:geom]] [--csv out.csv]
    momentkit counterexample --eps 0.5
    momentkit sweep --measure mu.msr --gamma G --grid y=0.05:20:50:geom [--csv out.csv]

Exit status: 0 pass, 1 claim violation, 2 usage error, numerical failure or
failed hypothesis gate.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from pathlib import Path

from .errors import MomentkitError
from .measures import DensitySpec, parse_scalar, read_measure
from .moments import DEFAULT_COUNT, DEFAULT_ORDER, format_sequence, is_completely_monotone, moments_of, read_sequence
from .polylog import g_alpha, li_with_error
from .proofcore import counterexample_value, extreme_range_scan
from .reports import GridSpec
from .stieltjes import StieltjesFunction, evaluate, hadamard_eval
from . import verify as V

EXIT_PASS, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2

CLAIMS = ("thm1", "cor1", "thm2", "thm3", "thm4", "liquot", "counterexample", "lemma1")


class UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM but got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM but got {text!r}") from None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)} {_fmt(z.imag)}"


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "--z -1,0" as two options; fold such values into "--z=-1,0"
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and re.match(r"^-(\d|\.\d|inf|nan)", argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _load_function(path: str | None, default: StieltjesFunction) -> StieltjesFunction:
    if path is None:
        return default
    return StieltjesFunction(read_measure(path))


def _load_density(path: str | None, default: DensitySpec) -> DensitySpec:
    if path is None:
        return default
    mu = read_measure(path)
    if mu.density is None or mu.atoms:
        raise UsageError(f"{path}: this claim needs a pure density (no atoms)")
    return mu.density


def _grid(items) -> GridSpec | None:
    if not items:
        return None
    return GridSpec.parse(items)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momentkit", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-cm", help="complete-monotonicity check of a sequence file")
    p.add_argument("--file", required=True)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--tol", type=float, default=None, help="uniform slack (float sequences only)")

    p = sub.add_parser("moments", help="moment sequence of a measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--count", type=int, default=DEFAULT_COUNT)
    p.add_argument("--out")

    p = sub.add_parser("eval", help="evaluate F(z) for a measure file")
    p.add_argument("--measure", required=True)
    p.add_argument("--z", type=_complex, required=True)

    p = sub.add_parser("polylog", help="Li_alpha(z)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--z", type=_complex, required=True)

    p = sub.add_parser("hadamard", help="evaluate (f*g)(z)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--z", type=_complex, required=True)

    p = sub.add_parser("verify", help="run a claim scan")
    p.add_argument("claim", choices=CLAIMS)
    p.add_argument("--f", help="measure file (density file for thm3/thm4)")
    p.add_argument("--g", help="second measure file (thm2)")
    p.add_argument("--grid", action="append", default=[], help="name=lo:hi:count[:geom]")
    p.add_argument("--gamma", type=float, action="append", help="gamma values (thm1, cor1, lemma1)")
    p.add_argument("--y1", type=float, default=0.5)
    p.add_argument("--y2", type=float, default=1.0)
    p.add_argument("--x", default="1/2", help="dilation factor for thm4")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="1")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--csv")

    p = sub.add_parser("counterexample", help="value of the gamma > 1 counterexample")
    p.add_argument("--eps", type=float, default=0.5)

    p = sub.add_parser("sweep", help="CSV of (y, |f|, arg f) along gamma + iy")
    p.add_argument("--measure", required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--grid", action="append", default=[])
    p.add_argument("--csv")
    return parser


def _cmd_check_cm(args) -> int:
    seq = read_sequence(args.file)
    report = is_completely_monotone(seq, min(args.order, len(seq) - 1), args.tol)
    print(report.summary())
    return EXIT_PASS if report.passed else EXIT_VIOLATION


def _cmd_moments(args) -> int:
    seq = moments_of(read_measure(args.measure), args.count)
    text = format_sequence(seq)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
        print(f"wrote {len(seq)} {seq.arithmetic_mode} moments to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _cmd_eval(args) -> int:
    f = StieltjesFunction(read_measure(args.measure))
    print(_fmt_complex(evaluate(f, args.z)))
    return EXIT_PASS


def _cmd_polylog(args) -> int:
    value, err = li_with_error(args.alpha, args.z)
    print(f"{_fmt_complex(value)} error<={err:.3e}")
    return EXIT_PASS


def _cmd_hadamard(args) -> int:
    f = StieltjesFunction(read_measure(args.f))
    g = StieltjesFunction(read_measure(args.g))
    print(_fmt_complex(hadamard_eval(f, g, args.z)))
    return EXIT_PASS


def _cmd_counterexample(args) -> int:
    value = counterexample_value(args.eps)
    print(_fmt(value))
    gamma = 1.0 + args.eps
    print(f"violation of Eq.(1) at gamma={gamma:g}: {'yes' if value < 1 else 'no'}")
    return EXIT_PASS if value < 1 else EXIT_VIOLATION


def _cmd_verify(args) -> int:
    grid = _grid(args.grid)
    claim = args.claim
    if claim == "thm1":
        f = _load_function(args.f, g_alpha(2))
        report = V.verify_theorem1(f, args.gamma or V.DEFAULT_GAMMAS, grid)
    elif claim == "cor1":
        f = _load_function(args.f, g_alpha(1))
        gammas = args.gamma or [1.0]
        if len(gammas) != 1:
            raise UsageError("cor1 takes a single --gamma")
        report = V.verify_corollary1(f, gammas[0], grid)
    elif claim == "thm2":
        f = _load_function(args.f, g_alpha(1))
        g = _load_function(args.g, g_alpha(1))
        report = V.verify_theorem2(f, g, grid)
    elif claim == "thm3":
        report = V.verify_theorem3(_load_density(args.f, DensitySpec.log_power(2)), grid)
    elif claim == "thm4":
        sigma = _load_density(args.f, DensitySpec.uniform())
        report = V.verify_theorem4(sigma, parse_scalar(args.x), args.order or 12)
    elif claim == "liquot":
        report = V.verify_polylog_quotient(parse_scalar(args.alpha), parse_scalar(args.beta), args.order or 8)
    elif claim == "lemma1":
        gammas = args.gamma or [1.0]
        if len(gammas) != 1:
            raise UsageError("lemma1 takes a single --gamma")
        report = extreme_range_scan(args.y1, args.y2, gammas[0], grid)
    else:
        report = V.verify_counterexample(args.eps)
    print(report.summary())
    for note in report.notes:
        print(f"  note: {note}")
    if args.csv:
        report.write_csv(args.csv)
    return report.exit_code


def _cmd_sweep(args) -> int:
    f = StieltjesFunction(read_measure(args.measure))
    grid = V.DEFAULT_Y_GRID.merged(_grid(args.grid))
    ys = grid.values("y")
    values = f.eval_many(args.gamma + 1j * ys)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["y", "abs_f", "arg_f"])
    for y, v in zip(ys, values):
        writer.writerow([_fmt(y), _fmt(abs(v)), _fmt(math.atan2(v.imag, v.real))])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
        print(f"wrote {ys.size} rows to {args.csv}")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_PASS


COMMANDS = {
    "check-cm": _cmd_check_cm,
    "moments": _cmd_moments,
    "eval": _cmd_eval,
    "polylog": _cmd_polylog,
    "hadamard": _cmd_hadamard,
    "verify": _cmd_verify,
    "counterexample": _cmd_counterexample,
    "sweep": _cmd_sweep,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    try:
        return COMMANDS[args.command](args)
    except (UsageError, MomentkitError, ValueError, ArithmeticError, OSError) as exc:
        print(f"momentkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
