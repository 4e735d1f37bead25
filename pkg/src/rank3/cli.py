"""Command-line front end.

Exit codes: 0 certified (or plain success), 1 inconclusive numerics,
2 input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import report
from .curve import INFINITY, Point, add, double, format_rational, negate, scalar_mul, to_rational
from .errors import NotOnCurve, PointNotOnCurve, SingularCurve
from .families import FAMILIES, CertifyOptions, HypothesisWarning, build, certify, iter_scan
from .heights import DEFAULT_MAX_DOUBLINGS, DEFAULT_TOL
from .pell import admissible, pairs
from .torsion import DEFAULT_PRIME_WINDOW

ENV_MAX_DOUBLINGS = "RANK3_MAX_DOUBLINGS"
EXIT_OK, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2


_NEG_POINT = re.compile(r"^-[Pp][123]$")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = DEFAULT_TOL
    n_max_doublings: int = DEFAULT_MAX_DOUBLINGS
    prime_window: int = DEFAULT_PRIME_WINDOW
    log_base: str = "natural"
    output_format: str = "json"
    output_path: Optional[Path] = None
    torsion: Optional[bool] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if not 4 <= self.n_max_doublings <= 16:
            raise UsageError("--max-doublings must lie in [4, 16]")
        if self.prime_window < 1:
            raise UsageError("--primes must be at least 1")

    def certify_options(self) -> CertifyOptions:
        return CertifyOptions(
            tol=self.tol,
            n_max=self.n_max_doublings,
            prime_window=self.prime_window,
            log_base=self.log_base,
            torsion=self.torsion,
        )


def _config(args) -> RunConfig:
    n_max = args.max_doublings
    if n_max is None:
        env = os.environ.get(ENV_MAX_DOUBLINGS)
        if env:
            try:
                n_max = int(env)
            except ValueError:
                raise UsageError(f"{ENV_MAX_DOUBLINGS}={env!r} is not an integer") from None
        else:
            n_max = DEFAULT_MAX_DOUBLINGS
    torsion = {"auto": None, "on": True, "off": False}[getattr(args, "torsion", "auto")]
    return RunConfig(
        tol=args.tol,
        n_max_doublings=n_max,
        prime_window=args.primes,
        log_base=args.log_base,
        output_format=args.format,
        output_path=Path(args.out) if args.out else None,
        torsion=torsion,
    )


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="height tolerance (natural log)")
    common.add_argument(
        "--max-doublings",
        type=int,
        default=None,
        help=f"doubling cap, 4..16 (default {DEFAULT_MAX_DOUBLINGS}, or ${ENV_MAX_DOUBLINGS})",
    )
    common.add_argument("--primes", type=int, default=DEFAULT_PRIME_WINDOW, help="good primes for the torsion bound")
    common.add_argument("--log-base", choices=["natural", "family"], default="natural")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")

    certify_flags = argparse.ArgumentParser(add_help=False)
    certify_flags.add_argument(
        "--torsion", choices=["auto", "on", "off"], default="auto",
        help="torsion computation (auto: square family only)",
    )

    parser = argparse.ArgumentParser(
        prog="rank3",
        description="Rank-at-least-3 certificates for y^2 = x^3 - a^2 x + b^2 and y^2 = x^3 - a^2 x + b^6.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pell", parents=[common], help="solutions of a^2 - 3b^2 = 1")
    p.add_argument("--count", type=_positive_int, required=True, help="number of admissible pairs")
    p.add_argument("--all", action="store_true", help="also list the non-admissible pairs in between")

    p = sub.add_parser("analyze", parents=[common, certify_flags], help="certify one family member")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = sub.add_parser("scan", parents=[common, certify_flags], help="certify many family members")
    p.add_argument("--family", choices=FAMILIES, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pell-count", type=_positive_int, help="first K admissible Pell pairs")
    src.add_argument("--pairs", help='CSV file with header "a,b"')
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")

    p = sub.add_parser("point", parents=[common], help="exact group-law arithmetic on a family curve")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--op", choices=["double", "add", "mul"], required=True)
    p.add_argument(
        "--args", nargs="+", required=True,
        help="points as P1/P2/P3, -P1 (or ~P1), 'infinity' or 'x,y'; mul takes an integer first",
    )
    return parser


def _emit(text: str, stream: TextIO) -> None:
    stream.write(text)
    stream.flush()


def _open_output(cfg: RunConfig, stdout: TextIO):
    if cfg.output_path is None:
        return stdout, False
    try:
        return open(cfg.output_path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.output_path}: {exc}") from None


def cmd_pell(args, cfg: RunConfig, out: TextIO) -> int:
    found, chosen = 0, []
    for p in pairs():
        ok = admissible(p)
        if ok or args.all:
            chosen.append(p)
        if ok:
            found += 1
            if found == args.count:
                break
    _emit(report.render_pell(report.pell_records(chosen), cfg.output_format), out)
    return EXIT_OK


def _render_one(cert, fmt: str) -> str:
    if fmt == "json":
        return report.dumps_json(report.certificate_to_dict(cert))
    if fmt == "csv":
        return report.dumps_csv([report.certificate_to_dict(cert)])
    return report.dumps_text(cert)


def cmd_analyze(args, cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if args.a < 1 or args.b < 1:
        raise UsageError("--a and --b must be positive integers")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        inst = build(args.family, args.a, args.b)
    for w in caught:
        err.write(f"warning: {w.message}\n")
    cert = certify(inst, cfg.certify_options())
    _emit(_render_one(cert, cfg.output_format), out)
    return EXIT_OK if cert.rank_lower_bound == 3 else EXIT_INCONCLUSIVE


def _read_pairs(path: str) -> list[tuple[int, int]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["a", "b"]:
                raise UsageError(f'{path}: expected header "a,b"')
            rows = []
            for line, row in enumerate(reader, start=2):
                try:
                    rows.append((int(row["a"]), int(row["b"])))
                except (TypeError, ValueError):
                    raise UsageError(f"{path}:{line}: malformed row {row}") from None
            return rows
    except OSError as exc:
        raise UsageError(f"cannot read pairs file: {exc}") from None


def cmd_scan(args, cfg: RunConfig, out: TextIO) -> int:
    source = args.pell_count if args.pell_count is not None else _read_pairs(args.pairs)
    if args.pell_count is not None and args.family != "square":
        raise UsageError("--pell-count applies to the square family only")
    all_ok = True
    fmt = cfg.output_format
    if fmt == "csv":
        _emit(",".join(report.csv_fields()) + "\n", out)
    for cert in iter_scan(args.family, source, cfg.certify_options(), workers=args.jobs):
        all_ok &= cert.rank_lower_bound == 3
        d = report.certificate_to_dict(cert)
        if fmt == "json":
            _emit(report.dumps_jsonl([d]), out)
        elif fmt == "csv":
            _emit(report.dumps_csv([d]).split("\n", 1)[1], out)
        else:
            _emit(report.dumps_text(cert) + "\n", out)
    return EXIT_OK if all_ok else EXIT_INCONCLUSIVE


def _parse_point(token: str, inst) -> Point:
    t = token.strip()
    if t.lower() in ("infinity", "inf", "o"):
        return INFINITY
    sign = 1
    if t[:1] in ("-", "~") and t[1:].upper() in ("P1", "P2", "P3"):
        sign, t = -1, t[1:]
    if t.upper() in ("P1", "P2", "P3"):
        P = inst.points[int(t[1]) - 1]
        return negate(inst.curve, P) if sign < 0 else P
    parts = t.split(",")
    if len(parts) != 2:
        raise UsageError(f"malformed point {token!r}")
    try:
        x, y = to_rational(parts[0].strip()), to_rational(parts[1].strip())
    except (ValueError, TypeError, ZeroDivisionError):
        raise UsageError(f"malformed point {token!r}") from None
    try:
        return inst.curve.point(x, y)
    except PointNotOnCurve:
        raise UsageError(f"{token!r} is not on {inst.curve}") from None


def cmd_point(args, cfg: RunConfig, out: TextIO) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        inst = build(args.family, args.a, args.b)
    c, a = inst.curve, args.args
    need = {"double": 1, "add": 2, "mul": 2}[args.op]
    if len(a) != need:
        raise UsageError(f"--op {args.op} takes {need} argument(s)")
    if args.op == "double":
        R = double(c, _parse_point(a[0], inst))
    elif args.op == "add":
        R = add(c, _parse_point(a[0], inst), _parse_point(a[1], inst))
    else:
        try:
            n = int(a[0])
        except ValueError:
            raise UsageError(f"multiplier {a[0]!r} is not an integer") from None
        R = scalar_mul(c, n, _parse_point(a[1], inst))
    if cfg.output_format == "json":
        obj = {"point": "infinity"} if R.is_identity else {"x": format_rational(R.x), "y": format_rational(R.y)}
        text = report.dumps_json(obj)
    elif cfg.output_format == "csv":
        text = "x,y\n" + ("infinity,infinity\n" if R.is_identity else f"{format_rational(R.x)},{format_rational(R.y)}\n")
    else:
        text = "infinity\n" if R.is_identity else f"x = {format_rational(R.x)}\ny = {format_rational(R.y)}\n"
    _emit(text, out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "-P1" would otherwise be taken for an option flag
    argv = ["~" + a[1:] if _NEG_POINT.match(a) else a for a in argv]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = None
    close = False
    try:
        cfg = _config(args)
        out, close = _open_output(cfg, stdout)
        if args.command == "pell":
            return cmd_pell(args, cfg, out)
        if args.command == "analyze":
            return cmd_analyze(args, cfg, out, stderr)
        if args.command == "scan":
            return cmd_scan(args, cfg, out)
        return cmd_point(args, cfg, out)
    except (UsageError, NotOnCurve, SingularCurve, PointNotOnCurve, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        if out is sys.stdout:
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_INCONCLUSIVE
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    raise SystemExit(main())
