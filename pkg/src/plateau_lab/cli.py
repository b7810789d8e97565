"""plateau-lab command line.

Exit codes: 0 all checks pass, 1 a mathematical check failed (a finding),
2 usage or I/O error, 3 two methods that must agree did not.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import reports
from .field import GF, FieldSpec, field
from .fileio import ParseError, file_digest, read_set_file, read_truth_table, write_truth_table
from .functions import PAryFunction, relative_trace_power, trace_power
from .pgds import PreconditionError
from .reports import INTERNAL, OK, USAGE


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers

def _field_from_args(args) -> GF:
    if args.p is None or args.n is None:
        raise UsageError("--p and --n are required")
    try:
        if getattr(args, "modulus", None):
            coeffs = tuple(int(c) for c in args.modulus.replace(",", " ").split())
            return field(FieldSpec(args.p, args.n, coeffs))
        return field(args.p, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_range(text: str) -> list[int]:
    """'a:b' (half-open), 'a-b' (inclusive) or 'a,b,c'."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return list(range(int(lo), int(hi)))
        if "-" in text[1:]:
            lo, hi = text.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot read exponent range {text!r}") from None


def _single_d(args) -> int:
    if args.d is None:
        raise UsageError("--d is required")
    ds = _parse_range(args.d)
    if len(ds) != 1:
        raise UsageError("this command takes a single --d")
    if ds[0] < 0:
        raise UsageError("--d must be non-negative")
    return ds[0]


def _function_from_args(args):
    """(function, source record) from --power, --trace-power or --file."""
    chosen = [x for x in (args.power, args.trace_power, args.file) if x is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --power, --trace-power, --file")
    if args.file:
        path = args.file[0]
        F = read_truth_table(path)
        return F, {"file": Path(path).name, "sha256": file_digest(path)}
    F = _field_from_args(args)
    if args.trace_power is not None:
        if args.trace_power < 0:
            raise UsageError("exponent must be non-negative")
        return trace_power(F, args.trace_power), {"trace_power": args.trace_power}
    d = args.power
    if d < 0:
        raise UsageError("exponent must be non-negative")
    m = args.m if args.m is not None else F.n
    if F.n % m:
        raise UsageError(f"--m {m} must divide --n {F.n}")
    cod = F if m == F.n else field(F.p, m)
    return relative_trace_power(F, cod, d), {"power": d, "m": m}


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, report: dict, started: float, csv_rows=None):
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - started, 3)
    if args.format == "csv":
        if csv_rows is None:
            raise UsageError(f"--format csv is not available for '{args.command}'")
        _emit(args, reports.csv_text(csv_rows))
    else:
        _emit(args, reports.dumps(report))


# ---------------------------------------------------------------------------
# verbs

def cmd_field(args) -> int:
    started = time.perf_counter()
    report, status = reports.field_report(_field_from_args(args))
    _emit_report(args, report, started)
    return status


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    F, source = _function_from_args(args)
    report, status = reports.analyze_report(F, source, jobs=args.jobs)
    rows = None
    if args.format == "csv":
        f = F if isinstance(F, PAryFunction) else None
        if f is None:
            from .functions import component

            f = component(F, 1)
        rows = reports.spectrum_csv(f)
    _emit_report(args, report, started, rows)
    return status


def cmd_partition(args) -> int:
    started = time.perf_counter()
    if args.p is not None and args.p != 3:
        raise UsageError("the partition check is defined for p = 3")
    args.p = 3
    F = _field_from_args(args)
    try:
        report, status = reports.partition_report(F, _single_d(args), jobs=args.jobs)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    _emit_report(args, report, started)
    return status


def cmd_xcorr(args) -> int:
    started = time.perf_counter()
    F = _field_from_args(args)
    report, status, rows = reports.xcorr_report(F, _single_d(args), jobs=args.jobs)
    _emit_report(args, report, started, rows)
    return status


def cmd_kronecker(args) -> int:
    started = time.perf_counter()
    if not args.file or len(args.file) != 2:
        raise UsageError("kronecker needs two --file arguments (f then g)")
    fns = [read_truth_table(p) for p in args.file]
    if not all(isinstance(f, PAryFunction) for f in fns):
        raise UsageError("kronecker takes p-ary truth tables")
    sources = [{"file": Path(p).name, "sha256": file_digest(p)} for p in args.file]
    report, status, h = reports.kronecker_report(fns[0], fns[1], sources)
    if args.table_out:
        write_truth_table(h, args.table_out)
        report["table_out"] = Path(args.table_out).name
    _emit_report(args, report, started)
    return status


def cmd_pgds_verify(args) -> int:
    started = time.perf_counter()
    if not args.file or len(args.file) != 1:
        raise UsageError("pgds-verify needs one --file (a set file)")
    sf = read_set_file(args.file[0])
    report, status = reports.pgds_report(sf.group, sf.members, Path(args.file[0]).name)
    _emit_report(args, report, started)
    return status


def cmd_matrix_verify(args) -> int:
    started = time.perf_counter()
    F, source = _function_from_args(args)
    if not isinstance(F, PAryFunction):
        raise UsageError("matrix-verify takes a p-ary function (use --trace-power or a p-ary file)")
    report, status = reports.matrix_report(F, source)
    _emit_report(args, report, started)
    return status


def cmd_sweep(args) -> int:
    F = _field_from_args(args)
    if not args.out:
        raise UsageError("sweep needs --out DIR")
    ds = _parse_range(args.d) if args.d else list(range(1, F.order - 1))
    if any(d < 0 for d in ds):
        raise UsageError("exponents must be non-negative")
    if args.bijective_only:
        ds = [d for d in ds if math.gcd(d, F.order - 1) == 1]
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    unknown = [c for c in checks if c not in reports.SWEEP_CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {list(reports.SWEEP_CHECKS)}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log = out / "resume.log"
    done = set()
    if log.exists():
        done = {int(x) for x in log.read_text().split() if x.strip().isdigit()}
    todo = [d for d in ds if d not in done or not (out / f"d_{d}.json").exists()]

    def run(d: int) -> int:
        entry = reports.sweep_one(F, d, checks)
        record = reports.header("sweep", F, {"d": d, "checks": list(checks)})
        record["result"] = entry
        (out / f"d_{d}.json").write_text(reports.dumps(record))
        return d

    # the log is appended as each d finishes so interrupted sweeps resume
    with log.open("a") as fh:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                for d in pool.map(run, todo):
                    fh.write(f"{d}\n")
                    fh.flush()
        else:
            for d in todo:
                fh.write(f"{run(d)}\n")
                fh.flush()

    entries = [json.loads((out / f"d_{d}.json").read_text())["result"] for d in ds]
    (out / "summary.csv").write_text(reports.summary_csv(entries))
    sys.stdout.write(f"{len(ds)} exponents ({len(todo)} computed, {len(ds) - len(todo)} resumed)\n")
    return OK


COMMANDS = {
    "field": cmd_field,
    "analyze": cmd_analyze,
    "partition": cmd_partition,
    "xcorr": cmd_xcorr,
    "kronecker": cmd_kronecker,
    "pgds-verify": cmd_pgds_verify,
    "matrix-verify": cmd_matrix_verify,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--n", type=int, help="extension degree of the domain")
    common.add_argument("--m", type=int, help="codomain degree for --power (must divide n)")
    common.add_argument("--modulus", help="override modulus coefficients c_0 ... c_n")
    common.add_argument("--power", type=int, help="vectorial x -> x^d (relative trace when m < n)")
    common.add_argument("--trace-power", type=int, help="p-ary x -> Tr(x^d)")
    common.add_argument("--d", help="exponent, or a range a:b / a-b / a,b,c for sweep")
    common.add_argument("--file", action="append", help="truth-table or set file")
    common.add_argument("--out", help="output file (directory for sweep)")
    common.add_argument("--table-out", help="kronecker: write the direct sum truth table here")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")
    common.add_argument("--bijective-only", action="store_true",
                        help="sweep: skip d with gcd(d, p^n - 1) != 1")
    common.add_argument("--checks", default="classify,graph-pgds,partition,xcorr",
                        help="sweep: comma list of checks")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock seconds to the report (breaks byte-identity)")
    parser = argparse.ArgumentParser(prog="plateau-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.jobs < 1:
        sys.stderr.write("error: --jobs must be >= 1\n")
        return USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except ArithmeticError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
