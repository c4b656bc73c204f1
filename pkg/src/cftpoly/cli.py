"""Command-line front end: ``cftpoly <command> [options]``.

Exit status is 0 on success, 1 when a check fails and 2 on a usage error.
Settings come from flags, then a ``key=value`` config file (``--config``),
then the environment (``CFTPOLY_OUTPUT_DIR``), then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields

import mpmath

from . import __version__
from .etapoly import eval_sequence, gen_table
from .inequality import (
    assumption1_certificate,
    assumption2_certificate,
    assumption3_certificate,
    delta,
    delta_value,
    main_term,
    scan_cft,
    scan_delta_sign,
    smallest_x0,
)
from .polycore import as_rational
from .roots import complex_roots, isolate_real_roots, refine
from .verify import CSV_HEADER, TABLE_IDS, figure_dataset, reproduce

OUTPUT_ENV = "CFTPOLY_OUTPUT_DIR"


class UsageError(Exception):
    pass


@dataclass
class Config:
    n_max: int = 30
    precision_bits: int = 128
    float_bits: int = 113
    threads: int = 1
    output_dir: str = ""
    format: str = "json"

    def validate(self):
        if self.n_max < 2:
            raise UsageError("--n-max must be >= 2")
        if self.precision_bits < 16:
            raise UsageError("--bits must be >= 16")
        if self.float_bits < 16:
            raise UsageError("--float-bits must be >= 16")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from None
    known = {f.name for f in fields(Config)}
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config: line {num} is not key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"--config: unknown key {key!r} on line {num}")
        out[key] = value
    return out


def build_config(args) -> Config:
    cfg = Config(output_dir=os.environ.get(OUTPUT_ENV, ""))
    if args.config:
        for key, value in read_config_file(args.config).items():
            setattr(cfg, key, value if key in ("output_dir", "format") else _int(value, key))
    for key in ("n_max", "precision_bits", "float_bits", "threads", "output_dir", "format"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# argument types


def _int(text, name):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise UsageError(f"{_flag(name)}: expected an integer, got {text!r}") from None


def _rat(text, name):
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise UsageError(f"{_flag(name)}: expected a rational like 3, 2.0554 or 7/4, got {text!r}") from None


def _flag(name):
    return "--" + name.replace("_", "-")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file with defaults")
    common.add_argument("--threads", "--workers", dest="threads", type=str, help="worker processes for scans")
    common.add_argument("--output-dir", dest="output_dir", help=f"also write results here (default ${OUTPUT_ENV})")
    common.add_argument("--format", choices=("json", "csv"), help="output format")

    p = _Parser(prog="cftpoly", description="Exact checks for the polynomial Chern-Fu-Tang inequality.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("gen", parents=[common], help="emit P_0..P_N")
    s.add_argument("--n-max", dest="n_max", required=True)

    s = sub.add_parser("eval", parents=[common], help="values P_n(x) for n <= N")
    s.add_argument("--x", required=True)
    s.add_argument("--n-max", dest="n_max", required=True)

    s = sub.add_parser("delta", parents=[common], help="Delta_{a,b}, optionally evaluated")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--at")

    s = sub.add_parser("scan-cft", parents=[common], help="CFT inequality over n, m <= N, 2 <= k <= K")
    s.add_argument("--n-max", dest="n_max", required=True)
    s.add_argument("--k-max", required=True)

    s = sub.add_parser("scan-delta", parents=[common], help="sign of Delta_{a,b} on an x grid")
    s.add_argument("--b", required=True)
    s.add_argument("--a-max", required=True)
    s.add_argument("--a-min")
    s.add_argument("--x", required=True, help="comma-separated rationals")

    s = sub.add_parser("assumptions", parents=[common], help="certificates for the induction hypotheses")
    s.add_argument("--b", required=True)
    s.add_argument("--x0", required=True)
    s.add_argument("--a", help="also certify the (a, b) coupling condition")

    s = sub.add_parser("smallest-x0", parents=[common], help="least admissible x0 for b")
    s.add_argument("--b", required=True)
    s.add_argument("--bits", dest="precision_bits")

    s = sub.add_parser("roots", parents=[common], help="real (and optionally complex) roots of Delta_{a,b}")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--complex", action="store_true")
    s.add_argument("--bits", dest="precision_bits")
    s.add_argument("--float-bits", dest="float_bits")

    s = sub.add_parser("tables", parents=[common], help="reproduce the published tables and figures")
    s.add_argument("--only", help=", ".join(TABLE_IDS))

    s = sub.add_parser("figures", parents=[common], help="root CSV for a figure")
    s.add_argument("--which", required=True, type=str.lower, choices=("fig1", "fig2"))
    s.add_argument("--a-max")
    s.add_argument("--float-bits", dest="float_bits")

    s = sub.add_parser("main-term", parents=[common], help="asymptotic main term against exact Delta")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--bits", dest="precision_bits")
    return p


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, cfg: Config, stem: str, stdout):
        self.cfg = cfg
        self.stem = stem
        self.stdout = stdout

    def emit(self, text: str, ext: str | None = None):
        if not text.endswith("\n"):
            text += "\n"
        self.stdout.write(text)
        if self.cfg.output_dir:
            os.makedirs(self.cfg.output_dir, exist_ok=True)
            path = os.path.join(self.cfg.output_dir, f"{self.stem}.{ext or self.cfg.format}")
            with open(path, "w", newline="") as fh:
                fh.write(text)

    def report(self, rep):
        if self.cfg.format == "json":
            self.emit(rep.to_json())
        else:
            self.emit(rep.summary(), "txt")
        return 0 if rep.passed else 1


def _csv(rows, header=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args, cfg, out):
    table = gen_table(cfg.n_max)
    if cfg.format == "csv":
        rows = [(n, m, c.numerator, c.denominator) for n, p in enumerate(table.polys) for m, c in enumerate(p.coeffs)]
        out.emit(_csv(rows, ["n", "m", "num", "den"]))
    else:
        out.emit(_dumps({"n_max": table.n_max, "polys": table.to_list()}))
    return 0


def cmd_eval(args, cfg, out):
    seq = eval_sequence(_rat(args.x, "x"), cfg.n_max)
    if cfg.format == "json":
        out.emit(_dumps({"x": str(seq.x), "values": [str(v) for v in seq.values]}))
    else:
        out.emit("n,num,den\n" + "\n".join(seq.csv_rows()))
    return 0


def _ab(args, need_gap=0):
    a, b = _int(args.a, "a"), _int(args.b, "b")
    if b < 0 or a <= b + need_gap:
        raise UsageError(f"--a must exceed --b{' + %d' % need_gap if need_gap else ''} and --b must be >= 0")
    return a, b


def cmd_delta(args, cfg, out):
    a, b = _ab(args)
    if args.at is not None:
        val = delta_value(a, b, _rat(args.at, "at"))
        if cfg.format == "json":
            out.emit(_dumps({"a": a, "b": b, "x": str(_rat(args.at, "at")), "value": str(val)}))
        else:
            out.emit(str(val), "txt")
        return 0
    poly = delta(a, b).poly
    if cfg.format == "json":
        out.emit(_dumps({"a": a, "b": b, "poly": poly.to_dict(), "text": str(poly)}))
    else:
        out.emit(_csv([(m, c.numerator, c.denominator) for m, c in enumerate(poly.coeffs)], ["m", "num", "den"]))
    return 0


def cmd_scan_cft(args, cfg, out):
    k_max = _int(args.k_max, "k_max")
    if k_max < 2:
        raise UsageError("--k-max must be >= 2")
    return out.report(scan_cft(cfg.n_max, k_max, workers=cfg.threads))


def cmd_scan_delta(args, cfg, out):
    b = _int(args.b, "b")
    a_max = _int(args.a_max, "a_max")
    a_min = _int(args.a_min, "a_min") if args.a_min else b + 2
    if b < 0 or a_min <= b or a_max < a_min:
        raise UsageError("--a-min/--a-max must satisfy b < a_min <= a_max")
    xs = [_rat(v.strip(), "x") for v in args.x.split(",") if v.strip()]
    if not xs:
        raise UsageError("--x: no values given")
    return out.report(scan_delta_sign(b, range(a_min, a_max + 1), xs, workers=cfg.threads))


def cmd_assumptions(args, cfg, out):
    b = _int(args.b, "b")
    if b < 0:
        raise UsageError("--b must be >= 0")
    x0 = _rat(args.x0, "x0")
    if x0 <= 0:
        raise UsageError("--x0 must be positive")
    reps = [assumption1_certificate(b, x0)]
    if b >= 1:
        reps.append(assumption2_certificate(b, x0))
    if args.a is not None:
        a = _int(args.a, "a")
        if a <= b + 1:
            raise UsageError("--a must exceed --b + 1")
        reps.append(assumption3_certificate(a, b, x0))
    if cfg.format == "json":
        out.emit(_dumps([r.to_dict() for r in reps]))
    else:
        out.emit("\n".join(r.summary() for r in reps), "txt")
    return 0 if all(r.passed for r in reps) else 1


def _interval_row(iv, digits=30):
    return {"lo": str(iv.lo), "hi": str(iv.hi), "approx": iv.to_decimal(digits)}


def cmd_smallest_x0(args, cfg, out):
    b = _int(args.b, "b")
    if b < 2:
        raise UsageError("--b must be >= 2")
    iv = smallest_x0(b, cfg.precision_bits)
    digits = max(10, int(cfg.precision_bits * 0.30103) - 2)
    if cfg.format == "json":
        out.emit(_dumps({"b": b, "bits": cfg.precision_bits, "x0": _interval_row(iv, digits)}))
    else:
        out.emit(_csv([(b, iv.lo, iv.hi, iv.to_decimal(digits))], ["b", "lo", "hi", "approx"]))
    return 0


def cmd_roots(args, cfg, out):
    a, b = _ab(args)
    poly = delta(a, b).poly
    pid = f"D_{a}_{b}"
    if not args.complex:
        ivs = [refine(poly, iv, cfg.precision_bits) for iv in isolate_real_roots(poly)]
        digits = max(6, int(cfg.precision_bits * 0.30103))
        if cfg.format == "json":
            out.emit(_dumps({"poly_id": pid, "real_roots": [_interval_row(iv, digits) for iv in ivs]}))
        else:
            rows = [(pid, a, b, iv.lo.numerator, iv.lo.denominator, iv.hi.numerator, iv.hi.denominator) for iv in ivs]
            out.emit(_csv(rows, ["poly_id", "a", "b", "lo_num", "lo_den", "hi_num", "hi_den"]))
        return 0
    rs = complex_roots(poly, cfg.float_bits, source=pid)
    rows = []
    for r in rs.complex_roots:
        iv = r.interval
        rows.append([
            pid, a, b, "real" if r.real else "complex",
            mpmath.nstr(r.re, 34), mpmath.nstr(0 if r.real else r.im, 34), mpmath.nstr(r.residual, 6),
            iv.lo.numerator if iv else "", iv.lo.denominator if iv else "",
            iv.hi.numerator if iv else "", iv.hi.denominator if iv else "",
        ])
    if cfg.format == "json":
        keys = CSV_HEADER[:11]
        out.emit(_dumps({"poly_id": pid, "float_bits": cfg.float_bits,
                         "roots": [dict(zip(keys, (str(v) for v in row))) for row in rows]}))
    else:
        out.emit(_csv(rows, CSV_HEADER[:11]))
    return 0 if all(r.converged for r in rs.complex_roots) else 1


def cmd_tables(args, cfg, out):
    ids = TABLE_IDS if not args.only else [s.strip() for s in args.only.split(",") if s.strip()]
    try:
        reps = [reproduce(t) for t in ids]
    except ValueError as exc:
        raise UsageError(f"--only: {exc}") from None
    if cfg.format == "json":
        out.emit(_dumps([r.to_dict() for r in reps]))
    else:
        out.emit("\n".join(r.summary() for r in reps), "txt")
    return 0 if all(r.passed for r in reps) else 1


def cmd_figures(args, cfg, out):
    which = args.which.upper()
    a_max = _int(args.a_max, "a_max") if args.a_max else None
    lo = 4 if which == "FIG1" else 30
    if a_max is not None and a_max < lo:
        raise UsageError(f"--a-max must be >= {lo} for {args.which}")
    path = figure_dataset(which, a_max, cfg.output_dir or ".", cfg.float_bits)
    out.stdout.write(path + "\n")
    return 0


def cmd_main_term(args, cfg, out):
    a, b = _ab(args)
    res = main_term(a, b, _rat(args.x, "x"), cfg.precision_bits)
    digits = 20
    body = {
        "a": a, "b": b, "x": str(res.params.x),
        "A": str(res.params.A), "B": str(res.params.B), "hypothesis_holds": res.params.valid,
        "main_term": mpmath.nstr(res.main, digits), "delta": mpmath.nstr(mpmath.mpf(res.delta.numerator) / res.delta.denominator, digits),
        "ratio": mpmath.nstr(res.ratio, digits), "precision_bits": res.precision_bits,
        "precision_agrees": res.precision_agrees, "in_window": res.in_window, "warning": res.warning,
    }
    if cfg.format == "json":
        out.emit(_dumps(body))
    else:
        out.emit(_csv([list(body.values())], list(body)))
    return 0 if res.passed else 1


COMMANDS = {
    "gen": cmd_gen, "eval": cmd_eval, "delta": cmd_delta, "scan-cft": cmd_scan_cft,
    "scan-delta": cmd_scan_delta, "assumptions": cmd_assumptions, "smallest-x0": cmd_smallest_x0,
    "roots": cmd_roots, "tables": cmd_tables, "figures": cmd_figures, "main-term": cmd_main_term,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        if getattr(args, "n_max", None) is not None:
            args.n_max = _int(args.n_max, "n_max")
        for key in ("precision_bits", "float_bits", "threads"):
            if getattr(args, key, None) is not None:
                setattr(args, key, _int(getattr(args, key), key))
        cfg = build_config(args)
        return COMMANDS[args.command](args, cfg, Output(cfg, args.command, stdout))
    except UsageError as exc:
        stderr.write(f"cftpoly: error: {exc}\n")
        return 2


def main():
    sys.exit(run())

