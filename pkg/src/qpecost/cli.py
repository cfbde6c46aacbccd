"""Command line front end: ``qpecost {calibrate,simulate,summarize,sweep,cost}``.

Exit codes: 0 success, 1 a regression or acceptance check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
import time
import warnings
from pathlib import Path

from .acpa import VacuousBoundWarning
from .calibration import calibrate
from .cost import Method, cost_breakdown, ratio_surface
from .experiment import ALGORITHMS, ExperimentConfig, read_records, run_campaign, summarize

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

SWEEP_COLUMNS = ["method_a", "method_b", "n", "k", "mode", "ratio"]


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc
    with fh:
        yield fh


def _csv_text(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# --- calibrate ---------------------------------------------------------------


def cmd_calibrate(args) -> int:
    start = time.perf_counter()
    report = calibrate()
    elapsed = time.perf_counter() - start
    if args.format == "csv":
        rows = [c.as_row() for c in report.checks]
        text = _csv_text(rows, ["name", "value", "target", "tolerance", "enforced", "ok"])
    else:
        d = report.to_dict()
        d["runtime_s"] = elapsed
        d["passed"] = report.passed(args.strict)
        text = json.dumps(d, indent=2) + "\n"
    with _output(args.out) as fh:
        fh.write(text)
    failures = report.failures(args.strict)
    for c in failures:
        print(
            f"calibration: {c.name} = {c.value:.6g}, target {c.target:.6g} +/- {c.tolerance:g} "
            f"(off by {c.value - c.target:+.3g})",
            file=sys.stderr,
        )
    return EXIT_FAILED if failures else EXIT_OK


# --- simulate ----------------------------------------------------------------

_SIM_FLAGS = {
    "algorithm": "algorithm",
    "n": "n",
    "k": "k",
    "mode": "noise",
    "eta": "eta",
    "phase": "phase",
    "phase_bits": "phase_bits",
    "grid": "grid",
    "reps": "repetitions",
    "seed": "seed",
    "c": "c",
    "timing": "timing",
}


def _experiment_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        try:
            data = ExperimentConfig.load(args.config).to_dict()
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad config {args.config}: {exc}") from exc
    for flag, key in _SIM_FLAGS.items():
        value = getattr(args, flag)
        if value is not None and value is not False:
            data[key] = value
    for key in ("algorithm", "n"):
        if key not in data:
            raise UsageError(f"--{key} is required (or give it in --config)")
    try:
        return ExperimentConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_simulate(args) -> int:
    cfg = _experiment_config(args)
    if args.save_config:
        Path(args.save_config).write_text(cfg.to_json())
    records = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        with _output(args.out) as fh:
            for rec in run_campaign(cfg, workers=args.workers):
                fh.write(rec.to_json() + "\n")
                records.append(rec)
    summary = summarize(records)
    summary["config_hash"] = cfg.config_hash()
    summary_stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(json.dumps(summary, sort_keys=True), file=summary_stream)
    if args.min_success is not None and summary["success_rate"] < args.min_success:
        print(
            f"success rate {summary['success_rate']:.4f} below floor {args.min_success}", file=sys.stderr
        )
        return EXIT_FAILED
    return EXIT_OK


def cmd_summarize(args) -> int:
    try:
        records = read_records(args.records)
    except OSError as exc:
        raise UsageError(f"cannot read {args.records}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.records} is not a run-record file: {exc}") from exc
    print(json.dumps(summarize(records), sort_keys=True))
    return EXIT_OK


# --- sweep -------------------------------------------------------------------


def sweep_rows(method_a, method_b, n_min, n_max, k_min, k_max, mode) -> list[dict]:
    a, b = Method.coerce(method_a), Method.coerce(method_b)
    if Method.FPE in (a, b):
        if n_min is not None and n_min < 2:
            raise UsageError("FPE sweeps need n >= 2 (s2 is singular at n = 1)")
        n_min = 2 if n_min is None else n_min
    n_min = 1 if n_min is None else n_min
    if n_min > n_max or k_min > k_max:
        raise UsageError("empty sweep range")
    if k_min < 3:
        raise UsageError("k must be >= 3")
    cells = ratio_surface(a, b, range(n_min, n_max + 1), range(k_min, k_max + 1), mode)
    return [
        {"method_a": c.method_a, "method_b": c.method_b, "n": c.n, "k": c.k, "mode": c.mode, "ratio": repr(c.ratio)}
        for c in cells
    ]


def cmd_sweep(args) -> int:
    rows = sweep_rows(args.method_a, args.method_b, args.n_min, args.n_max, args.k_min, args.k_max, args.mode)
    with _output(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps([{**r, "ratio": float(r["ratio"])} for r in rows], indent=1) + "\n")
        else:
            fh.write(_csv_text(rows, SWEEP_COLUMNS))
    return EXIT_OK


# --- cost --------------------------------------------------------------------


def cost_rows(methods, n, k, gamma, mode, c, literal_gamma_power=False) -> list[dict]:
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        for m in methods:
            if Method.coerce(m) is Method.FPE and n < 2:
                raise UsageError("FPE cost needs n >= 2")
            rows.append(
                cost_breakdown(m, n, k, gamma, mode, c, literal_gamma_power=literal_gamma_power).as_dict()
            )
    return rows


def cmd_cost(args) -> int:
    methods = args.method or [m.value for m in Method]
    rows = cost_rows(methods, args.n, args.k, args.gamma, args.mode, args.c_exponent, args.literal_gamma_power)
    if any(r["log_domain_only"] for r in rows):
        print(f"note: n={args.n} exceeds the exact range; counts are log2 only", file=sys.stderr)
    with _output(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps(rows, indent=1) + "\n")
        else:
            fh.write(_csv_text(rows, list(rows[0])))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpecost", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    cal = sub.add_parser("calibrate", help="re-derive the repetition constants and check them")
    cal.add_argument("--format", choices=["json", "csv"], default="json")
    cal.add_argument("--out", default=None)
    cal.add_argument("--strict", action="store_true", help="also enforce informational checks")
    cal.set_defaults(func=cmd_calibrate)

    sim = sub.add_parser("simulate", help="seeded Monte Carlo runs written as JSON Lines")
    sim.add_argument("--config", help="JSON experiment config; flags override its values")
    sim.add_argument("--save-config", help="write the effective config here")
    sim.add_argument("--algorithm", choices=ALGORITHMS)
    sim.add_argument("--n", type=int)
    sim.add_argument("--k", type=int)
    sim.add_argument("--mode", choices=["perfect", "imperfect", "worst_case", "stochastic"])
    sim.add_argument("--eta", type=float)
    sim.add_argument("--phase", help='explicit phase as a binary fraction, e.g. "0.101101"')
    sim.add_argument("--phase-bits", type=int, help="bit length of random phases (default n)")
    sim.add_argument("--grid", action="store_true", help="sweep every phase of --phase-bits bits")
    sim.add_argument("--reps", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--c", type=float, help="overall failure budget (Kitaev)")
    sim.add_argument("--timing", action="store_true", help="record wall time per run (breaks byte-identity)")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--min-success", type=float, help="exit 1 if the success rate is below this")
    sim.add_argument("--format", choices=["jsonl"], default="jsonl")
    sim.add_argument("--out", default=None)
    sim.set_defaults(func=cmd_simulate)

    sm = sub.add_parser("summarize", help="recompute the summary line from a JSON Lines record file")
    sm.add_argument("records")
    sm.set_defaults(func=cmd_summarize)

    sw = sub.add_parser("sweep", help="U-invocation ratio surface as CSV")
    sw.add_argument("--method-a", default="kitaev", choices=[m.value for m in Method])
    sw.add_argument("--method-b", default="acpa", choices=[m.value for m in Method])
    sw.add_argument("--n-min", type=int, default=None)
    sw.add_argument("--n-max", type=int, default=100)
    sw.add_argument("--k-min", type=int, default=3)
    sw.add_argument("--k-max", type=int, default=10)
    sw.add_argument("--mode", choices=["perfect", "imperfect"], default="perfect")
    sw.add_argument("--format", choices=["csv", "json"], default="csv")
    sw.add_argument("--out", default=None)
    sw.set_defaults(func=cmd_sweep)

    co = sub.add_parser("cost", help="closed-form measurement and gate counts")
    co.add_argument("--method", action="append", choices=[m.value for m in Method])
    co.add_argument("--n", type=int, required=True)
    co.add_argument("--k", type=int, default=3)
    co.add_argument("--gamma", type=int, default=1)
    co.add_argument("--c-exponent", type=float, default=None)
    co.add_argument("--mode", choices=["perfect", "imperfect"], default="perfect")
    co.add_argument("--literal-gamma-power", action="store_true", help="read the gate factor as gamma**(2**n-1)")
    co.add_argument("--format", choices=["csv", "json"], default="csv")
    co.add_argument("--out", default=None)
    co.set_defaults(func=cmd_cost)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qpecost {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qpecost {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
