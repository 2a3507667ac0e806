"""Command-line front end.

Commands: ``distance``, ``align``, ``profile``, ``paired-compare``,
``simulate``.  Sample files hold one value per line (or a single CSV
column, optional header); study files are CSV with the header
``subject,treatment,visit,value``.  All outputs are UTF-8 CSV on
standard output with numbers at 12 significant digits; warnings go to
standard error.

Exit codes: 0 success, 2 input/parse failure, 3 invalid flags or
configuration, 4 degenerate-math warning.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings as _warnings
from dataclasses import dataclass, field
from pathlib import Path

from .align import (
    DegenerateScale,
    SearchBounds,
    default_bounds,
    optimal_scale,
    optimal_shift,
    optimal_shift_scale,
    profile_shift_curve,
    profile_surface,
)
from .distance import Metric, ks_distance, mallows_distance
from .empirical import EmpiricalDist, SampleParseError, read_sample
from .inference import AllZeroDifferences, PairedShifts, paired_treatment_compare
from .simulate import InvalidParameter, SimulationConfig, run_simulation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_USAGE = 3
EXIT_DEGENERATE = 4


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


class StudyParseError(ValueError):
    """A paired-study file violates the expected schema."""

    def __init__(self, path, detail: str):
        self.path = str(path)
        super().__init__(f"{path}: {detail}")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this CLI reserves 2 for input
    # problems and reports flag problems with 3 instead
    def error(self, message):
        raise _UsageError(message)


@dataclass
class OutputEnvelope:
    """Machine-readable result block: field,value,units rows."""

    command: str
    inputs: list = field(default_factory=list)
    metric: str = ""
    r: float | None = None
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def emit(self, out=None, err=None) -> None:
        out = out or sys.stdout
        err = err or sys.stderr
        print("field,value,units", file=out)
        print(f"command,{self.command},", file=out)
        for key, value in self.inputs:
            print(f"{key},{_fmt(value)},", file=out)
        if self.metric:
            print(f"metric,{self.metric},", file=out)
        if self.r is not None:
            print(f"r,{_fmt(self.r)},", file=out)
        for name, value, units in self.results:
            print(f"{name},{_fmt(value)},{units}", file=out)
        for message in self.warnings:
            print(f"warning: {message}", file=err)


@dataclass(frozen=True)
class StudyRow:
    subject: str
    treatment: str
    visit: str
    value: float


@dataclass
class PairedStudyTable:
    """Long-format paired study: one measured value per row."""

    rows: list

    def treatments(self) -> list[str]:
        return sorted({r.treatment for r in self.rows})

    def subjects(self) -> list[str]:
        return sorted({r.subject for r in self.rows})

    def values(self, subject: str, treatment: str, visit: str) -> list[float]:
        return [
            r.value
            for r in self.rows
            if r.subject == subject and r.treatment == treatment and r.visit == visit
        ]


def read_study(path) -> PairedStudyTable:
    """Read a subject,treatment,visit,value CSV into a study table."""
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise StudyParseError(path, f"cannot read file ({exc.strerror})") from exc
    reader = csv.DictReader(text.splitlines())
    required = {"subject", "treatment", "visit", "value"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise StudyParseError(path, "header must contain subject,treatment,visit,value")
    rows = []
    for line_no, record in enumerate(reader, start=2):
        try:
            value = float(record["value"])
        except (TypeError, ValueError):
            raise StudyParseError(path, f"line {line_no}: value is not a number") from None
        if not math.isfinite(value):
            raise StudyParseError(path, f"line {line_no}: value is not finite")
        rows.append(
            StudyRow(
                subject=record["subject"].strip(),
                treatment=record["treatment"].strip(),
                visit=record["visit"].strip(),
                value=value,
            )
        )
    if not rows:
        raise StudyParseError(path, "no data rows")
    return PairedStudyTable(rows)


# ---------------------------------------------------------------------------
# argument parsing


def _add_metric_flags(sp, allow_both: bool) -> None:
    choices = ["mallows", "ks"] + (["both"] if allow_both else [])
    sp.add_argument("--metric", choices=choices, default="mallows")
    sp.add_argument("--r", type=float, default=1.0, help="Mallows order, at least 1")


def _add_bounds_flags(sp) -> None:
    sp.add_argument("--sigma-min", type=float, default=None)
    sp.add_argument("--sigma-max", type=float, default=None)
    sp.add_argument("--h-min", type=float, default=None)
    sp.add_argument("--h-max", type=float, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="distalign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("distance", help="distance between two sample files")
    d.add_argument("file_f")
    d.add_argument("file_g")
    _add_metric_flags(d, allow_both=True)
    d.set_defaults(func=cmd_distance)

    a = sub.add_parser("align", help="optimal shift/scale transform of F toward G")
    a.add_argument("file_f")
    a.add_argument("file_g")
    a.add_argument("--case", choices=["shift", "scale", "shift-scale"], default="shift")
    _add_metric_flags(a, allow_both=False)
    _add_bounds_flags(a)
    a.set_defaults(func=cmd_align)

    p = sub.add_parser("profile", help="objective values on a shift grid or (sigma, h) grid")
    p.add_argument("file_f")
    p.add_argument("file_g")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--curve", action="store_true", help="shift profile (default)")
    mode.add_argument("--surface", action="store_true", help="(sigma, h) surface")
    _add_metric_flags(p, allow_both=False)
    _add_bounds_flags(p)
    p.add_argument("--steps", type=int, default=101, help="curve points")
    p.add_argument("--steps-sigma", type=int, default=41)
    p.add_argument("--steps-h", type=int, default=41)
    p.set_defaults(func=cmd_profile)

    c = sub.add_parser("paired-compare", help="Wilcoxon comparison of per-subject shifts")
    c.add_argument("study_file")
    c.add_argument("--baseline", default="baseline", help="visit label of the first measurement")
    c.add_argument("--followup", default="followup", help="visit label of the second measurement")
    _add_metric_flags(c, allow_both=True)
    c.add_argument("--format", choices=["csv", "table"], default="csv")
    c.set_defaults(func=cmd_paired_compare)

    s = sub.add_parser("simulate", help="Monte-Carlo study of the estimators on normal data")
    s.add_argument("--config", default=None, help="key=value file; flags override it")
    s.add_argument("--situation", type=int, choices=[1, 2, 3], default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--replicates", type=int, default=None)
    s.add_argument("--mu1", type=float, default=None)
    s.add_argument("--sigma1", type=float, default=None)
    s.add_argument("--mu2", type=float, default=None)
    s.add_argument("--sigma2", type=float, default=None)
    s.add_argument("--r", type=float, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--metrics", default=None, help="comma list: mallows,ks")
    s.add_argument("--cases", default=None, help="comma list: shift,scale,shift-scale")
    s.set_defaults(func=cmd_simulate)
    return parser


def _selected_metrics(args) -> list[Metric]:
    if args.metric == "both":
        return [Metric.mallows(args.r), Metric.ks()]
    if args.metric == "mallows":
        return [Metric.mallows(args.r)]
    return [Metric.ks()]


def _distance_units(metric: Metric) -> str:
    return "data-units" if metric.kind == "mallows" else "dimensionless"


def _bounds_for(args, f, g) -> SearchBounds:
    base = default_bounds(f, g)
    s_lo, s_hi = base.sigma_range
    h_lo, h_hi = base.h_range
    if args.sigma_min is not None:
        s_lo = args.sigma_min
    if args.sigma_max is not None:
        s_hi = args.sigma_max
    if args.h_min is not None:
        h_lo = args.h_min
    if args.h_max is not None:
        h_hi = args.h_max
    return SearchBounds((s_lo, s_hi), (h_lo, h_hi))


# ---------------------------------------------------------------------------
# commands


def cmd_distance(args) -> int:
    f = EmpiricalDist(read_sample(args.file_f))
    g = EmpiricalDist(read_sample(args.file_g))
    metrics = _selected_metrics(args)
    env = OutputEnvelope(
        command="distance",
        inputs=[("input_f", args.file_f), ("input_g", args.file_g)],
        metric=args.metric,
        r=args.r if any(m.kind == "mallows" for m in metrics) else None,
    )
    for metric in metrics:
        if metric.kind == "mallows":
            value = mallows_distance(f, g, metric.r)
            env.results.append(("mallows_distance", value, "data-units"))
        else:
            env.results.append(("ks_distance", ks_distance(f, g), "dimensionless"))
    env.emit()
    return EXIT_OK


def cmd_align(args) -> int:
    f = EmpiricalDist(read_sample(args.file_f))
    g = EmpiricalDist(read_sample(args.file_g))
    metric = _selected_metrics(args)[0]
    bounds = _bounds_for(args, f, g)
    if args.case == "shift":
        res = optimal_shift(f, g, metric, bounds)
    elif args.case == "scale":
        res = optimal_scale(f, g, metric, bounds)
    else:
        res = optimal_shift_scale(f, g, metric, bounds)
    env = OutputEnvelope(
        command="align",
        inputs=[
            ("input_f", args.file_f),
            ("input_g", args.file_g),
            ("case", args.case),
            ("sigma_min", bounds.sigma_range[0]),
            ("sigma_max", bounds.sigma_range[1]),
            ("h_min", bounds.h_range[0]),
            ("h_max", bounds.h_range[1]),
        ],
        metric=metric.kind,
        r=metric.r if metric.kind == "mallows" else None,
        warnings=list(res.notes),
    )
    env.results.append(("sigma", res.optimal.sigma, "dimensionless"))
    env.results.append(("h", res.optimal.h, "data-units"))
    env.results.append(("distance", res.distance, _distance_units(metric)))
    if res.argmin_h_interval is not None:
        env.results.append(("argmin_h_low", res.argmin_h_interval[0], "data-units"))
        env.results.append(("argmin_h_high", res.argmin_h_interval[1], "data-units"))
    if res.argmin_sigma_interval is not None:
        env.results.append(("argmin_sigma_low", res.argmin_sigma_interval[0], "dimensionless"))
        env.results.append(("argmin_sigma_high", res.argmin_sigma_interval[1], "dimensionless"))
    env.results.append(("solver", res.solver, ""))
    env.results.append(("evaluations", res.evaluations, ""))
    env.emit()
    return EXIT_OK


def cmd_profile(args) -> int:
    f = EmpiricalDist(read_sample(args.file_f))
    g = EmpiricalDist(read_sample(args.file_g))
    metric = _selected_metrics(args)[0]
    bounds = _bounds_for(args, f, g)
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        if args.surface:
            rows = profile_surface(f, g, metric, bounds, args.steps_sigma, args.steps_h)
            print("sigma,h,distance")
            for s, h, v in rows:
                print(f"{_fmt(s)},{_fmt(h)},{_fmt(v)}")
        else:
            curve = profile_shift_curve(f, g, metric, bounds.h_range, args.steps)
            print("h,distance")
            for h, v in curve:
                print(f"{_fmt(h)},{_fmt(v)}")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def cmd_paired_compare(args) -> int:
    table = read_study(args.study_file)
    treatments = table.treatments()
    if len(treatments) != 2:
        raise StudyParseError(
            args.study_file, f"need exactly two treatments, found {len(treatments)}"
        )
    metrics = _selected_metrics(args)
    skipped: list[str] = []
    per_metric: dict[str, dict[str, list]] = {m.label: {"ids": [], "a": [], "b": []} for m in metrics}
    for subject in table.subjects():
        samples = {}
        complete = True
        for treatment in treatments:
            base = table.values(subject, treatment, args.baseline)
            follow = table.values(subject, treatment, args.followup)
            if not base or not follow:
                complete = False
                break
            samples[treatment] = (
                EmpiricalDist.from_values(base),
                EmpiricalDist.from_values(follow),
            )
        if not complete:
            skipped.append(subject)
            continue
        for metric in metrics:
            shifts = [
                optimal_shift(samples[t][0], samples[t][1], metric).optimal.h
                for t in treatments
            ]
            bucket = per_metric[metric.label]
            bucket["ids"].append(subject)
            bucket["a"].append(shifts[0])
            bucket["b"].append(shifts[1])
    for subject in skipped:
        print(
            f"warning: subject {subject} skipped (missing {args.baseline!r} or "
            f"{args.followup!r} values)",
            file=sys.stderr,
        )
    first = per_metric[metrics[0].label]
    if not first["ids"]:
        raise StudyParseError(args.study_file, "no subject has both visits for both treatments")
    paired = [
        PairedShifts(
            subject_ids=tuple(per_metric[m.label]["ids"]),
            shift_c=per_metric[m.label]["a"],
            shift_f=per_metric[m.label]["b"],
            metric=m,
        )
        for m in metrics
    ]
    report = paired_treatment_compare(paired, treatment_labels=(treatments[0], treatments[1]))
    if args.format == "table":
        sys.stdout.write(report.to_table())
    else:
        sys.stdout.write(report.to_csv())
    return EXIT_OK


def _simulate_config(args) -> SimulationConfig:
    situations = {
        1: dict(mu1=150.0, mu2=150.0, sigma1=10.0, sigma2=15.0),
        2: dict(mu1=150.0, mu2=160.0, sigma1=10.0, sigma2=10.0),
        3: dict(mu1=150.0, mu2=160.0, sigma1=10.0, sigma2=15.0),
    }
    opts: dict = {}
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise SampleParseError(args.config, 0, f"cannot read file ({exc.strerror})") from exc
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParameter(f"{args.config}:{line_no}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            opts[key] = value
    def pick(flag, key, cast, default):
        if flag is not None:
            return flag
        if key in opts:
            return cast(opts[key])
        return default

    situation = pick(args.situation, "situation", int, 2)
    preset = situations.get(situation)
    if preset is None:
        raise InvalidParameter(f"unknown situation {situation}")
    metrics = pick(args.metrics, "metrics", str, "mallows")
    cases = pick(args.cases, "cases", str, "shift,scale,shift-scale")
    try:
        return SimulationConfig(
            n=int(pick(args.n, "n", int, 100)),
            replicates=int(pick(args.replicates, "replicates", int, 100)),
            mu1=float(pick(args.mu1, "mu1", float, preset["mu1"])),
            sigma1=float(pick(args.sigma1, "sigma1", float, preset["sigma1"])),
            mu2=float(pick(args.mu2, "mu2", float, preset["mu2"])),
            sigma2=float(pick(args.sigma2, "sigma2", float, preset["sigma2"])),
            metrics=tuple(m.strip() for m in metrics.split(",") if m.strip()),
            cases=tuple(c.strip() for c in cases.split(",") if c.strip()),
            r=float(pick(args.r, "r", float, 1.0)),
            base_seed=int(pick(args.seed, "seed", int, 20260810)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParameter):
            raise
        raise InvalidParameter(str(exc)) from exc


def cmd_simulate(args) -> int:
    config = _simulate_config(args)
    report = run_simulation(config)
    sys.stdout.write(report.to_csv())
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (DegenerateScale, AllZeroDifferences) as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (SampleParseError, StudyParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
