"""Command-line front end.

Subcommands: ``simulate`` (raw traces to CSV), ``verify`` (one experiment
kind), ``battery`` (the full verification suite), ``report`` (re-render a
persisted JSON report).  Exit codes: 0 all verdicts pass, 1 statistical
failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys

from .discrete import run_discrete
from .experiments import (
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    KIND_DESCRIPTIONS,
    emit_report,
    read_report_json,
    run_experiment,
)
from .poissonized import run_coupled
from .samplers import SeedSpec

WORKERS_ENV = "DIXIECUP_WORKERS"

EXIT_PASS = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2


def _default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value is None:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _parse_interval(text: str) -> tuple[float, float]:
    parts = _parse_floats(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"interval needs two endpoints, got {text!r}")
    return parts[0], parts[1]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dixiecup",
        description="Coupon-collector simulation and limit-law verification toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write raw simulation traces to CSV")
    sim.add_argument("--scheme", choices=["discrete", "coupled"], default="discrete")
    sim.add_argument("--n", type=int, required=True, help="number of coupon types")
    sim.add_argument("--rmax", type=int, default=1, help="arrivals tracked per type")
    sim.add_argument("--reps", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="run one experiment kind")
    ver.add_argument("--config", help="INI file with key = value experiment sections")
    ver.add_argument("--section", help="section of the config file to run")
    ver.add_argument("--kind", choices=sorted(KIND_DESCRIPTIONS))
    ver.add_argument("--n", type=_parse_ints, help="comma-separated n grid")
    ver.add_argument("--r", type=int)
    ver.add_argument("--c", type=int)
    ver.add_argument("--m", type=int)
    ver.add_argument("--interval", type=_parse_interval, action="append",
                     help="interval 'a,b' (repeatable)")
    ver.add_argument("--thresholds", type=_parse_floats)
    ver.add_argument("--reps", type=int)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--sig", type=float)
    ver.add_argument("--workers", type=int)
    ver.add_argument("--out")
    ver.add_argument("--format", choices=["csv", "json"], default="json")

    bat = sub.add_parser("battery", help="run the full verification suite")
    bat.add_argument("--seed", type=int, default=42)
    bat.add_argument("--workers", type=int, default=None)
    bat.add_argument("--scale", type=float, default=1.0,
                     help="replication scale factor (1.0 = full suite)")
    bat.add_argument("--out", default="battery_report.json")

    rep = sub.add_parser("report", help="re-render a persisted JSON report")
    rep.add_argument("input")
    rep.add_argument("--format", choices=["csv", "text"], default="text")
    rep.add_argument("--out")

    return parser


# ---------------------------------------------------------------------------
# simulate

def _cmd_simulate(args) -> int:
    if args.n < 3:
        print(f"warning: n={args.n} is below the recommended minimum of 3; "
              "the centering uses ln ln n", file=sys.stderr)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["replication", "type", "multiplicity", "arrival_draw"]
        if args.scheme == "coupled":
            header.append("arrival_time")
        writer.writerow(header)
        for j in range(args.reps):
            stream = SeedSpec(args.seed, j)
            if args.scheme == "discrete":
                trace = run_discrete(args.n, args.rmax, stream)
                for i in range(args.n):
                    for k in range(args.rmax):
                        writer.writerow([j, i + 1, k + 1, int(trace.arrivals[i, k])])
            else:
                trace = run_coupled(args.n, args.rmax, stream)
                for i in range(args.n):
                    for k in range(args.rmax):
                        writer.writerow([j, i + 1, k + 1,
                                         int(trace.arrivals[i, k]),
                                         repr(float(trace.times[i, k]))])
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verify

_CONFIG_KEYS = {
    "kind": str,
    "n_grid": _parse_ints,
    "r": int,
    "c": int,
    "m": int,
    "thresholds": _parse_floats,
    "replications": int,
    "master_seed": int,
    "significance": float,
    "workers": int,
}


def _config_from_ini(path: str, section: str | None) -> dict:
    ini = configparser.ConfigParser()
    if not ini.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    if section is None:
        if len(ini.sections()) != 1:
            raise ConfigError(
                f"config file has sections {ini.sections()}; pick one with --section"
            )
        section = ini.sections()[0]
    if section not in ini:
        raise ConfigError(f"no section {section!r} in {path!r}")
    raw = dict(ini[section])
    out: dict = {}
    for key, value in raw.items():
        if key == "intervals":
            out["intervals"] = [
                _parse_interval(part) for part in value.split(";") if part.strip()
            ]
        elif key in _CONFIG_KEYS:
            out[key] = _CONFIG_KEYS[key](value)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    out.setdefault("kind", section)
    return out


def _cmd_verify(args) -> int:
    fields: dict = {}
    if args.config:
        fields = _config_from_ini(args.config, args.section)
    overrides = {
        "kind": args.kind,
        "n_grid": args.n,
        "r": args.r,
        "c": args.c,
        "m": args.m,
        "intervals": args.interval,
        "thresholds": args.thresholds,
        "replications": args.reps,
        "master_seed": args.seed,
        "significance": args.sig,
        "workers": args.workers,
    }
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    if "kind" not in fields:
        raise ConfigError("an experiment kind is required (--kind or config file)")
    fields.setdefault("workers", _default_workers())
    config = ExperimentConfig(**fields)
    config.validate()
    if any(n < 3 for n in config.n_grid) and config.kind != "limit-consistency":
        print("warning: n below 3 makes the ln ln n centering negative",
              file=sys.stderr)

    report = run_experiment(config)
    for name, ok in sorted(report.verdicts.items()):
        print(f"{'PASS' if ok else 'FAIL'}  {config.kind}: {name}")
    if args.out:
        emit_report(report, args.format, args.out)
        print(f"report written to {args.out}")
    return EXIT_PASS if report.passed else EXIT_STAT_FAIL


# ---------------------------------------------------------------------------
# battery

def battery_configs(seed: int, scale: float, workers: int) -> list[ExperimentConfig]:
    """The standard suite: one config per verified limit statement."""

    def reps(base: int) -> int:
        return max(20, int(round(base * scale)))

    configs: list[ExperimentConfig] = []
    for r in (1, 2, 3):
        configs.append(ExperimentConfig(
            kind="poissonized-marginal", n_grid=[100], r=r,
            replications=reps(100)))
    for r in (1, 2):
        configs.append(ExperimentConfig(
            kind="theorem1-counts", n_grid=[100, 10000], r=r,
            intervals=[(0.0, math.inf), (-1.0, 0.0), (0.0, 1.0)],
            replications=reps(2000)))
    for c in (1, 2):
        configs.append(ExperimentConfig(
            kind="erdos-renyi", n_grid=[100, 1000, 10000], c=c,
            replications=reps(2000)))
    configs.append(ExperimentConfig(
        kind="partial-collection", n_grid=[10000], r=1, m=2,
        replications=reps(2000)))
    for r, m in ((1, 0), (1, 1), (1, 3), (2, 0), (2, 1), (3, 2)):
        configs.append(ExperimentConfig(
            kind="chi2-law", n_grid=[10000], r=r, m=m, replications=reps(2000)))
    for r in (1, 2):
        configs.append(ExperimentConfig(
            kind="rare-path", n_grid=[10000], r=r,
            thresholds=[-1.0, 0.0, 1.0, 2.0], replications=reps(2000)))
    configs.append(ExperimentConfig(
        kind="coupling-decay", n_grid=[100, 1000, 10000], r=1,
        intervals=[(-2.0, 2.0)], replications=reps(2000)))
    configs.append(ExperimentConfig(
        kind="limit-consistency", r=1, m=0, replications=reps(200)))

    for idx, cfg in enumerate(configs):
        # distinct master seeds keep experiment streams mutually independent
        cfg.master_seed = seed + 7919 * idx
        cfg.workers = workers
    return configs


def _cmd_battery(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    configs = battery_configs(args.seed, args.scale, workers)
    reports = []
    all_pass = True
    for cfg in configs:
        report = run_experiment(cfg)
        reports.append(report)
        all_pass = all_pass and report.passed
        status = "PASS" if report.passed else "FAIL"
        label = f"{cfg.kind}(r={cfg.r}, c={cfg.c}, m={cfg.m})"
        print(f"{status}  {label}")
    combined = {
        "master_seed": args.seed,
        "scale": args.scale,
        "experiments": [rep.to_dict() for rep in reports],
        "passed": all_pass,
    }
    with open(args.out, "w") as fh:
        json.dump(combined, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"battery report written to {args.out}")
    return EXIT_PASS if all_pass else EXIT_STAT_FAIL


# ---------------------------------------------------------------------------
# report

def _cmd_report(args) -> int:
    report = read_report_json(args.input)
    if args.format == "csv":
        out = args.out or os.path.splitext(args.input)[0] + ".csv"
        emit_report(report, "csv", out)
        print(f"CSV written to {out}")
    else:
        print(f"experiment: {report.config['kind']}")
        print(f"verifies:   {report.theorem}")
        for row in report.results:
            p = "" if row["p_value"] is None else f" p={row['p_value']:.4g}"
            status = "PASS" if row["verdict"] else "FAIL"
            print(f"  {status}  n={row['n']:>6}  {row['statistic_name']}"
                  f" = {row['value']:.6g}{p}")
        print(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_PASS if report.passed else EXIT_STAT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "verify": _cmd_verify,
        "battery": _cmd_battery,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
