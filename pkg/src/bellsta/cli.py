"""Command-line entry point.

    bellsta simulate --method tqd --params default
    bellsta sweep --method adiabatic --window fixed:48 --out grid.csv
    bellsta design-lri --out fields.csv
    bellsta fidelity-curve --set curve.t_totals=2:120:20 --format json

Configuration is one JSON object: the flat parameter keys of
``model.PARAM_KEYS`` plus optional ``sweep`` and ``curve`` sections.  Missing
keys take the preset of the chosen method.  ``--set`` applies dotted-key
overrides after the file is loaded; ``--dump-config`` prints the resolved
object, which can be fed back through ``--params``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import lri
from .experiments import (
    NUMERICAL_ERRORS,
    Method,
    Scenario,
    fidelity_vs_duration,
    lri_design_report,
    parse_window,
    preset,
    run_scenario,
    sweep_final_population,
    trajectory_table,
)
from .model import PARAM_KEYS, ParameterError, params_from_mapping, params_to_mapping

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

SUBCOMMANDS = ("simulate", "sweep", "design-lri", "fidelity-curve")
DEFAULT_METHOD = {"simulate": "tqd", "sweep": "adiabatic", "design-lri": "lri", "fidelity-curve": "all"}
SECTION_DEFAULTS = {
    "sweep": {"omega0": "0.05:2:11", "alpha": "0.05:1:11", "window": "follow"},
    "curve": {"t_totals": "2:120:20"},
}


class ConfigError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellsta", description=__doc__.split("\n\n")[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--method", choices=[m.value for m in Method] + ["all"])
    parser.add_argument("--params", default="default", help="JSON parameter file, or 'default'")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--out", help="output file (default: table to stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--window", help="'follow' or 'fixed:<t_total>' (sweep)")
    parser.add_argument("--steps", type=int, help="time steps per run")
    parser.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    return parser


def parse_values(text) -> list[float]:
    """'start:stop:num' (inclusive linspace), 'a,b,c' or a JSON list."""
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return np.linspace(float(start), float(stop), int(num)).tolist()
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse value list {text!r}") from None


def _load(path: str) -> dict:
    if path == "default":
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"parameter file not found: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return data


def _apply_override(cfg: dict, item: str) -> None:
    key, sep, value = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {item!r} is not KEY=VALUE")
    section, dot, sub = key.partition(".")
    if dot:
        if section not in SECTION_DEFAULTS or sub not in SECTION_DEFAULTS[section]:
            raise ConfigError(f"unknown config key {key!r}")
        cfg.setdefault(section, {})[sub] = value
    else:
        if key not in PARAM_KEYS:
            raise ConfigError(f"unknown parameter key {key!r}")
        cfg[key] = value


def _base_method(subcommand: str, method: str) -> str:
    """Method whose preset fills in missing parameters."""
    if subcommand == "design-lri":
        return "lri"
    return "tqd" if method == "all" else method


def resolve_config(args) -> tuple[dict, str]:
    """Merge file, overrides and flags into a fully explicit config."""
    method = args.method or DEFAULT_METHOD[args.subcommand]
    cfg = _load(args.params)
    for item in args.overrides:
        _apply_override(cfg, item)
    if args.steps is not None:
        cfg["n_steps"] = args.steps
    if args.window is not None:
        cfg.setdefault("sweep", {})["window"] = args.window

    flat = {k: v for k, v in cfg.items() if k not in SECTION_DEFAULTS}
    unknown = set(flat) - set(PARAM_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    base_method = _base_method(args.subcommand, method)
    frac = lri.CENTER_FRACTION if base_method == "lri" else 0.5
    params, n_steps = params_from_mapping(flat, preset(base_method), center_fraction=frac)

    out = params_to_mapping(params, n_steps)
    for section, defaults in SECTION_DEFAULTS.items():
        given = cfg.get(section, {})
        if not isinstance(given, dict):
            raise ConfigError(f"section {section!r} must be an object")
        extra = set(given) - set(defaults)
        if extra:
            raise ConfigError(f"unknown config key(s) in {section!r}: {', '.join(sorted(extra))}")
        merged = {**defaults, **given}
        resolved = {}
        for key, value in merged.items():
            resolved[key] = str(parse_window(str(value))) if key == "window" else parse_values(value)
        out[section] = resolved
    return out, method


def _emit(table, args, summary: dict) -> None:
    text = table.to_csv() if args.format == "csv" else table.to_json()
    lines = [f"{k}: {v:.6g}" if isinstance(v, float) else f"{k}: {v}" for k, v in summary.items()]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        print("\n".join(lines + [f"written: {args.out}"]))
    else:
        sys.stdout.write(text)
        print("\n".join(lines), file=sys.stderr)


def _run(cfg: dict, method: str, args) -> None:
    flat = {k: cfg[k] for k in PARAM_KEYS}
    base_method = _base_method(args.subcommand, method)
    params, n_steps = params_from_mapping(flat, preset(base_method))

    if args.subcommand == "simulate":
        if method == "all":
            raise ConfigError("simulate needs a single --method")
        scenario = Scenario.from_params(method, params, n_steps)
        traj, fid = run_scenario(scenario)
        summary = {**scenario.summary(), "fidelity": fid, "n_steps_used": traj.diagnostics["n_steps_used"]}
        _emit(trajectory_table(traj, scenario), args, summary)
    elif args.subcommand == "sweep":
        if method == "all":
            raise ConfigError("sweep needs a single --method")
        sw = cfg["sweep"]
        grid = sweep_final_population(
            method, sw["omega0"], sw["alpha"], parse_window(sw["window"]), base=params, n_steps=n_steps
        )
        finite = grid.cells[np.isfinite(grid.cells)]
        summary = {
            "method": method,
            "cells": grid.cells.size,
            "failed_cells": len(grid.diagnostics),
            "population_min": float(finite.min()) if finite.size else float("nan"),
            "population_max": float(finite.max()) if finite.size else float("nan"),
        }
        _emit(grid.table(), args, summary)
    elif args.subcommand == "design-lri":
        table = lri_design_report(params.t_i, params.t_f, params.t12)
        summary = {"t_i": params.t_i, "t_f": params.t_f, "t12": params.t12,
                   "omega_lr_max": float(table.column("omega_lr").max())}
        _emit(table, args, summary)
    else:
        methods = list(Method) if method == "all" else [Method(method)]
        table = fidelity_vs_duration(cfg["curve"]["t_totals"], methods, base=params, n_steps=n_steps)
        summary = {f"min_{c}": float(np.nanmin(table.column(c))) for c in table.columns[1:]}
        _emit(table, args, summary)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg, method = resolve_config(args)
        if args.dump_config:
            print(json.dumps(cfg, indent=2))
            return EXIT_OK
        _run(cfg, method, args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
