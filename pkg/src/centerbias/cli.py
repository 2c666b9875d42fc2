"""Command-line front end: ``list``, ``evaluate``, ``audit``, ``report``.

Configuration precedence for ``audit``: explicit flag > environment
variable (``CENTERBIAS_<FLAG>``) > config file (``--config``, JSON) >
preset > built-in default.  Exit codes: 0 success, 1 runtime or data
failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import reporting
from .audit import AuditConfig, PRESETS, results_from_document, results_to_json, run_audit
from .errors import ConfigurationError
from .functions import make_problem, metadata_rows
from .optimizers import method_catalog

ENV_PREFIX = "CENTERBIAS_"


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name.upper())


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"invalid JSON in config file {path}: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return doc


def _parse_list(raw) -> list[str]:
    if isinstance(raw, (list, tuple)):
        return [str(x) for x in raw]
    return [part for part in str(raw).split(",") if part.strip()]


class _Resolver:
    """Merge flag / env / config-file / preset values for one option."""

    def __init__(self, args: argparse.Namespace, file_cfg: dict, preset_cfg: dict):
        self.args = args
        self.file_cfg = file_cfg
        self.preset_cfg = preset_cfg

    def get(self, name: str, convert, default):
        flag = getattr(self.args, name, None)
        if flag is not None:
            return flag
        env = _env(name)
        if env is not None:
            return convert(env)
        if name in self.file_cfg:
            return convert(self.file_cfg[name])
        if name in self.preset_cfg:
            return self.preset_cfg[name]
        return default


def _audit_config_from(args: argparse.Namespace) -> tuple[AuditConfig, int | None]:
    config_path = args.config or _env("config")
    file_cfg = _load_config_file(config_path) if config_path else {}

    preset_name = args.preset or _env("preset") or file_cfg.get("preset")
    preset_cfg: dict = {}
    if preset_name:
        if preset_name not in PRESETS:
            raise ConfigurationError(
                f"unknown preset {preset_name!r}; choose from {sorted(PRESETS)}"
            )
        base = PRESETS[preset_name]()
        preset_cfg = {"dim": base.dimension, "budget": base.budget, "runs": base.runs}

    r = _Resolver(args, file_cfg, preset_cfg)
    defaults = AuditConfig()
    methods = r.get("methods", _parse_list, list(defaults.methods))
    functions = r.get("functions", _parse_list, list(defaults.functions))
    overrides = file_cfg.get("optim", {})
    if not isinstance(overrides, dict):
        raise ConfigurationError("config key 'optim' must map methods to parameter objects")
    config = AuditConfig(
        dimension=r.get("dim", int, defaults.dimension),
        budget=r.get("budget", int, defaults.budget),
        runs=r.get("runs", int, defaults.runs),
        shift_fraction=r.get("shift_fraction", float, defaults.shift_fraction),
        error_floor=r.get("error_floor", float, defaults.error_floor),
        bias_threshold=r.get("threshold", float, defaults.bias_threshold),
        master_seed=r.get("seed", int, defaults.master_seed),
        methods=tuple(methods),
        functions=tuple(functions),
        optimizer_overrides={
            method: dict(params) for method, params in overrides.items()
        },
    )
    workers = r.get("workers", int, None)
    return config, workers


def _print_csv(rows: list[dict]) -> None:
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_list(args: argparse.Namespace) -> int:
    if args.target == "functions":
        _print_csv(metadata_rows(dimension=args.dim or 30))
    else:
        _print_csv(method_catalog())
    return 0


def _parse_point(raw: str, dimension: int, problem) -> np.ndarray:
    if raw == "zero":
        return np.zeros(dimension)
    if raw == "xstar":
        return problem.base.optimum_point()
    try:
        values = [float(part) for part in raw.split(",")]
    except ValueError as e:
        raise ConfigurationError(f"point must be 'zero', 'xstar' or comma-separated reals: {raw!r}") from e
    if len(values) != dimension:
        raise ConfigurationError(
            f"point has {len(values)} coordinates but dimension is {dimension}"
        )
    return np.asarray(values)


def cmd_evaluate(args: argparse.Namespace) -> int:
    dim = args.dim if args.dim is not None else 30
    problem = make_problem(args.function, dim, args.shift_fraction or 0.0)
    point = _parse_point(args.point, dim, problem)
    value = problem.evaluate(point)  # no RNG: the noisy Quartic reports noiselessly
    print(format(value, ".17g"))
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    config, workers = _audit_config_from(args)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    results = run_audit(config, workers=workers)
    out_path = args.out or _env("out") or "results.json"
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(results_to_json(results))
    fmt = args.format or _env("format") or "text"
    if fmt == "csv":
        _print_csv(
            [
                {"method": r.method, "geomean": f"{r.geomean:.2E}", "verdict": r.verdict}
                for r in results.reports
            ]
        )
    else:
        for r in results.reports:
            print(f"{r.method}: geomean={r.geomean:.2E} verdict={r.verdict}")
    print(f"results written to {out_path}", file=sys.stderr)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    in_path = args.infile or _env("in")
    if not in_path:
        raise ConfigurationError("report needs --in <results.json>")
    with open(in_path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            print(f"malformed results file {in_path}: {e}", file=sys.stderr)
            return 1
    results = results_from_document(doc)
    fmt = args.format or _env("format") or "markdown"
    sys.stdout.write(reporting.render_table(results.reports, results.records, fmt))
    svg_path = args.svg or _env("svg")
    if svg_path:
        registry_path = args.registry or _env("registry")
        registry = (
            reporting.load_registry(registry_path)
            if registry_path
            else reporting.load_builtin_registry()
        )
        histogram = reporting.year_histogram(results.reports, registry)
        reporting.emit_histogram_svg(histogram, svg_path)
        print(f"histogram written to {svg_path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centerbias",
        description="Detect center-bias operators in black-box optimizers by "
        "comparing performance on shifted and unshifted benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="print the function or method catalog as CSV")
    p_list.add_argument("target", choices=("functions", "methods"))
    p_list.add_argument("--dim", type=int, default=None)
    p_list.set_defaults(func=cmd_list)

    p_eval = sub.add_parser("evaluate", help="evaluate one benchmark at a point")
    p_eval.add_argument("function")
    p_eval.add_argument("point", help="'zero', 'xstar', or comma-separated reals")
    p_eval.add_argument("--dim", type=int, default=None)
    p_eval.add_argument("--shift-fraction", dest="shift_fraction", type=float, default=None)
    p_eval.set_defaults(func=cmd_evaluate)

    p_audit = sub.add_parser("audit", help="run the audit matrix and persist JSON results")
    p_audit.add_argument("--dim", type=int, default=None)
    p_audit.add_argument("--budget", type=int, default=None)
    p_audit.add_argument("--runs", type=int, default=None)
    p_audit.add_argument("--shift-fraction", dest="shift_fraction", type=float, default=None)
    p_audit.add_argument("--error-floor", dest="error_floor", type=float, default=None)
    p_audit.add_argument("--threshold", type=float, default=None)
    p_audit.add_argument("--seed", type=int, default=None)
    p_audit.add_argument("--methods", type=_parse_list, default=None)
    p_audit.add_argument("--functions", type=_parse_list, default=None)
    p_audit.add_argument("--preset", choices=tuple(PRESETS), default=None)
    p_audit.add_argument("--workers", type=int, default=None)
    p_audit.add_argument("--out", default=None)
    p_audit.add_argument("--config", default=None, help="JSON config file")
    p_audit.add_argument("--format", choices=("text", "csv"), default=None)
    p_audit.set_defaults(func=cmd_audit)

    p_report = sub.add_parser("report", help="render tables and the year histogram")
    p_report.add_argument("--in", dest="infile", default=None)
    p_report.add_argument("--format", choices=reporting.TABLE_FORMATS, default=None)
    p_report.add_argument("--registry", default=None)
    p_report.add_argument("--svg", default=None)
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
