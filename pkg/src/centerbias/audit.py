"""The audit matrix: (method x function x {unshifted, shifted} x runs).

Each cell runs independent seeded minimizations, floors the per-run
errors, and averages them.  Pairing the two variants of a cell gives a
degradation ratio; the geometric mean of a method's thirteen ratios is
compared against a threshold to decide whether the method contains a
center-bias operator (it performs an order of magnitude better when the
optimum sits at the box center).

Cell seeds derive from the cell identity, never from execution order,
so serial and parallel audits are bitwise identical.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .functions import FUNCTION_IDS, ShiftedProblem, canonical_function_id, make_function, make_shift
from .optimizers import METHOD_IDS, ObjectiveHandle, canonical_method_id, make_config, minimize
from .seeding import mix64, rng_from

logger = logging.getLogger(__name__)

UNSHIFTED = "unshifted"
SHIFTED = "shifted"

CENTER_BIASED = "CenterBiased"
NOT_DETECTED = "NotDetected"

DEFAULT_MASTER_SEED = 42

# Floating-point subtraction near a solved optimum can produce tiny
# negative errors; anything below this is evidence of a wrong f*.
_NEGATIVE_ERROR_TOLERANCE = -1e-6


@dataclass(frozen=True)
class AuditConfig:
    """Protocol constants for one audit."""

    dimension: int = 30
    budget: int = 50_000
    runs: int = 20
    shift_fraction: float = 0.1
    error_floor: float = 1e-8
    bias_threshold: float = 10.0
    master_seed: int = DEFAULT_MASTER_SEED
    methods: tuple[str, ...] = METHOD_IDS
    functions: tuple[str, ...] = FUNCTION_IDS
    optimizer_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 2:
            raise ConfigurationError(f"dimension must be >= 2, got {self.dimension}")
        if self.budget < 1:
            raise ConfigurationError(f"budget must be >= 1, got {self.budget}")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")
        if not 0.0 <= self.shift_fraction < 0.5:
            raise ConfigurationError(
                f"shift_fraction must be in [0, 0.5), got {self.shift_fraction}"
            )
        if not self.error_floor > 0.0:
            raise ConfigurationError(f"error_floor must be > 0, got {self.error_floor}")
        if not self.bias_threshold > 1.0:
            raise ConfigurationError(
                f"bias_threshold must be > 1, got {self.bias_threshold}"
            )
        object.__setattr__(
            self, "methods", tuple(canonical_method_id(m) for m in self.methods)
        )
        object.__setattr__(
            self, "functions", tuple(canonical_function_id(f) for f in self.functions)
        )


def paper_preset(**overrides) -> AuditConfig:
    """Full protocol: dimension 30, 50,000 evaluations, 20 runs."""
    return AuditConfig(**{"dimension": 30, "budget": 50_000, "runs": 20, **overrides})


def ci_preset(**overrides) -> AuditConfig:
    """Desk-scale protocol: dimension 30, 20,000 evaluations, 5 runs."""
    return AuditConfig(**{"dimension": 30, "budget": 20_000, "runs": 5, **overrides})


PRESETS = {"paper": paper_preset, "ci": ci_preset}


@dataclass(frozen=True)
class AuditCellResult:
    """Clamped per-run errors and their mean for one (method, function, variant)."""

    method: str
    function: str
    variant: str
    run_errors: tuple[float, ...]
    mean_error: float


@dataclass(frozen=True)
class AuditRecord:
    """Paired means and their shifted/unshifted ratio for one (method, function)."""

    method: str
    function: str
    unshifted_mean: float
    shifted_mean: float
    ratio: float


@dataclass(frozen=True)
class MethodReport:
    """Per-method geometric mean of ratios and the resulting verdict."""

    method: str
    geomean: float
    verdict: str
    records: tuple[AuditRecord, ...] = ()

    def __post_init__(self):
        if self.records:
            expected = geometric_mean([r.ratio for r in self.records])
            if not math.isclose(self.geomean, expected, rel_tol=1e-12):
                raise ValueError(
                    f"{self.method}: geomean {self.geomean} does not match "
                    f"its records ({expected})"
                )


def clamp_error(error: float, floor: float) -> float:
    """Floor an error at ``floor``; errors below -1e-6 signal a broken f*."""
    if error < _NEGATIVE_ERROR_TOLERANCE:
        raise RuntimeError(
            f"error {error} is too negative: optimizer beat the recorded optimum"
        )
    return max(error, floor)


def cell_run_seed(master_seed: int, method: str, function: str, variant: str,
                  run_index: int) -> int:
    """Seed for one run, derived purely from the cell identity."""
    return mix64(
        master_seed,
        METHOD_IDS.index(method),
        int(function[1:]),
        0 if variant == UNSHIFTED else 1,
        run_index,
    )


def run_cell(config: AuditConfig, method: str, function: str, variant: str) -> AuditCellResult:
    """Run one audit cell: ``config.runs`` independent minimizations.

    Errors are measured against the *base* function's optimum (shifting
    does not change the optimal value), floored, then averaged.
    """
    method = canonical_method_id(method)
    function = canonical_function_id(function)
    if variant not in (UNSHIFTED, SHIFTED):
        raise ConfigurationError(f"unknown variant: {variant!r}")
    base = make_function(function, config.dimension)
    fraction = config.shift_fraction if variant == SHIFTED else 0.0
    problem = ShiftedProblem(base=base, shift=make_shift(base, fraction))
    overrides = dict(config.optimizer_overrides.get(method, {}))
    population = overrides.pop("population_size", None)

    errors = []
    for run_index in range(config.runs):
        run_seed = cell_run_seed(config.master_seed, method, function, variant, run_index)
        opt_config = make_config(
            method,
            seed=mix64(run_seed, 0),
            population_size=population,
            hyperparameters=overrides,
        )
        noise_rng = rng_from(run_seed, 1) if base.noisy else None
        handle = ObjectiveHandle(problem, config.budget, noise_rng=noise_rng)
        outcome = minimize(opt_config, handle)
        errors.append(clamp_error(outcome.best_value - base.f_star, config.error_floor))
    mean = math.fsum(errors) / len(errors)
    logger.info("cell done: %s %s %s mean=%.3e", method, function, variant, mean)
    return AuditCellResult(
        method=method,
        function=function,
        variant=variant,
        run_errors=tuple(errors),
        mean_error=mean,
    )


def compute_ratio(unshifted: AuditCellResult, shifted: AuditCellResult) -> AuditRecord:
    """Pair the two variants of a cell into a degradation ratio."""
    if unshifted.method != shifted.method or unshifted.function != shifted.function:
        raise ValueError(
            f"mismatched cells: ({unshifted.method}, {unshifted.function}) vs "
            f"({shifted.method}, {shifted.function})"
        )
    if unshifted.variant != UNSHIFTED or shifted.variant != SHIFTED:
        raise ValueError("cells passed in the wrong variant order")
    if not (unshifted.mean_error > 0.0 and shifted.mean_error > 0.0):
        raise ValueError("cell means must be positive (error floor not applied?)")
    return AuditRecord(
        method=unshifted.method,
        function=unshifted.function,
        unshifted_mean=unshifted.mean_error,
        shifted_mean=shifted.mean_error,
        ratio=shifted.mean_error / unshifted.mean_error,
    )


def geometric_mean(ratios) -> float:
    """exp(mean(ln r)); log-domain, so huge ratios cannot overflow."""
    values = np.asarray(list(ratios), dtype=float)
    if values.size == 0:
        raise ValueError("geometric mean of an empty list")
    if not np.all(values > 0.0) or not np.all(np.isfinite(values)):
        raise ValueError("geometric mean requires positive finite ratios")
    return float(np.exp(np.mean(np.log(values))))


def classify(geomean: float, threshold: float = 10.0) -> str:
    """CenterBiased iff the geomean is strictly above the threshold."""
    if not geomean > 0.0:
        raise ValueError(f"geomean must be positive, got {geomean}")
    return CENTER_BIASED if geomean > threshold else NOT_DETECTED


@dataclass(frozen=True)
class AuditResults:
    config: AuditConfig
    cells: tuple[AuditCellResult, ...]
    records: tuple[AuditRecord, ...]
    reports: tuple[MethodReport, ...]

    def cell(self, method: str, function: str, variant: str) -> AuditCellResult:
        for c in self.cells:
            if (c.method, c.function, c.variant) == (method, function, variant):
                return c
        raise KeyError((method, function, variant))

    def record(self, method: str, function: str) -> AuditRecord:
        for r in self.records:
            if (r.method, r.function) == (method, function):
                return r
        raise KeyError((method, function))

    def report(self, method: str) -> MethodReport:
        for r in self.reports:
            if r.method == method:
                return r
        raise KeyError(method)


def _cell_task(args) -> AuditCellResult:
    config, method, function, variant = args
    return run_cell(config, method, function, variant)


def run_audit(config: AuditConfig, workers: int | None = None) -> AuditResults:
    """Execute the full matrix and aggregate per-method reports.

    ``workers`` > 1 runs cells in separate processes; results are
    identical to a serial run because every cell owns its seeds.
    """
    if not config.methods:
        raise ValueError("run_audit needs at least one method")
    if not config.functions:
        raise ValueError("run_audit needs at least one function")
    tasks = [
        (config, m, f, v)
        for m in config.methods
        for f in config.functions
        for v in (UNSHIFTED, SHIFTED)
    ]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            completed = list(pool.map(_cell_task, tasks))
    else:
        completed = [_cell_task(t) for t in tasks]
    by_key = {(c.method, c.function, c.variant): c for c in completed}

    cells = []
    records = []
    reports = []
    for m in config.methods:
        method_records = []
        for f in config.functions:
            unshifted = by_key[(m, f, UNSHIFTED)]
            shifted = by_key[(m, f, SHIFTED)]
            cells.extend([unshifted, shifted])
            method_records.append(compute_ratio(unshifted, shifted))
        records.extend(method_records)
        geomean = geometric_mean([r.ratio for r in method_records])
        reports.append(
            MethodReport(
                method=m,
                geomean=geomean,
                verdict=classify(geomean, config.bias_threshold),
                records=tuple(method_records),
            )
        )
    return AuditResults(
        config=config,
        cells=tuple(cells),
        records=tuple(records),
        reports=tuple(reports),
    )


# ---------------------------------------------------------------------------
# persistence

def _format_float(x: float) -> str:
    # 17 significant digits, so every double round-trips exactly
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".16e")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact, full-precision floats."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{canonical_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def results_to_document(results: AuditResults) -> dict:
    """Plain-dict form of the results, shared by the JSON file and reports."""
    cfg = results.config
    return {
        "config": {
            "dimension": cfg.dimension,
            "budget": cfg.budget,
            "runs": cfg.runs,
            "shift_fraction": cfg.shift_fraction,
            "error_floor": cfg.error_floor,
            "bias_threshold": cfg.bias_threshold,
            "master_seed": cfg.master_seed,
            "methods": list(cfg.methods),
            "functions": list(cfg.functions),
            "optimizer_overrides": cfg.optimizer_overrides,
        },
        "cells": [
            {
                "method": c.method,
                "function": c.function,
                "variant": c.variant,
                "run_errors": list(c.run_errors),
                "mean_error": c.mean_error,
            }
            for c in results.cells
        ],
        "records": [
            {
                "method": r.method,
                "function": r.function,
                "unshifted_mean": r.unshifted_mean,
                "shifted_mean": r.shifted_mean,
                "ratio": r.ratio,
            }
            for r in results.records
        ],
        "reports": [
            {"method": r.method, "geomean": r.geomean, "verdict": r.verdict}
            for r in results.reports
        ],
    }


def results_to_json(results: AuditResults) -> str:
    return canonical_json(results_to_document(results))


def results_from_document(doc: dict) -> AuditResults:
    """Inverse of :func:`results_to_document`."""
    cfg = doc["config"]
    config = AuditConfig(
        dimension=cfg["dimension"],
        budget=cfg["budget"],
        runs=cfg["runs"],
        shift_fraction=cfg["shift_fraction"],
        error_floor=cfg["error_floor"],
        bias_threshold=cfg["bias_threshold"],
        master_seed=cfg["master_seed"],
        methods=tuple(cfg["methods"]),
        functions=tuple(cfg["functions"]),
        optimizer_overrides=cfg.get("optimizer_overrides", {}),
    )
    cells = tuple(
        AuditCellResult(
            method=c["method"],
            function=c["function"],
            variant=c["variant"],
            run_errors=tuple(float(e) for e in c["run_errors"]),
            mean_error=float(c["mean_error"]),
        )
        for c in doc["cells"]
    )
    records = tuple(
        AuditRecord(
            method=r["method"],
            function=r["function"],
            unshifted_mean=float(r["unshifted_mean"]),
            shifted_mean=float(r["shifted_mean"]),
            ratio=float(r["ratio"]),
        )
        for r in doc["records"]
    )
    by_method: dict[str, list[AuditRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    reports = tuple(
        MethodReport(
            method=r["method"],
            geomean=float(r["geomean"]),
            verdict=r["verdict"],
            records=tuple(by_method.get(r["method"], ())),
        )
        for r in doc["reports"]
    )
    return AuditResults(config=config, cells=cells, records=records, reports=reports)


def results_from_json(text: str) -> AuditResults:
    return results_from_document(json.loads(text))
