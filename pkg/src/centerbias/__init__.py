"""Center-bias audit harness for black-box optimization metaheuristics.

Compares a method's performance on classical benchmarks against shifted
copies of the same problems and aggregates the per-function degradation
ratios into a geometric-mean verdict.
"""

from .audit import (
    CENTER_BIASED,
    NOT_DETECTED,
    SHIFTED,
    UNSHIFTED,
    AuditCellResult,
    AuditConfig,
    AuditRecord,
    AuditResults,
    MethodReport,
    ci_preset,
    clamp_error,
    classify,
    compute_ratio,
    geometric_mean,
    paper_preset,
    results_from_json,
    results_to_json,
    run_audit,
    run_cell,
)
from .errors import BudgetExhausted, ConfigurationError
from .functions import (
    FUNCTION_IDS,
    BenchmarkFunction,
    ShiftSpec,
    ShiftedProblem,
    evaluate,
    make_function,
    make_problem,
    make_shift,
    shifted_evaluate,
)
from .optimizers import (
    METHOD_IDS,
    ObjectiveHandle,
    OptimizerConfig,
    RunOutcome,
    ask_initial_population,
    make_config,
    minimize,
    repair_to_box,
)
from .reporting import (
    RegistryEntry,
    YearHistogram,
    emit_histogram_svg,
    load_builtin_registry,
    load_registry,
    render_table,
    year_histogram,
)

__version__ = "0.1.0"
