"""Classical benchmark function suite and the shift transform.

Thirteen scalable minimization problems (Sphere, the Schwefel family,
Rosenbrock, Step, noisy Quartic, Rastrigin, Ackley, Griewank and the two
Penalized functions), each over a symmetric box [-b, b]^d.  ``make_shift``
builds a constant displacement vector and ``ShiftedProblem`` composes
``x -> f(x + s)`` over the unchanged box, which moves the optimum away
from the box center without altering the optimal value.

Evaluators are pure (the noisy Quartic takes an explicit RNG) and accept
batches: a ``(n, d)`` array yields ``(n,)`` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError

FUNCTION_IDS = (
    "F01", "F02", "F03", "F04", "F05", "F06", "F07",
    "F08", "F09", "F10", "F11", "F12", "F13",
)

UNIMODAL = "Unimodal"
MULTIMODAL = "Multimodal"
SEPARABLE = "Separable"
NONSEPARABLE = "NonSeparable"

# Per-dimension optimum of -x*sin(sqrt(|x|)) on [-500, 500], attained
# near x = 420.9687.
_SCHWEFEL_226_OPT = -418.9828872724338


def _f01_sphere(x: np.ndarray) -> np.ndarray:
    # sum x_i^2
    return (x * x).sum(axis=1)


def _f02_schwefel_2_22(x: np.ndarray) -> np.ndarray:
    # sum |x_i| + prod |x_i|
    a = np.abs(x)
    return a.sum(axis=1) + a.prod(axis=1)


def _f03_schwefel_1_2(x: np.ndarray) -> np.ndarray:
    # sum_i (sum_{j<=i} x_j)^2
    c = np.cumsum(x, axis=1)
    return (c * c).sum(axis=1)


def _f04_schwefel_2_21(x: np.ndarray) -> np.ndarray:
    # max_i |x_i|
    return np.abs(x).max(axis=1)


def _f05_rosenbrock(x: np.ndarray) -> np.ndarray:
    # sum 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2
    head, tail = x[:, :-1], x[:, 1:]
    return (100.0 * (tail - head * head) ** 2 + (head - 1.0) ** 2).sum(axis=1)


def _f06_step_smooth(x: np.ndarray) -> np.ndarray:
    # sum (x_i + 0.5)^2
    y = x + 0.5
    return (y * y).sum(axis=1)


def _f06_step_floor(x: np.ndarray) -> np.ndarray:
    # classical variant: sum floor(x_i + 0.5)^2
    y = np.floor(x + 0.5)
    return (y * y).sum(axis=1)


def _f07_quartic(x: np.ndarray) -> np.ndarray:
    # sum i * x_i^4; the uniform noise term is added by the caller
    idx = np.arange(1, x.shape[1] + 1, dtype=float)
    x2 = x * x
    return (idx * x2 * x2).sum(axis=1)


def _f08_schwefel_2_26(x: np.ndarray) -> np.ndarray:
    # -sum x_i sin(sqrt(|x_i|))
    return -(x * np.sin(np.sqrt(np.abs(x)))).sum(axis=1)


def _f09_rastrigin(x: np.ndarray) -> np.ndarray:
    # sum x_i^2 - 10 cos(2 pi x_i) + 10
    return (x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0).sum(axis=1)


def _f10_ackley(x: np.ndarray) -> np.ndarray:
    # -20 exp(-0.2 sqrt(mean x^2)) - exp(mean cos(2 pi x)) + 20 + e,
    # grouped so that both exponential pairs cancel exactly at x = 0
    d = x.shape[1]
    rms = np.sqrt((x * x).sum(axis=1) / d)
    mean_cos = np.cos(2.0 * np.pi * x).sum(axis=1) / d
    return (20.0 - 20.0 * np.exp(-0.2 * rms)) + (np.exp(1.0) - np.exp(mean_cos))


def _f11_griewank(x: np.ndarray) -> np.ndarray:
    # sum x_i^2 / 4000 - prod cos(x_i / sqrt(i)) + 1
    idx = np.arange(1, x.shape[1] + 1, dtype=float)
    return (x * x).sum(axis=1) / 4000.0 - np.cos(x / np.sqrt(idx)).prod(axis=1) + 1.0


def _penalty(x: np.ndarray, a: float) -> np.ndarray:
    # u(x, a, 100, 4) summed over coordinates
    over = np.maximum(x - a, 0.0)
    under = np.maximum(-x - a, 0.0)
    return 100.0 * (over ** 4 + under ** 4).sum(axis=1)


def _f12_penalized1(x: np.ndarray) -> np.ndarray:
    # (pi/d) [10 sin^2(pi y_1) + sum (y_i - 1)^2 (1 + 10 sin^2(pi y_{i+1}))
    #         + (y_d - 1)^2] + sum u(x_i, 10, 100, 4),  y = 1 + (x + 1)/4
    d = x.shape[1]
    y = 1.0 + (x + 1.0) / 4.0
    sin2 = np.sin(np.pi * y) ** 2
    inner = (
        10.0 * sin2[:, 0]
        + ((y[:, :-1] - 1.0) ** 2 * (1.0 + 10.0 * sin2[:, 1:])).sum(axis=1)
        + (y[:, -1] - 1.0) ** 2
    )
    return (np.pi / d) * inner + _penalty(x, 10.0)


def _f13_penalized2(x: np.ndarray) -> np.ndarray:
    # 0.1 [sin^2(3 pi x_1) + sum (x_i - 1)^2 (1 + sin^2(3 pi x_{i+1}))
    #      + (x_d - 1)^2 (1 + sin^2(2 pi x_d))] + sum u(x_i, 5, 100, 4)
    inner = (
        np.sin(3.0 * np.pi * x[:, 0]) ** 2
        + ((x[:, :-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[:, 1:]) ** 2)).sum(axis=1)
        + (x[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[:, -1]) ** 2)
    )
    return 0.1 * inner + _penalty(x, 5.0)


# id -> (name, modality, separability, box bound, x* coordinate, evaluator, noisy)
_CATALOG: dict[str, tuple] = {
    "F01": ("Sphere", UNIMODAL, SEPARABLE, 100.0, 0.0, _f01_sphere, False),
    "F02": ("Schwefel 2.22", UNIMODAL, NONSEPARABLE, 100.0, 0.0, _f02_schwefel_2_22, False),
    "F03": ("Schwefel 1.2", UNIMODAL, NONSEPARABLE, 100.0, 0.0, _f03_schwefel_1_2, False),
    "F04": ("Schwefel 2.21", UNIMODAL, SEPARABLE, 100.0, 0.0, _f04_schwefel_2_21, False),
    "F05": ("Rosenbrock", UNIMODAL, NONSEPARABLE, 30.0, 1.0, _f05_rosenbrock, False),
    "F06": ("Step", UNIMODAL, SEPARABLE, 100.0, -0.5, _f06_step_smooth, False),
    "F07": ("Quartic with noise", UNIMODAL, SEPARABLE, 1.28, 0.0, _f07_quartic, True),
    "F08": ("Schwefel 2.26", MULTIMODAL, SEPARABLE, 500.0, 420.9687, _f08_schwefel_2_26, False),
    "F09": ("Rastrigin", MULTIMODAL, SEPARABLE, 5.12, 0.0, _f09_rastrigin, False),
    "F10": ("Ackley", MULTIMODAL, NONSEPARABLE, 32.0, 0.0, _f10_ackley, False),
    "F11": ("Griewank", MULTIMODAL, NONSEPARABLE, 600.0, 0.0, _f11_griewank, False),
    "F12": ("Penalized1", MULTIMODAL, NONSEPARABLE, 50.0, -1.0, _f12_penalized1, False),
    "F13": ("Penalized2", MULTIMODAL, SEPARABLE, 50.0, 1.0, _f13_penalized2, False),
}


def canonical_function_id(raw: str) -> str:
    """Normalize user input like ``f1`` or ``F01`` to the canonical id."""
    s = raw.strip().upper()
    if not s.startswith("F"):
        raise ConfigurationError(f"unknown benchmark function: {raw!r}")
    digits = s[1:]
    if not digits.isdigit():
        raise ConfigurationError(f"unknown benchmark function: {raw!r}")
    fid = f"F{int(digits):02d}"
    if fid not in _CATALOG:
        raise ConfigurationError(f"unknown benchmark function: {raw!r}")
    return fid


@dataclass(frozen=True)
class BenchmarkFunction:
    """One suite member, bound to a concrete dimension.

    ``bound`` is the symmetric box half-width b: the search box is
    [-b, b]^dimension.  ``f_star``/``x_star`` describe the known optimum
    (``x_star`` is replicated across coordinates).  ``f_at_zero`` is the
    noiseless value at the zero vector.
    """

    id: str
    name: str
    modality: str
    separability: str
    bound: float
    dimension: int
    f_star: float
    x_star: float
    noisy: bool
    _evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    @property
    def low(self) -> float:
        return -self.bound

    @property
    def high(self) -> float:
        return self.bound

    @property
    def f_at_zero(self) -> float:
        return self.evaluate(np.zeros(self.dimension))

    def evaluate_batch(self, x: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """Evaluate a ``(n, d)`` batch of points.

        Points may lie outside the box; the evaluator is total.  For the
        noisy Quartic one uniform [0, 1) draw per row is added when
        ``rng`` is given; all other functions ignore ``rng``.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.dimension:
            raise ValueError(
                f"{self.id} expects points of dimension {self.dimension}, "
                f"got array of shape {x.shape}"
            )
        values = self._evaluator(x)
        if self.noisy and rng is not None:
            values = values + rng.random(x.shape[0])
        if np.isnan(values).any():
            raise ValueError(f"{self.id} evaluated to NaN (NaN in input point?)")
        return values

    def evaluate(self, x: np.ndarray, rng: Optional[np.random.Generator] = None) -> float:
        """Evaluate a single d-vector."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"expected a 1-d point, got shape {x.shape}")
        return float(self.evaluate_batch(x[None, :], rng)[0])

    def optimum_point(self) -> np.ndarray:
        return np.full(self.dimension, self.x_star)


def make_function(function_id: str, dimension: int, *, floor_step: bool = False) -> BenchmarkFunction:
    """Build a suite member for the given dimension.

    ``floor_step`` swaps the Step function (F06) for its classical
    floor-based form sum floor(x_i + 0.5)^2; the default smooth form
    sum (x_i + 0.5)^2 is the one whose value at zero is 7.5.
    """
    fid = canonical_function_id(function_id)
    if dimension < 2:
        raise ConfigurationError(f"dimension must be >= 2, got {dimension}")
    name, modality, separability, bound, x_star, evaluator, noisy = _CATALOG[fid]
    if fid == "F06" and floor_step:
        evaluator = _f06_step_floor
    f_star = _SCHWEFEL_226_OPT * dimension if fid == "F08" else 0.0
    return BenchmarkFunction(
        id=fid,
        name=name,
        modality=modality,
        separability=separability,
        bound=bound,
        dimension=dimension,
        f_star=f_star,
        x_star=x_star,
        noisy=noisy,
        _evaluator=evaluator,
    )


def evaluate(function: BenchmarkFunction, x: np.ndarray,
             rng: Optional[np.random.Generator] = None) -> float:
    """Functional form of :meth:`BenchmarkFunction.evaluate`."""
    return function.evaluate(x, rng)


@dataclass(frozen=True)
class ShiftSpec:
    """Constant displacement vector, expressed as a fraction of box width.

    Every component equals ``fraction * 2b`` so a fraction of 0.1 moves
    the optimum by 10% of the full range along each axis.
    """

    fraction: float
    vector: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=float)
        if v.size and not np.all(v == v[0]):
            raise ValueError("shift vector must be constant across coordinates")
        object.__setattr__(self, "vector", v)


def make_shift(function: BenchmarkFunction, fraction: float) -> ShiftSpec:
    """Build the displacement vector for one function.

    ``fraction`` must lie in [0, 0.5); 0 yields the zero vector and the
    unshifted problem.
    """
    if not 0.0 <= fraction < 0.5:
        raise ConfigurationError(f"shift fraction must be in [0, 0.5), got {fraction}")
    component = fraction * 2.0 * function.bound
    return ShiftSpec(fraction=fraction, vector=np.full(function.dimension, component))


@dataclass(frozen=True)
class ShiftedProblem:
    """The objective ``x -> f(x + s)`` over the *unchanged* box.

    The optimum moves to ``x_star - s``; the optimal value is still the
    base function's ``f_star``.
    """

    base: BenchmarkFunction
    shift: ShiftSpec

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def bound(self) -> float:
        return self.base.bound

    @property
    def f_star(self) -> float:
        return self.base.f_star

    def evaluate_batch(self, x: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.base.evaluate_batch(x + self.shift.vector, rng)

    def evaluate(self, x: np.ndarray, rng: Optional[np.random.Generator] = None) -> float:
        x = np.asarray(x, dtype=float)
        return self.base.evaluate(x + self.shift.vector, rng)


def make_problem(function_id: str, dimension: int, shift_fraction: float = 0.0,
                 *, floor_step: bool = False) -> ShiftedProblem:
    """Convenience constructor: function + shift in one call."""
    f = make_function(function_id, dimension, floor_step=floor_step)
    return ShiftedProblem(base=f, shift=make_shift(f, shift_fraction))


def shifted_evaluate(problem: ShiftedProblem, x: np.ndarray,
                     rng: Optional[np.random.Generator] = None) -> float:
    """Functional form of :meth:`ShiftedProblem.evaluate`."""
    return problem.evaluate(x, rng)


def metadata_rows(dimension: int = 30) -> list[dict]:
    """Catalog rows for the CSV export (one per function)."""
    rows = []
    for fid in FUNCTION_IDS:
        f = make_function(fid, dimension)
        rows.append(
            {
                "id": f.id,
                "name": f.name,
                "modality": f.modality,
                "separability": f.separability,
                "low": f.low,
                "high": f.high,
                "f_star": f.f_star,
                "x_star": f.x_star,
                "f_at_zero": f.f_at_zero,
            }
        )
    return rows
