"""Reference metaheuristics behind a single budget-metered interface.

Seven methods share one contract: candidates are generated in
population-sized batches, repaired to the box, and fed through an
:class:`ObjectiveHandle` that counts every evaluation and tracks the
best value seen.  A run consumes its budget exactly (the final batch is
truncated mid-population) and is fully determined by the config seed.

Methods
-------
RandomSearch    uniform i.i.d. sampling of the box
DE              differential evolution, rand/1/bin (Storn & Price)
PSO             global-best particle swarm with inertia weight
ABC             artificial bee colony, single-dimension moves (Karaboga)
GWO             grey wolf optimizer (Mirjalili et al., 2014)
SCA             sine cosine algorithm (Mirjalili, 2016)
CenterSampler   synthetic control: probes the box center each batch and
                samples a shrinking Gaussian around it
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExhausted, ConfigurationError
from .functions import ShiftedProblem

METHOD_IDS = ("RandomSearch", "DE", "PSO", "ABC", "GWO", "SCA", "CenterSampler")


def canonical_method_id(raw: str) -> str:
    """Normalize user input like ``de`` or ``center_sampler``."""
    key = raw.strip().lower().replace("_", "").replace("-", "")
    for mid in METHOD_IDS:
        if key == mid.lower():
            return mid
    raise ConfigurationError(f"unknown method: {raw!r}")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    default: float
    low: float
    high: float


# method -> (default population, minimum population, hyperparameter specs)
_CATALOG: dict[str, tuple[int, int, tuple[ParamSpec, ...]]] = {
    "RandomSearch": (50, 2, ()),
    "DE": (
        50,
        4,
        (
            ParamSpec("differential_weight", 0.5, 0.0, 2.0),
            ParamSpec("crossover_rate", 0.9, 0.0, 1.0),
        ),
    ),
    "PSO": (
        50,
        2,
        (
            ParamSpec("inertia", 0.729, 0.0, 1.0),
            ParamSpec("cognitive", 1.49445, 0.0, 4.0),
            ParamSpec("social", 1.49445, 0.0, 4.0),
            ParamSpec("velocity_fraction", 0.5, 0.0, 1.0),
        ),
    ),
    "ABC": (50, 2, (ParamSpec("limit_factor", 0.5, 0.0, 10.0),)),
    "GWO": (30, 2, (ParamSpec("pack_pressure", 2.0, 0.0, 4.0),)),
    "SCA": (30, 2, (ParamSpec("amplitude", 2.0, 0.0, 4.0),)),
    "CenterSampler": (50, 2, (ParamSpec("sigma_fraction", 0.3, 0.0, 1.0),)),
}


@dataclass(frozen=True)
class OptimizerConfig:
    """A named, seeded method with resolved hyperparameters."""

    method_id: str
    population_size: int
    hyperparameters: dict[str, float]
    seed: int


def make_config(method_id: str, seed: int = 0, population_size: Optional[int] = None,
                hyperparameters: Optional[dict[str, float]] = None) -> OptimizerConfig:
    """Resolve defaults and validate ranges for one method."""
    mid = canonical_method_id(method_id)
    default_pop, min_pop, specs = _CATALOG[mid]
    pop = default_pop if population_size is None else int(population_size)
    if pop < min_pop:
        raise ConfigurationError(f"{mid} needs population_size >= {min_pop}, got {pop}")
    params = {s.name: s.default for s in specs}
    for name, value in (hyperparameters or {}).items():
        spec = next((s for s in specs if s.name == name), None)
        if spec is None:
            raise ConfigurationError(f"{mid} has no hyperparameter {name!r}")
        if not spec.low <= value <= spec.high:
            raise ConfigurationError(
                f"{mid}.{name} must be in [{spec.low}, {spec.high}], got {value}"
            )
        params[name] = float(value)
    return OptimizerConfig(method_id=mid, population_size=pop,
                           hyperparameters=params, seed=int(seed) & ((1 << 64) - 1))


def method_catalog() -> list[dict]:
    """Catalog rows for the CSV export (one per method)."""
    rows = []
    for mid in METHOD_IDS:
        default_pop, _, specs = _CATALOG[mid]
        rows.append(
            {
                "method_id": mid,
                "default_population": default_pop,
                "hyperparameters": ";".join(f"{s.name}={s.default}" for s in specs),
            }
        )
    return rows


@dataclass(frozen=True)
class RunOutcome:
    best_value: float
    best_point: np.ndarray
    evaluations_used: int
    seed: int


class ObjectiveHandle:
    """Budget-metered access to a (possibly shifted) objective.

    Counts every evaluation, truncates batches that would overrun the
    budget, raises :class:`BudgetExhausted` once nothing remains, and
    remembers the best (value, point) pair returned so far — noise
    included, so the noisy Quartic is audited on what the optimizer
    actually saw.
    """

    def __init__(self, problem: ShiftedProblem, budget: int,
                 noise_rng: Optional[np.random.Generator] = None):
        if budget < 1:
            raise ConfigurationError(f"budget must be >= 1, got {budget}")
        self.problem = problem
        self.budget = int(budget)
        self.noise_rng = noise_rng
        self.used = 0
        self.best_value = float("inf")
        self.best_point: Optional[np.ndarray] = None

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate up to ``remaining`` rows of ``points``, in order.

        Returns the values of the rows that fit in the budget; the
        caller sees a short array when the batch was truncated.
        """
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget of {self.budget} evaluations spent")
        points = np.asarray(points, dtype=float)
        if points.ndim != 2:
            raise ValueError(f"expected a (n, d) batch, got shape {points.shape}")
        k = min(points.shape[0], self.remaining)
        points = points[:k]
        values = self.problem.evaluate_batch(points, self.noise_rng)
        self.used += k
        i = int(np.argmin(values))
        if values[i] < self.best_value:
            self.best_value = float(values[i])
            self.best_point = points[i].copy()
        return values

    def evaluate(self, point: np.ndarray) -> float:
        point = np.asarray(point, dtype=float)
        return float(self.evaluate_batch(point[None, :])[0])


def repair_to_box(x: np.ndarray, bound: float) -> np.ndarray:
    """Clamp every coordinate to [-bound, bound]."""
    return np.clip(x, -bound, bound)


def ask_initial_population(config: OptimizerConfig, bound: float, dimension: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Uniform i.i.d. start points, identical policy for every method."""
    return rng.uniform(-bound, bound, size=(config.population_size, dimension))


def _schedule_length(budget: int, population: int) -> int:
    # generations available after the initial population; drives the
    # linear parameter schedules, floor of 1 to keep ratios finite
    return max(1, budget // population - 1)


def _run_random_search(config, handle, rng, bound, dim):
    n = config.population_size
    handle.evaluate_batch(ask_initial_population(config, bound, dim, rng))
    while True:
        handle.evaluate_batch(rng.uniform(-bound, bound, size=(n, dim)))


def _distinct_triples(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # three mutually distinct partner indices per row, none equal to the row
    rows = np.arange(n)
    r = rng.integers(0, n, size=(n, 3))
    while True:
        bad = (
            (r[:, 0] == rows) | (r[:, 1] == rows) | (r[:, 2] == rows)
            | (r[:, 0] == r[:, 1]) | (r[:, 0] == r[:, 2]) | (r[:, 1] == r[:, 2])
        )
        if not bad.any():
            return r[:, 0], r[:, 1], r[:, 2]
        r[bad] = rng.integers(0, n, size=(int(bad.sum()), 3))


def _run_de(config, handle, rng, bound, dim):
    """DE/rand/1/bin with synchronous (deferred) replacement."""
    n = config.population_size
    fw = config.hyperparameters["differential_weight"]
    cr = config.hyperparameters["crossover_rate"]
    pop = ask_initial_population(config, bound, dim, rng)
    vals = handle.evaluate_batch(pop)
    rows = np.arange(n)
    while True:
        r1, r2, r3 = _distinct_triples(rng, n)
        mutants = pop[r1] + fw * (pop[r2] - pop[r3])
        cross = rng.random((n, dim)) < cr
        cross[rows, rng.integers(0, dim, n)] = True
        trials = np.where(cross, mutants, pop)
        np.clip(trials, -bound, bound, out=trials)
        tvals = handle.evaluate_batch(trials)
        k = tvals.shape[0]
        better = tvals <= vals[:k]
        pop[:k][better] = trials[:k][better]
        vals[:k][better] = tvals[better]


def _run_pso(config, handle, rng, bound, dim):
    """Global-best PSO, inertia-weight form, synchronous updates."""
    n = config.population_size
    w = config.hyperparameters["inertia"]
    c1 = config.hyperparameters["cognitive"]
    c2 = config.hyperparameters["social"]
    vmax = config.hyperparameters["velocity_fraction"] * 2.0 * bound
    pop = ask_initial_population(config, bound, dim, rng)
    vals = handle.evaluate_batch(pop)
    pbest = pop.copy()
    pbest_vals = vals.copy()
    g = int(np.argmin(vals))
    gbest = pop[g].copy()
    gbest_val = float(vals[g])
    vel = np.zeros((n, dim))
    while True:
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        vel = w * vel + c1 * r1 * (pbest - pop) + c2 * r2 * (gbest - pop)
        np.clip(vel, -vmax, vmax, out=vel)
        pop = repair_to_box(pop + vel, bound)
        new_vals = handle.evaluate_batch(pop)
        k = new_vals.shape[0]
        better = new_vals < pbest_vals[:k]
        pbest[:k][better] = pop[:k][better]
        pbest_vals[:k][better] = new_vals[better]
        j = int(np.argmin(pbest_vals))
        if pbest_vals[j] < gbest_val:
            gbest = pbest[j].copy()
            gbest_val = float(pbest_vals[j])


def _single_dim_moves(pop, partners, dims, phi, bound):
    # v_ij = x_ij + phi * (x_ij - x_kj) on one random dimension per source
    rows = np.arange(pop.shape[0])
    cand = pop.copy()
    cur = pop[rows, dims]
    cand[rows, dims] = np.clip(cur + phi * (cur - pop[partners, dims]), -bound, bound)
    return cand


def _partners(rng: np.random.Generator, n: int, rows: np.ndarray) -> np.ndarray:
    p = rng.integers(0, n, size=rows.shape[0])
    while True:
        bad = p == rows
        if not bad.any():
            return p
        p[bad] = rng.integers(0, n, size=int(bad.sum()))


def _run_abc(config, handle, rng, bound, dim):
    """Artificial bee colony: employed / onlooker / scout cycle."""
    n = config.population_size
    limit = round(config.hyperparameters["limit_factor"] * n * dim)
    pop = ask_initial_population(config, bound, dim, rng)
    vals = handle.evaluate_batch(pop)
    trials = np.zeros(n, dtype=int)
    rows = np.arange(n)
    while True:
        # employed bees: one candidate per source
        cand = _single_dim_moves(pop, _partners(rng, n, rows), rng.integers(0, dim, n),
                                 rng.uniform(-1.0, 1.0, n), bound)
        cvals = handle.evaluate_batch(cand)
        k = cvals.shape[0]
        better = cvals <= vals[:k]
        pop[:k][better] = cand[:k][better]
        vals[:k][better] = cvals[better]
        trials[:k] = np.where(better, 0, trials[:k] + 1)

        # onlooker bees: roulette over cost-derived fitness
        fit = np.where(vals >= 0.0, 1.0 / (1.0 + vals), 1.0 + np.abs(vals))
        cum = np.cumsum(fit / fit.sum())
        chosen = np.minimum(np.searchsorted(cum, rng.random(n), side="right"), n - 1)
        cand = _single_dim_moves(pop[chosen], _partners(rng, n, chosen),
                                 rng.integers(0, dim, n), rng.uniform(-1.0, 1.0, n), bound)
        cvals = handle.evaluate_batch(cand)
        for j in range(cvals.shape[0]):
            i = chosen[j]
            if cvals[j] <= vals[i]:
                pop[i] = cand[j]
                vals[i] = cvals[j]
                trials[i] = 0
            else:
                trials[i] += 1

        # scout: abandon the most-starved source, at most one per cycle
        worst = int(np.argmax(trials))
        if trials[worst] > limit:
            fresh = rng.uniform(-bound, bound, size=(1, dim))
            fvals = handle.evaluate_batch(fresh)
            pop[worst] = fresh[0]
            vals[worst] = fvals[0]
            trials[worst] = 0


def _run_gwo(config, handle, rng, bound, dim):
    """Grey wolf optimizer: pack follows the three best-so-far leaders.

    For each wolf and leader L: X_L = L - A |C L - X| with A in [-a, a]
    and C in [0, 2]; the new position is the mean of the three pulls and
    a decays linearly from ``pack_pressure`` to 0.
    """
    n = config.population_size
    a0 = config.hyperparameters["pack_pressure"]
    horizon = _schedule_length(handle.budget, n)
    pop = ask_initial_population(config, bound, dim, rng)
    vals = handle.evaluate_batch(pop)
    leader_vals = [float("inf")] * 3
    leader_pts = [None] * 3

    def absorb(values, points):
        for j in range(values.shape[0]):
            v = float(values[j])
            if v < leader_vals[0]:
                leader_vals[1:] = leader_vals[:2]
                leader_pts[1:] = leader_pts[:2]
                leader_vals[0] = v
                leader_pts[0] = points[j].copy()
            elif v < leader_vals[1]:
                leader_vals[2] = leader_vals[1]
                leader_pts[2] = leader_pts[1]
                leader_vals[1] = v
                leader_pts[1] = points[j].copy()
            elif v < leader_vals[2]:
                leader_vals[2] = v
                leader_pts[2] = points[j].copy()

    absorb(vals, pop)
    for i in (1, 2):
        # tiny packs cannot fill three distinct leaders from the start
        if leader_pts[i] is None:
            leader_pts[i] = leader_pts[i - 1].copy()
            leader_vals[i] = leader_vals[i - 1]
    t = 0
    while True:
        a = a0 * max(0.0, 1.0 - t / horizon)
        guided = np.zeros((n, dim))
        for leader in leader_pts:
            amp = a * (2.0 * rng.random((n, dim)) - 1.0)
            attract = 2.0 * rng.random((n, dim))
            guided += leader - amp * np.abs(attract * leader - pop)
        pop = repair_to_box(guided / 3.0, bound)
        vals = handle.evaluate_batch(pop)
        absorb(vals, pop)
        t += 1


def _run_sca(config, handle, rng, bound, dim):
    """Sine cosine algorithm: oscillating pulls toward the best-so-far."""
    n = config.population_size
    a0 = config.hyperparameters["amplitude"]
    horizon = _schedule_length(handle.budget, n)
    pop = ask_initial_population(config, bound, dim, rng)
    vals = handle.evaluate_batch(pop)
    g = int(np.argmin(vals))
    dest = pop[g].copy()
    dest_val = float(vals[g])
    t = 0
    while True:
        r1 = a0 * max(0.0, 1.0 - t / horizon)
        r2 = rng.uniform(0.0, 2.0 * np.pi, size=(n, dim))
        r3 = rng.uniform(0.0, 2.0, size=(n, dim))
        r4 = rng.random((n, dim))
        wave = np.where(r4 < 0.5, np.sin(r2), np.cos(r2))
        pop = repair_to_box(pop + r1 * wave * np.abs(r3 * dest - pop), bound)
        vals = handle.evaluate_batch(pop)
        j = int(np.argmin(vals))
        if vals[j] < dest_val:
            dest = pop[j].copy()
            dest_val = float(vals[j])
        t += 1


def _run_center_sampler(config, handle, rng, bound, dim):
    """Positive control: probe the box center, then sample around it.

    Initialization is uniform like every other method; afterwards each
    batch spends one evaluation on the exact center and the rest on a
    Gaussian whose spread shrinks linearly to zero.
    """
    n = config.population_size
    sigma0 = config.hyperparameters["sigma_fraction"] * bound
    horizon = _schedule_length(handle.budget, n)
    handle.evaluate_batch(ask_initial_population(config, bound, dim, rng))
    t = 1
    while True:
        sigma = sigma0 * max(0.0, 1.0 - t / horizon)
        batch = np.zeros((n, dim))
        batch[1:] = repair_to_box(sigma * rng.standard_normal((n - 1, dim)), bound)
        handle.evaluate_batch(batch)
        t += 1


_RUNNERS = {
    "RandomSearch": _run_random_search,
    "DE": _run_de,
    "PSO": _run_pso,
    "ABC": _run_abc,
    "GWO": _run_gwo,
    "SCA": _run_sca,
    "CenterSampler": _run_center_sampler,
}


def minimize(config: OptimizerConfig, handle: ObjectiveHandle) -> RunOutcome:
    """Run one method against one handle until the budget is spent.

    Deterministic given (config.seed, problem): all randomness flows
    from one generator seeded by the config.
    """
    if handle.used != 0:
        raise ValueError("handle must be fresh (no evaluations used)")
    if handle.problem.dimension < 2:
        raise ValueError(f"problem dimension must be >= 2, got {handle.problem.dimension}")
    if handle.budget < config.population_size:
        raise ConfigurationError(
            f"budget {handle.budget} cannot initialize a population of "
            f"{config.population_size}"
        )
    rng = np.random.default_rng(config.seed)
    runner = _RUNNERS[config.method_id]
    try:
        runner(config, handle, rng, handle.problem.bound, handle.problem.dimension)
    except BudgetExhausted:
        pass
    assert handle.best_point is not None
    return RunOutcome(
        best_value=handle.best_value,
        best_point=handle.best_point,
        evaluations_used=handle.used,
        seed=config.seed,
    )
