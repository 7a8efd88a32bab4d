"""Reference exploration methods benchmarked against the multi-objective tableau.

Both baselines repeatedly solve single-objective LPs over the same budgeted
polytope, every solve warm-started from the shared feasible basis but with a
freshly built tableau, which mirrors what off-the-shelf solvers allow.

SPORES runs one optimization sequence per (a, b) weight pair and technology:
the first term favors or hampers that technology's aggregate capacity, the
second term penalizes capacities deployed in earlier iterations through a
weight recursion. Random Directions solves fully independent objectives with
uniform random coefficients on the interest variables.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algorithm import BudgetedLP, VertexStore
from .simplex import OPTIMAL


@dataclass
class SporesConfig:
    """Sequence parameters plus the technology-to-capacity-column map.

    `gamma` is in the model's capacity units. `n_max` caps the solves per
    sequence; when a run is given a total objective budget instead, the budget
    is spread round-robin over the sequences.
    """

    capacity_columns: dict[str, tuple[int, ...]]
    r0: float = 0.5
    gamma: float = 100.0
    ab_pairs: tuple[tuple[float, float], ...] = (
        (-100.0, 1.0), (-10.0, 1.0), (-1.0, 1.0), (1.0, 1.0), (10.0, 1.0), (100.0, 1.0),
    )
    n_max: int = 5

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError("r0 must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not self.capacity_columns:
            raise ValueError("capacity_columns must not be empty")
        self.capacity_columns = {
            tech: tuple(int(j) for j in cols) for tech, cols in self.capacity_columns.items()
        }

    @property
    def technologies(self) -> tuple[str, ...]:
        return tuple(self.capacity_columns)

    @property
    def all_columns(self) -> tuple[int, ...]:
        out = []
        for cols in self.capacity_columns.values():
            out.extend(cols)
        return tuple(out)

    @property
    def n_sequences(self) -> int:
        return len(self.ab_pairs) * len(self.capacity_columns)


@dataclass
class SporesWeights:
    """Per-capacity-column penalty weights; nondecreasing within a sequence."""

    w: np.ndarray
    iteration: int = 0

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float).copy()


def spores_weight_init(optimal_capacities, config: SporesConfig) -> SporesWeights:
    """r0 where the cost-optimal capacity exceeds gamma, else zero."""
    caps = np.asarray(optimal_capacities, dtype=float)
    return SporesWeights(np.where(caps > config.gamma, config.r0, 0.0), iteration=0)


def spores_weight_update(weights: SporesWeights, previous_capacities,
                         config: SporesConfig) -> SporesWeights:
    """Add r0 wherever the previous solution deployed capacity above gamma."""
    caps = np.asarray(previous_capacities, dtype=float)
    step = np.where(caps > config.gamma, config.r0, 0.0)
    return SporesWeights(weights.w + step, iteration=weights.iteration + 1)


def spores_objective(weights: SporesWeights, technology: str, a: float, b: float,
                     config: SporesConfig, n_columns: int) -> np.ndarray:
    """Cost vector: a on the favored technology's capacity columns plus b*w everywhere."""
    if technology not in config.capacity_columns:
        raise KeyError(f"unknown technology {technology!r}")
    c = np.zeros(n_columns)
    cols = list(config.all_columns)
    c[cols] += b * weights.w
    for j in config.capacity_columns[technology]:
        c[j] += a
    return c


@dataclass
class MgaResult:
    """Vertices and pivot accounting for one baseline run."""

    method: str
    store: VertexStore
    total_phase2_pivots: int
    per_run_pivots: list[int]
    n_solves: int
    flops: int = 0
    seed: int | None = None
    full_vertices: list[np.ndarray] | None = None


def _sequence_lengths(config: SporesConfig, total_objectives) -> list[int]:
    n_seq = config.n_sequences
    if total_objectives is None:
        return [config.n_max] * n_seq
    base, extra = divmod(int(total_objectives), n_seq)
    return [base + (1 if s < extra else 0) for s in range(n_seq)]


def run_spores(budgeted: BudgetedLP, config: SporesConfig,
               total_objectives: int | None = None,
               dedupe_tol: float = 1e-9,
               keep_full_vertices: bool = False) -> MgaResult:
    """All SPORES sequences over the budgeted LP.

    Each sequence reuses the shared feasible basis per solve, updates weights
    from the previous solution, and stops early when two consecutive solutions
    have identical capacities (the recursion's fixed point). A failed solve
    aborts only its own sequence.
    """
    lp = budgeted.lp
    interest = list(lp.interest_columns)
    cap_cols = list(config.all_columns)
    caps_opt = budgeted.cost_vertex[cap_cols]
    fixed_point_tol = 1e-6 * max(1.0, float(np.abs(caps_opt).max()))

    store = VertexStore(len(interest), dedupe_tol)
    per_run = []
    flops = 0
    full_vertices = [] if keep_full_vertices else None
    lengths = _sequence_lengths(config, total_objectives)
    seq = 0
    for a, b in config.ab_pairs:
        for tech in config.technologies:
            budget = lengths[seq]
            seq += 1
            weights = spores_weight_init(caps_opt, config)
            previous = None
            for _ in range(budget):
                c = spores_objective(weights, tech, a, b, config, lp.n)
                result = budgeted.solve_objective(c)
                if result.status != OPTIMAL:
                    warnings.warn(
                        f"SPORES sequence ({a}, {b}, {tech}) aborted: {result.status}",
                        stacklevel=2,
                    )
                    break
                per_run.append(result.phase2_pivots)
                flops += result.flops
                caps = result.vertex[cap_cols]
                store.add(result.vertex[interest], budgeted.cost_of(result.vertex), optimal=True)
                if full_vertices is not None:
                    full_vertices.append(result.vertex)
                if previous is not None and np.abs(caps - previous).max() <= fixed_point_tol:
                    break
                weights = spores_weight_update(weights, caps, config)
                previous = caps
    return MgaResult(
        method="spores",
        store=store,
        total_phase2_pivots=int(sum(per_run)),
        per_run_pivots=per_run,
        n_solves=len(per_run),
        flops=flops,
        full_vertices=full_vertices,
    )


@dataclass
class RandomDirectionsConfig:
    n_objectives: int
    variant: str = "symmetric"  # coefficients on [-1, 1]; "positive" restricts to [0, 1]
    seed: int | None = 0

    def __post_init__(self):
        if self.n_objectives < 1:
            raise ValueError("n_objectives must be >= 1")
        if self.variant not in ("symmetric", "positive"):
            raise ValueError(f"unknown variant {self.variant!r}")


def sample_random_objective(rng: np.random.Generator, variant: str,
                            interest_columns, n_columns: int):
    """Uniform coefficients on the interest columns plus the objective sense.

    The symmetric variant draws coefficients on [-1, 1] and the sense
    uniformly (statistically redundant there, but it keeps the formulation's
    letter). The positive variant models implementations that restrict
    coefficients to [0, 1] under a fixed minimize sense; that restriction is
    what confines their search directions to one orthant. Draw order is fixed
    (coefficients, then sense) so streams are reproducible.
    """
    low = -1.0 if variant == "symmetric" else 0.0
    beta = rng.uniform(low, 1.0, size=len(interest_columns))
    if variant == "symmetric":
        sense = "min" if rng.random() < 0.5 else "max"
    else:
        sense = "min"
    c = np.zeros(n_columns)
    c[list(interest_columns)] = beta
    return c, sense


def run_random_directions(budgeted: BudgetedLP, config: RandomDirectionsConfig,
                          rng: np.random.Generator | None = None,
                          dedupe_tol: float = 1e-9,
                          keep_full_vertices: bool = False) -> MgaResult:
    """Independent random-objective solves over the budgeted LP."""
    lp = budgeted.lp
    interest = list(lp.interest_columns)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    store = VertexStore(len(interest), dedupe_tol)
    per_run = []
    flops = 0
    full_vertices = [] if keep_full_vertices else None
    for _ in range(config.n_objectives):
        c, sense = sample_random_objective(rng, config.variant, interest, lp.n)
        cost = c if sense == "min" else -c
        result = budgeted.solve_objective(cost)
        if result.status != OPTIMAL:
            raise RuntimeError(
                f"random-directions solve ended {result.status}; "
                "the budgeted polytope should be bounded in every interest direction"
            )
        per_run.append(result.phase2_pivots)
        flops += result.flops
        store.add(result.vertex[interest], budgeted.cost_of(result.vertex), optimal=True)
        if full_vertices is not None:
            full_vertices.append(result.vertex)
    return MgaResult(
        method="random_directions",
        store=store,
        total_phase2_pivots=int(sum(per_run)),
        per_run_pivots=per_run,
        n_solves=len(per_run),
        flops=flops,
        seed=config.seed,
        full_vertices=full_vertices,
    )
