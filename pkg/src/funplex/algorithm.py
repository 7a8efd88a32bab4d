"""Near-optimal space exploration with a multi-objective simplex tableau.

The explorer draws objective directions from a unit hypersphere, scales them
by per-variable characteristic magnitudes, and optimizes them over the
budget-constrained polytope in order of angular similarity. One tableau holds
a relative-cost row for every objective, so after each pivot the optimality
of all objectives can be checked and every traversed vertex harvested.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .lp import InfeasibleError, StandardFormLP, UnboundedError
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    REFACTOR_EVERY,
    UNBOUNDED,
    Basis,
    SimplexTableau,
    optimize_tableau,
    solve,
)


@dataclass(frozen=True)
class Direction:
    """Unit vector in interest-variable space."""

    d: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.d, dtype=float).ravel()
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"direction norm {norm} is not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "d", arr)

    @property
    def n_dims(self) -> int:
        return self.d.size


@dataclass
class DirectionSet:
    """Objective directions plus the scales that turn them into cost vectors."""

    directions: list[Direction]
    scales: np.ndarray
    interest_columns: tuple[int, ...]
    seed: int | None = None

    def __post_init__(self):
        self.scales = np.asarray(self.scales, dtype=float).ravel()
        self.interest_columns = tuple(int(j) for j in self.interest_columns)
        if not self.directions:
            raise ValueError("need at least one direction")
        if np.any(self.scales <= 0):
            raise ValueError("scales must be positive")
        n_dims = self.directions[0].n_dims
        if self.scales.size != n_dims or len(self.interest_columns) != n_dims:
            raise ValueError("scales/interest width does not match directions")

    def __len__(self):
        return len(self.directions)

    def direction_matrix(self) -> np.ndarray:
        return np.vstack([d.d for d in self.directions])


def sample_hypersphere(n_dims: int, rng: np.random.Generator) -> Direction:
    """Uniform point on the unit sphere: normalized standard Gaussian draw."""
    if n_dims < 1:
        raise ValueError("n_dims must be >= 1")
    while True:
        z = rng.standard_normal(n_dims)
        norm = float(np.linalg.norm(z))
        if norm > 1e-12:
            return Direction(z / norm)


def generate_direction_set(n_objectives, scales, interest_columns,
                           rng=None, seed=None) -> DirectionSet:
    if rng is None:
        rng = np.random.default_rng(seed)
    n_dims = len(interest_columns)
    directions = [sample_hypersphere(n_dims, rng) for _ in range(n_objectives)]
    return DirectionSet(directions, scales, tuple(interest_columns), seed=seed)


def make_objective(direction: Direction, dset: DirectionSet, n_columns: int) -> np.ndarray:
    """Full-width cost vector with d_i / L_i on the interest columns."""
    c = np.zeros(n_columns)
    c[list(dset.interest_columns)] = direction.d / dset.scales
    return c


def characteristic_scales(lp: StandardFormLP, optimal_vertex, fallback=1.0) -> np.ndarray:
    """Per-interest-variable magnitudes taken from the cost optimum.

    Components that are (near) zero at the optimum fall back to a supplied
    default, scalar or per-variable. The zero threshold is relative to the
    largest optimal interest value.
    """
    vertex = np.asarray(optimal_vertex, dtype=float)
    values = np.abs(vertex[list(lp.interest_columns)])
    threshold = 1e-6 * (values.max() if values.size and values.max() > 0 else 1.0)
    fallback = np.broadcast_to(np.asarray(fallback, dtype=float), values.shape)
    if np.any(fallback <= 0):
        raise ValueError("fallback scales must be positive")
    return np.where(values > threshold, values, fallback)


def angle_distance(d1: Direction, d2: Direction) -> float:
    """Angle between two unit directions, clamped against rounding."""
    return float(np.arccos(np.clip(np.dot(d1.d, d2.d), -1.0, 1.0)))


def select_next_objective(current: Direction, dset: DirectionSet, unoptimized) -> int:
    """Index of the unoptimized objective closest in angle (lowest index wins ties)."""
    unoptimized = np.asarray(unoptimized, dtype=bool)
    if not unoptimized.any():
        raise ValueError("no unoptimized objectives remain")
    cosines = np.clip(dset.direction_matrix() @ current.d, -1.0, 1.0)
    angles = np.arccos(cosines)
    angles[~unoptimized] = np.inf
    return int(np.argmin(angles))


# -- budget -------------------------------------------------------------------


@dataclass
class BudgetedLP:
    """Base LP plus the near-optimal budget row ``c.x + s = limit``.

    The budget row is scaled by the largest cost coefficient so its entries
    stay comparable with the rest of the matrix; `budget_scale` records the
    factor. `warm_basis` extends the cost-optimal basis with the budget slack
    and is the shared feasible starting point for every exploration method.
    """

    base: StandardFormLP
    lp: StandardFormLP
    f_min: float
    epsilon: float
    budget_row: int
    budget_slack_column: int
    budget_scale: float
    warm_basis: Basis
    cost_vertex: np.ndarray
    _warm_block: np.ndarray | None = field(default=None, repr=False)

    @property
    def budget_limit(self) -> float:
        return self.f_min + self.epsilon * abs(self.f_min)

    def cost_of(self, vertex) -> float:
        """Base objective value of a full vertex of the budgeted LP."""
        return float(np.dot(self.base.c, np.asarray(vertex)[: self.base.n]))

    def cost_from_slack(self, slack_value: float) -> float:
        return self.budget_limit - self.budget_scale * float(slack_value)

    def warm_block(self) -> np.ndarray:
        """Reduced constraint rows for the shared basis, computed once.

        Many independent single-objective solves start from the same basis;
        only their objective row differs, so the constraint block is shared.
        """
        if self._warm_block is None:
            idx = list(self.warm_basis)
            B = self.lp.A[:, idx]
            self._warm_block = np.linalg.solve(B, np.column_stack([self.lp.A, self.lp.b]))
        return self._warm_block

    def solve_objective(self, cost, record_vertices=False, max_pivots=None):
        """Fresh tableau over the shared basis, pivoted to this objective's optimum."""
        cost = np.asarray(cost, dtype=float).ravel()
        tableau = SimplexTableau(
            self.lp.A, self.lp.b, cost, tuple(self.warm_basis),
            cached_block=self.warm_block(),
        )
        return optimize_tableau(tableau, record_vertices=record_vertices,
                                max_pivots=max_pivots)


def build_budgeted_lp(lp: StandardFormLP, epsilon: float) -> BudgetedLP:
    """Solve the cost objective, then append the budget row with its slack.

    The limit is ``f_min + epsilon * |f_min|`` so the cost-optimal vertex
    stays feasible for any sign of the optimum.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    result = solve(lp)
    if result.status == INFEASIBLE:
        raise InfeasibleError("base LP is infeasible")
    if result.status == UNBOUNDED:
        raise UnboundedError("base LP is unbounded under the cost objective")
    f_min = result.objective_value
    limit = f_min + epsilon * abs(f_min)
    scale = max(1.0, float(np.abs(lp.c).max()))

    m, n = lp.m, lp.n
    A = np.zeros((m + 1, n + 1))
    A[:m, :n] = lp.A
    A[m, :n] = lp.c / scale
    A[m, n] = 1.0
    b = np.concatenate([lp.b, [limit / scale]])
    c = np.concatenate([lp.c, [0.0]])
    names = list(lp.column_names) + ["budget_slack"]
    budgeted = StandardFormLP(A, b, c, names, lp.interest_columns)
    warm = Basis(tuple(result.basis) + (n,))
    slack_value = (limit - f_min) / scale
    cost_vertex = np.concatenate([result.vertex, [slack_value]])
    return BudgetedLP(
        base=lp,
        lp=budgeted,
        f_min=f_min,
        epsilon=epsilon,
        budget_row=m,
        budget_slack_column=n,
        budget_scale=scale,
        warm_basis=warm,
        cost_vertex=cost_vertex,
    )


# -- vertex harvesting ----------------------------------------------------------


class VertexStore:
    """Deduplicated interest-space projections of visited vertices.

    Two projections within L-infinity `tol` of each other count as the same
    vertex; the first one seen is kept and its tag is upgraded to optimal if a
    later duplicate arrives as an optimum.
    """

    def __init__(self, n_dims: int, tol: float):
        self.n_dims = n_dims
        self.tol = float(tol)
        self._buf = np.empty((64, n_dims))
        self._n = 0
        self.costs: list[float] = []
        self.tags: list[str] = []

    def __len__(self):
        return self._n

    @property
    def points(self) -> np.ndarray:
        return self._buf[: self._n].copy()

    def add(self, projection, cost: float, optimal: bool) -> int:
        p = np.asarray(projection, dtype=float)
        if self._n:
            dist = np.abs(self._buf[: self._n] - p).max(axis=1)
            hits = np.nonzero(dist <= self.tol)[0]
            if hits.size:
                k = int(hits[0])
                if optimal and self.tags[k] != "optimal":
                    self.tags[k] = "optimal"
                return k
        if self._n == self._buf.shape[0]:
            grown = np.empty((2 * self._buf.shape[0], self.n_dims))
            grown[: self._n] = self._buf[: self._n]
            self._buf = grown
        self._buf[self._n] = p
        self.costs.append(float(cost))
        self.tags.append("optimal" if optimal else "intermediary")
        self._n += 1
        return self._n - 1


@dataclass(frozen=True)
class ExplorerOptions:
    """Switches that isolate the explorer's mechanisms for ablation runs."""

    record_intermediaries: bool = True
    check_all_objectives: bool = True
    warm_start: bool = True
    scale_objectives: bool = True


DEFAULT_OPTIONS = ExplorerOptions()

MODE_PRESETS = {
    "full": DEFAULT_OPTIONS,
    "no-intermediaries": replace(DEFAULT_OPTIONS, record_intermediaries=False),
    "warm-start-only": replace(
        DEFAULT_OPTIONS, record_intermediaries=False, check_all_objectives=False
    ),
    "cold-start": replace(DEFAULT_OPTIONS, warm_start=False),
    "unscaled": replace(DEFAULT_OPTIONS, scale_objectives=False),
}


class MultiObjectiveTableau(SimplexTableau):
    """Tableau whose objective block carries one row per MGA objective."""

    def __init__(self, budgeted: BudgetedLP, dset: DirectionSet, basis: Basis):
        lp = budgeted.lp
        costs = np.vstack([make_objective(d, dset, lp.n) for d in dset.directions])
        super().__init__(lp.A, lp.b, costs, tuple(basis))
        self.success = np.zeros(len(dset), dtype=bool)

    def check_optimal_objectives(self):
        """Latch success for rows whose relative costs are all nonnegative.

        Returns (success, newly_optimal_indices). A row that later loses
        optimality keeps its flag: the flag records "optimized at least once".
        """
        mask = self.optimal_objectives()
        newly = np.nonzero(mask & ~self.success)[0]
        self.success |= mask
        return self.success, newly


@dataclass
class ExplorationResult:
    """One explorer run: the harvested cloud plus per-objective bookkeeping."""

    store: VertexStore
    success: np.ndarray
    total_phase2_pivots: int
    objective_order: list[int]
    pivots_per_objective: np.ndarray
    first_optimal_projection: np.ndarray
    first_optimal_value: np.ndarray
    direction_set: DirectionSet
    budgeted: BudgetedLP
    flops: int = 0
    full_vertices: list[np.ndarray] | None = None

    @property
    def n_objectives(self) -> int:
        return len(self.direction_set)


def explore(budgeted: BudgetedLP, dset: DirectionSet,
            options: ExplorerOptions = DEFAULT_OPTIONS,
            keep_full_vertices: bool = False,
            dedupe_tol: float | None = None) -> ExplorationResult:
    """Optimize every objective over the budgeted polytope, harvesting vertices.

    Starts from the shared feasible basis, pivots the current objective to
    optimality, records the projected vertex after every pivot, flags any
    objective whose relative-cost row turns nonnegative, then warm-starts the
    angularly nearest unoptimized objective. Terminates once every objective
    has been optimized at least once.
    """
    n_objectives = len(dset)
    n_dims = len(dset.interest_columns)
    interest = list(dset.interest_columns)
    if dedupe_tol is None:
        dedupe_tol = 1e-6 * float(np.max(dset.scales))
    store = VertexStore(n_dims, dedupe_tol)
    success = np.zeros(n_objectives, dtype=bool)
    order: list[int] = []
    first_projection = np.full((n_objectives, n_dims), np.nan)
    first_value = np.full(n_objectives, np.nan)
    pivots_per = np.zeros(n_objectives, dtype=int)
    done_pivots = 0
    done_flops = 0
    full_vertices: list[np.ndarray] | None = [] if keep_full_vertices else None
    direction_rows = dset.direction_matrix() / dset.scales

    def spawn():
        tableau = MultiObjectiveTableau(budgeted, dset, budgeted.warm_basis)
        tableau.success = success
        return tableau

    tableau = spawn()

    def snapshot():
        projection = tableau.values_of(interest)
        cost = budgeted.cost_from_slack(tableau.value_of(budgeted.budget_slack_column))
        return projection, cost

    def mark(k: int, projection, cost):
        success[k] = True
        order.append(int(k))
        first_projection[k] = projection
        first_value[k] = float(direction_rows[k] @ projection)
        store.add(projection, cost, optimal=True)

    def harvest(projection, cost):
        if options.record_intermediaries:
            store.add(projection, cost, optimal=False)
        if full_vertices is not None:
            full_vertices.append(tableau.vertex())
        if options.check_all_objectives:
            mask = tableau.optimal_objectives()
            for k in np.nonzero(mask & ~success)[0]:
                mark(int(k), projection, cost)

    projection, cost = snapshot()
    harvest(projection, cost)

    current = 0
    while not success.all():
        if success[current]:
            current = select_next_objective(dset.directions[current], dset, ~success)
            continue
        tableau.current_objective = current
        while not success[current]:
            col = tableau.select_pivot_column()
            if col is None:
                projection, cost = snapshot()
                mark(current, projection, cost)
                break
            row = tableau.select_pivot_row(col)
            if row is None:
                raise UnboundedError(
                    f"objective {current} is unbounded over the budgeted region; "
                    "the model leaves an interest direction uncosted"
                )
            tableau.pivot(col, row)
            if tableau.pivots % REFACTOR_EVERY == 0:
                tableau.refactorize()
            pivots_per[current] += 1
            projection, cost = snapshot()
            harvest(projection, cost)
        if success.all():
            break
        nxt = select_next_objective(dset.directions[current], dset, ~success)
        if not options.warm_start:
            done_pivots += tableau.pivots
            done_flops += tableau.flops
            tableau = spawn()
        current = nxt

    return ExplorationResult(
        store=store,
        success=success.copy(),
        total_phase2_pivots=done_pivots + tableau.pivots,
        objective_order=order,
        pivots_per_objective=pivots_per,
        first_optimal_projection=first_projection,
        first_optimal_value=first_value,
        direction_set=dset,
        budgeted=budgeted,
        flops=done_flops + tableau.flops,
        full_vertices=full_vertices,
    )


def run_funplex(lp: StandardFormLP, epsilon: float, n_objectives: int, *,
                seed=None, rng=None, options: ExplorerOptions = DEFAULT_OPTIONS,
                scale_fallback=1.0, directions: DirectionSet | None = None,
                keep_full_vertices: bool = False,
                dedupe_tol: float | None = None) -> ExplorationResult:
    """End-to-end run on a base LP: budget, scales, directions, exploration.

    The cost objective is solved first; it supplies the budget limit, the
    characteristic scales, and the shared warm basis. `directions` overrides
    the random draw (used by tests with hand-picked objectives).
    """
    if not lp.interest_columns:
        raise ValueError("LP has no interest columns to explore")
    budgeted = build_budgeted_lp(lp, epsilon)
    if directions is None:
        if options.scale_objectives:
            scales = characteristic_scales(lp, budgeted.cost_vertex[: lp.n], scale_fallback)
        else:
            scales = np.ones(len(lp.interest_columns))
        dset = generate_direction_set(
            n_objectives, scales, lp.interest_columns, rng=rng, seed=seed
        )
    else:
        dset = directions
    return explore(budgeted, dset, options,
                   keep_full_vertices=keep_full_vertices, dedupe_tol=dedupe_tol)
