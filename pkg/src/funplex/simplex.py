"""Dense two-phase primal simplex over standard-form LPs.

The tableau stores the m constraint rows first and then one relative-cost
row per objective. Pivots apply the same elementary row operations to every
row, so all objective rows stay consistent with the current basis. Column
selection is Dantzig's rule with an automatic switch to Bland's rule after a
run of degenerate pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lp import (
    CyclingError,
    InfeasibleError,
    LpError,
    SingularBasisError,
    StandardFormLP,
)

FEASIBILITY_TOL = 1e-9
# a relative cost above -1e-9 counts as optimal; with periodic refactorization
# the objective-row noise sits well below this, and looser thresholds leave
# real objective improvements behind when ratio magnitudes are large
OPTIMALITY_TOL = 1e-9
PIVOT_TOL = 1e-9
# ratio-test eligibility; rows are equilibrated, so entries below this are
# noise and pivoting on them would amplify rounding error by ~1/entry
RATIO_ELIGIBLE_TOL = 1e-7
BLAND_AFTER = 50

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Basis:
    """Basic column indices in row order: row i's basic variable is indices[i]."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(j) for j in self.indices))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("basis indices must be distinct")

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass
class SolveResult:
    status: str
    vertex: np.ndarray | None
    objective_value: float | None
    phase2_pivots: int
    visited_vertices: list[np.ndarray] | None = None
    basis: Basis | None = None
    flops: int = 0


class SimplexTableau:
    """Pivotable tableau state for one basis and one or more objectives.

    Parameters are raw arrays so phase-one and membership helpers can reuse
    the machinery without wrapping their systems in :class:`StandardFormLP`.
    `entering_limit` bars columns at or beyond that index from entering the
    basis (used to keep artificial variables out once they leave).
    """

    def __init__(self, A, b, costs, basis, *, entering_limit=None,
                 bland_after=BLAND_AFTER, cached_block=None):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).ravel()
        costs = np.atleast_2d(np.asarray(costs, dtype=float))
        self._A = A
        self._b = b
        self._costs = costs
        m, n = A.shape
        idx = np.asarray(tuple(basis), dtype=int)
        if idx.size != m:
            raise ValueError(f"basis has {idx.size} columns, expected {m}")
        if costs.shape[1] != n:
            raise ValueError("objective width does not match column count")

        if m == 0:
            R = np.zeros((0, n + 1))
        elif cached_block is not None:
            # reduced constraint rows for this exact basis, precomputed by the
            # caller; avoids refactoring when many objectives share a basis
            R = np.array(cached_block, dtype=float)
            if R.shape != (m, n + 1):
                raise ValueError("cached_block shape mismatch")
        else:
            B = A[:, idx]
            try:
                R = np.linalg.solve(B, np.column_stack([A, b]))
            except np.linalg.LinAlgError as exc:
                raise SingularBasisError("basis matrix is singular") from exc
        if m and R[:, -1].min() < -FEASIBILITY_TOL:
            raise InfeasibleError("supplied basis is not primal feasible")
        obj = np.column_stack([costs, np.zeros(costs.shape[0])])
        if m:
            obj = obj - costs[:, idx] @ R
        self.body = np.vstack([R, obj])
        self.m = m
        self.n = n
        self.n_objectives = costs.shape[0]
        self.basis = idx.copy()
        self._basic_row = np.full(n, -1, dtype=int)
        self._basic_row[idx] = np.arange(m)
        # Basic columns are exact unit vectors; pivoting preserves that exactly.
        for i, j in enumerate(idx):
            self.body[:, j] = 0.0
            self.body[i, j] = 1.0
        self.current_objective = 0
        self.entering_limit = n if entering_limit is None else int(entering_limit)
        self.bland_after = bland_after
        self.pivots = 0
        self.flops = 0
        self.degenerate_streak = 0

    # -- inspection ---------------------------------------------------------

    @property
    def rhs(self) -> np.ndarray:
        return self.body[: self.m, -1]

    def objective_row(self, k=None) -> np.ndarray:
        k = self.current_objective if k is None else k
        return self.body[self.m + k, : self.n]

    def objective_value(self, k=None) -> float:
        k = self.current_objective if k is None else k
        return -float(self.body[self.m + k, -1])

    def vertex(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.basis] = self.rhs
        return x

    def value_of(self, column: int) -> float:
        row = self._basic_row[column]
        return float(self.body[row, -1]) if row >= 0 else 0.0

    def values_of(self, columns) -> np.ndarray:
        return np.array([self.value_of(j) for j in columns])

    def is_optimal(self, k=None) -> bool:
        return bool(self.objective_row(k).min(initial=0.0) >= -OPTIMALITY_TOL)

    def optimal_objectives(self) -> np.ndarray:
        """Boolean mask over objectives whose relative costs are all >= -tol."""
        if self.n == 0:
            return np.ones(self.n_objectives, dtype=bool)
        return self.body[self.m :, : self.n].min(axis=1) >= -OPTIMALITY_TOL

    def basis_object(self) -> Basis:
        return Basis(tuple(self.basis))

    # -- pivoting -----------------------------------------------------------

    def select_pivot_column(self):
        """Entering column for the current objective, or None when optimal.

        Dantzig's rule (most negative relative cost, lowest index on ties);
        after `bland_after` consecutive non-improving pivots, Bland's rule
        (lowest-index negative entry) until a strictly improving pivot.
        """
        row = self.body[self.m + self.current_objective, : self.entering_limit]
        if self.degenerate_streak >= self.bland_after:
            neg = np.nonzero(row < -OPTIMALITY_TOL)[0]
            return int(neg[0]) if neg.size else None
        j = int(np.argmin(row))
        return j if row[j] < -OPTIMALITY_TOL else None

    def select_pivot_row(self, col):
        """Minimum-ratio row for the entering column, or None when unbounded.

        Ties are broken by the lowest basic-variable index, which combined
        with the Bland fallback prevents cycling.
        """
        if self.m == 0:
            return None
        colv = self.body[: self.m, col]
        eligible = colv > RATIO_ELIGIBLE_TOL
        if not eligible.any():
            return None
        rhs = np.maximum(self.body[: self.m, -1], 0.0)
        ratios = np.full(self.m, np.inf)
        ratios[eligible] = rhs[eligible] / colv[eligible]
        best = ratios.min()
        tied = np.nonzero(ratios <= best + 1e-12 * (1.0 + best))[0]
        if tied.size == 1:
            return int(tied[0])
        return int(tied[np.argmin(self.basis[tied])])

    def pivot(self, col, row):
        """Exchange basis[row] for col via elementary row operations."""
        body = self.body
        element = body[row, col]
        if abs(element) < PIVOT_TOL:
            raise LpError(f"pivot element {element:.3e} below tolerance")
        value_before = self.objective_value()
        body[row] /= element
        pivot_row = body[row]
        for block in (body[:row], body[row + 1 :]):
            if block.shape[0]:
                block -= block[:, col : col + 1] * pivot_row
        body[:row, col] = 0.0
        body[row + 1 :, col] = 0.0
        body[row, col] = 1.0

        ncols = self.n + 1
        self.flops += ncols + 2 * (body.shape[0] - 1) * ncols
        leaving = self.basis[row]
        self._basic_row[leaving] = -1
        self.basis[row] = col
        self._basic_row[col] = row
        self.pivots += 1
        # relative threshold: noise-level "improvements" on a degenerate
        # plateau must not keep resetting the Bland fallback
        if self.objective_value() < value_before - 1e-9 * max(1.0, abs(value_before)):
            self.degenerate_streak = 0
        else:
            self.degenerate_streak += 1

    def refactorize(self):
        """Rebuild the body from the original data and the current basis.

        Dense pivoting accumulates rounding error over long runs; a periodic
        rebuild restores the tableau to linear-solve accuracy. Refactor work
        is deliberately not added to the per-pivot flop counter.
        """
        if self.m == 0:
            return
        idx = self.basis
        B = self._A[:, idx]
        R = np.linalg.solve(B, np.column_stack([self._A, self._b]))
        obj = np.column_stack([self._costs, np.zeros(self._costs.shape[0])])
        obj = obj - self._costs[:, idx] @ R
        self.body = np.vstack([R, obj])
        for i, j in enumerate(idx):
            self.body[:, j] = 0.0
            self.body[i, j] = 1.0


def feasible_basis(A, b) -> np.ndarray:
    """Phase one on raw arrays: artificial start, minimize the artificial sum.

    Returns basic column indices in row order. Raises InfeasibleError when the
    auxiliary optimum stays above tolerance.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).ravel().copy()
    m, n = A.shape
    if m == 0:
        return np.empty(0, dtype=int)
    neg = b < 0
    if neg.any():
        A = A.copy()
        A[neg] *= -1.0
        b[neg] *= -1.0
    aux_A = np.column_stack([A, np.eye(m)])
    aux_c = np.concatenate([np.zeros(n), np.ones(m)])
    tableau = SimplexTableau(aux_A, b, aux_c, range(n, n + m), entering_limit=n)
    cap = 10_000 + 40 * (n + m)
    while True:
        col = tableau.select_pivot_column()
        if col is None:
            break
        row = tableau.select_pivot_row(col)
        if row is None:
            raise LpError("auxiliary problem unbounded; input data is corrupt")
        tableau.pivot(col, row)
        if tableau.pivots % 500 == 0:
            tableau.refactorize()
        if tableau.pivots > cap:
            raise CyclingError(f"phase one exceeded {cap} pivots")
    if tableau.objective_value() > 1e-7 * max(1.0, float(np.abs(b).max())):
        raise InfeasibleError(
            f"infeasible: artificial sum {tableau.objective_value():.3e} at phase-one optimum"
        )
    # Swap any artificial stuck in the basis at zero for a structural column.
    for row in range(m):
        if tableau.basis[row] >= n:
            entries = np.abs(tableau.body[row, :n])
            candidates = np.nonzero(entries > PIVOT_TOL)[0]
            if candidates.size == 0:
                raise LpError("artificial variable stuck in a dependent row")
            col = int(candidates[np.argmax(entries[candidates])])
            tableau.pivot(col, row)
    return tableau.basis.copy()


def phase_one(lp: StandardFormLP) -> Basis:
    """Feasible basis for an LP, via the auxiliary artificial problem."""
    if lp.inconsistent:
        raise InfeasibleError("constraint rows are mutually inconsistent")
    return Basis(tuple(feasible_basis(lp.A, lp.b)))


def build_tableau(lp: StandardFormLP, basis: Basis, cost_override=None) -> SimplexTableau:
    c = lp.c if cost_override is None else np.asarray(cost_override, dtype=float).ravel()
    if c.size != lp.n:
        raise ValueError("cost vector width does not match LP")
    return SimplexTableau(lp.A, lp.b, c, tuple(basis))


REFACTOR_EVERY = 500


def optimize_tableau(tableau: SimplexTableau, record_vertices=False,
                     max_pivots=None) -> SolveResult:
    """Pivot a prepared tableau to optimality (the phase-two loop)."""
    visited = [tableau.vertex()] if record_vertices else None
    cap = max_pivots if max_pivots is not None else 10_000 + 40 * (tableau.n + tableau.m)
    while True:
        col = tableau.select_pivot_column()
        if col is None:
            status = OPTIMAL
            break
        row = tableau.select_pivot_row(col)
        if row is None:
            status = UNBOUNDED
            break
        tableau.pivot(col, row)
        if tableau.pivots % REFACTOR_EVERY == 0:
            tableau.refactorize()
        if record_vertices:
            visited.append(tableau.vertex())
        if tableau.pivots > cap:
            raise CyclingError(f"phase two exceeded {cap} pivots")
    return SolveResult(
        status=status,
        vertex=tableau.vertex() if status == OPTIMAL else None,
        objective_value=tableau.objective_value() if status == OPTIMAL else None,
        phase2_pivots=tableau.pivots,
        visited_vertices=visited,
        basis=tableau.basis_object(),
        flops=tableau.flops,
    )


def solve(lp: StandardFormLP, cost_override=None, warm_basis=None,
          record_vertices=False, max_pivots=None) -> SolveResult:
    """Two-phase solve. Only phase-two pivots are counted in the result.

    `warm_basis` skips phase one; it must be primal feasible. Cycling beyond
    the pivot cap raises :class:`CyclingError` rather than returning a bogus
    answer.
    """
    if lp.inconsistent:
        return SolveResult(INFEASIBLE, None, None, 0)
    if warm_basis is None:
        try:
            basis = phase_one(lp)
        except InfeasibleError:
            return SolveResult(INFEASIBLE, None, None, 0)
    else:
        basis = warm_basis
    tableau = build_tableau(lp, basis, cost_override)
    return optimize_tableau(tableau, record_vertices=record_vertices, max_pivots=max_pivots)


def constraint_duals(lp: StandardFormLP, basis: Basis, cost_override=None) -> np.ndarray:
    """Row duals y solving B^T y = c_B for the given basis.

    For a row stored as ``a.x + s = b`` (a <= row with slack), y gives the
    marginal change of the optimum per unit of b; a binding cap has y < 0
    under minimization.
    """
    c = lp.c if cost_override is None else np.asarray(cost_override, dtype=float)
    idx = list(basis)
    try:
        return np.linalg.solve(lp.A[:, idx].T, c[idx])
    except np.linalg.LinAlgError as exc:
        raise SingularBasisError("basis matrix is singular") from exc
