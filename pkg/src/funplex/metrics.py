"""Quality and efficiency indicators for near-optimal explorations.

Hull volumes of vertex clouds (exact via qhull, or Monte Carlo rejection
sampling with a reported standard error), normalized volumes and volume
gains, 2D projection outlines against a dense planar reference sweep, pivot
ratios, and log-log scaling slopes.

The Monte Carlo membership test is independent of qhull: cheap outside
certificates come from support-function bounds, cheap inside certificates
from barycentric tests on a handful of interior simplices, and the residue
is settled exactly by a phase-one feasibility solve of the convex-combination
system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.spatial

from .algorithm import BudgetedLP
from .lp import InfeasibleError, LpError
from .simplex import OPTIMAL, feasible_basis

EXACT_MAX_DIM = 5
EXACT_MAX_POINTS = 5000
MC_DEFAULT_SAMPLES = 1_000_000
_MC_CHUNK = 32768


@dataclass
class PointCloud:
    """A cloud of same-dimension points with a source tag."""

    points: np.ndarray
    source: str = ""

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if not np.all(np.isfinite(self.points)):
            raise ValueError("non-finite points")

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


@dataclass
class HullVolumeResult:
    volume: float
    method: str  # "exact" | "monte_carlo"
    n_points: int
    standard_error: float | None = None
    n_facets: int | None = None
    degenerate: bool = False


@dataclass
class ProjectionOutline:
    """Convex polygon boundary of a 2D projection, counter-clockwise."""

    dims: tuple[int, int]
    vertices: np.ndarray
    degenerate: bool = False

    @property
    def area(self) -> float:
        if self.degenerate or len(self.vertices) < 3:
            return 0.0
        x = self.vertices[:, 0]
        y = self.vertices[:, 1]
        # shoelace, positive for the counter-clockwise order the chain emits
        return 0.5 * float(np.dot(y, np.roll(x, 1)) - np.dot(x, np.roll(y, 1)))


def _as_points(cloud) -> np.ndarray:
    if isinstance(cloud, PointCloud):
        return cloud.points
    return np.atleast_2d(np.asarray(cloud, dtype=float))


def _affine_rank(points: np.ndarray, rtol: float = 1e-9) -> int:
    centered = points - points.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def hull_volume(cloud, method: str = "auto", samples: int = MC_DEFAULT_SAMPLES,
                seed: int = 0, chunk_size: int = _MC_CHUNK) -> HullVolumeResult:
    """Convex hull volume of a point cloud.

    `method="auto"` uses the exact hull up to dimension 5 and 5000 points and
    Monte Carlo beyond that. Affinely dependent clouds report volume 0 with a
    degeneracy flag instead of erroring, since a zero-slack budget legitimately
    produces flat clouds.
    """
    points = _as_points(cloud)
    n, d = points.shape
    if n < d + 1:
        raise ValueError(f"need at least {d + 1} points for a {d}-dimensional hull")
    if method not in ("auto", "exact", "monte_carlo"):
        raise ValueError(f"unknown method {method!r}")
    if _affine_rank(points) < d:
        return HullVolumeResult(0.0, "exact", n, degenerate=True)
    if method == "auto":
        method = "exact" if (d <= EXACT_MAX_DIM and n <= EXACT_MAX_POINTS) else "monte_carlo"
    if method == "exact":
        hull = scipy.spatial.ConvexHull(points)
        return HullVolumeResult(float(hull.volume), "exact", n,
                                n_facets=int(hull.simplices.shape[0]))
    return _monte_carlo_volume(points, samples, seed, chunk_size)


class _HullMembership:
    """Exact membership oracle for conv(points), cheap certificates first."""

    def __init__(self, points: np.ndarray):
        self.points = points
        n, d = points.shape
        rng = np.random.default_rng(0x5EED)
        axes = np.eye(d)
        extra = rng.standard_normal((max(32, 8 * d), d))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        self.dirs = np.vstack([axes, -axes, extra])
        support = self.dirs @ points.T
        self.support = support.max(axis=1)
        span = float(np.abs(points).max()) or 1.0
        self.support_tol = 1e-9 * (1.0 + span)
        self._simplices = self._pick_simplices(rng, n, d, span)
        # convex-combination system: [points^T; 1...1] lam = [p; 1], lam >= 0
        self._A_mem = np.vstack([points.T, np.ones(n)])

    def _pick_simplices(self, rng, n, d, span):
        simplices = []
        for _ in range(60):
            if len(simplices) >= 16:
                break
            idx = rng.choice(n, size=d + 1, replace=False)
            verts = self.points[idx]
            T = (verts[1:] - verts[0]).T
            if abs(np.linalg.det(T)) < 1e-7 * span**d:
                continue
            simplices.append((verts[0], np.linalg.inv(T)))
        return simplices

    def _lp_member(self, p: np.ndarray) -> bool:
        b = np.concatenate([p, [1.0]])
        try:
            feasible_basis(self._A_mem, b)
            return True
        except InfeasibleError:
            return False
        except LpError:
            return False

    def classify(self, batch: np.ndarray) -> np.ndarray:
        inside = np.zeros(batch.shape[0], dtype=bool)
        undecided = np.ones(batch.shape[0], dtype=bool)
        # outside certificate: a direction whose support the point exceeds
        proj = batch @ self.dirs.T
        outside = (proj > self.support + self.support_tol).any(axis=1)
        undecided &= ~outside
        # inside certificate: barycentric containment in a known simplex
        margin = 1e-12
        for origin, inv in self._simplices:
            if not undecided.any():
                break
            sub = batch[undecided]
            bary = (sub - origin) @ inv.T
            ok = (bary >= margin).all(axis=1) & (bary.sum(axis=1) <= 1.0 - margin)
            idx = np.nonzero(undecided)[0][ok]
            inside[idx] = True
            undecided[idx] = False
        for i in np.nonzero(undecided)[0]:
            inside[i] = self._lp_member(batch[i])
        return inside


def _monte_carlo_volume(points: np.ndarray, samples: int, seed: int,
                        chunk_size: int) -> HullVolumeResult:
    n, d = points.shape
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    box = float(np.prod(hi - lo))
    if box == 0.0:
        return HullVolumeResult(0.0, "monte_carlo", n, standard_error=0.0, degenerate=True)
    member = _HullMembership(points)
    hits = 0
    done = 0
    chunk_index = 0
    while done < samples:
        take = min(chunk_size, samples - done)
        # per-chunk seeding keeps results identical however chunks are scheduled
        rng = np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))
        batch = lo + (hi - lo) * rng.random((take, d))
        hits += int(member.classify(batch).sum())
        done += take
        chunk_index += 1
    p = hits / samples
    volume = box * p
    se = box * float(np.sqrt(p * (1.0 - p) / samples))
    return HullVolumeResult(volume, "monte_carlo", n, standard_error=se)


# -- comparative indicators -----------------------------------------------------


def normalized_volumes(volumes: dict, reference: str = "funplex") -> dict:
    """Each method's volume divided by the reference method's."""
    ref = volumes[reference]
    if ref <= 0:
        raise ValueError("reference volume must be positive")
    return {name: v / ref for name, v in volumes.items()}


def volume_gain(funplex_volume: float, baseline_volume: float) -> float:
    if baseline_volume <= 0:
        raise ValueError("baseline volume must be positive")
    return funplex_volume / baseline_volume


def efficiency_gain(baseline_pivots: float, funplex_pivots: float) -> float:
    if funplex_pivots <= 0:
        raise ValueError("funplex pivot count must be positive")
    return baseline_pivots / funplex_pivots


def scaling_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ValueError("need at least 3 points for a slope")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log regression needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# -- 2D outlines ------------------------------------------------------------------


def _outline_2d(points2d: np.ndarray, dims: tuple[int, int]) -> ProjectionOutline:
    pts = np.unique(np.asarray(points2d, dtype=float), axis=0)
    if pts.shape[0] < 3:
        return ProjectionOutline(dims, pts, degenerate=True)
    span = float(np.abs(pts).max()) or 1.0
    eps = 1e-12 * span * span

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(iterable):
        chain = []
        for p in iterable:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= eps:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        extremes = np.array([pts[0], pts[-1]])
        return ProjectionOutline(dims, extremes, degenerate=True)
    return ProjectionOutline(dims, np.array(hull))


def projection_outline(cloud, dims: tuple[int, int]) -> ProjectionOutline:
    """Convex outline of the cloud projected on a dimension pair (monotone chain)."""
    points = _as_points(cloud)
    if points.shape[0] < 3:
        raise ValueError("need at least 3 points for an outline")
    i, j = dims
    return _outline_2d(points[:, [i, j]], (i, j))


def planar_reference(budgeted: BudgetedLP, dims: tuple[int, int],
                     n_directions: int = 720, scales=None) -> ProjectionOutline:
    """High-fidelity 2D reference: optimize many evenly spaced planar objectives.

    Solves `n_directions` single-objective LPs whose objectives sweep the unit
    circle in the chosen interest plane (scaled like the explorer's objectives)
    and returns the hull of the optima. Outline area is nondecreasing in
    `n_directions` since direction sets nest only in ratio 2; in practice it
    converges quickly and serves as the "real" near-optimal projection.
    """
    if n_directions < 8:
        raise ValueError("need at least 8 directions")
    i, j = dims
    interest = budgeted.lp.interest_columns
    col_i, col_j = interest[i], interest[j]
    if scales is None:
        scales = np.ones(len(interest))
    points = np.empty((n_directions, 2))
    for k in range(n_directions):
        theta = 2.0 * np.pi * k / n_directions
        c = np.zeros(budgeted.lp.n)
        c[col_i] = np.cos(theta) / scales[i]
        c[col_j] = np.sin(theta) / scales[j]
        result = budgeted.solve_objective(c)
        if result.status != OPTIMAL:
            raise LpError(f"planar reference solve ended {result.status}")
        points[k, 0] = result.vertex[col_i]
        points[k, 1] = result.vertex[col_j]
    return _outline_2d(points, (i, j))
