"""Brute-force reference answers, kept independent of the tableau code paths.

The LP oracle enumerates every basis subset directly with dense linear
algebra, and decides unboundedness by enumerating the vertices of the
normalized recession cone. Only usable for tiny problems.
"""

import itertools

import numpy as np

COND_CAP = 1e10


def enumerate_basic_feasible(A, b, tol=1e-9):
    """All basic feasible points as (indices, full_vector) pairs."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    out = []
    for idx in itertools.combinations(range(n), m):
        B = A[:, idx]
        if np.linalg.cond(B) > COND_CAP:
            continue
        x_b = np.linalg.solve(B, b)
        if x_b.min(initial=0.0) >= -tol:
            x = np.zeros(n)
            x[list(idx)] = x_b
            out.append((idx, x))
    return out


def recession_improves(A, c, tol=1e-9):
    """True when a ray d >= 0 with A d = 0 strictly decreases c.d.

    Checks every vertex of {A d = 0, sum(d) = 1, d >= 0}; that polytope's
    vertices span all extreme ray directions.
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    A2 = np.vstack([A, np.ones(n)])
    b2 = np.zeros(m + 1)
    b2[-1] = 1.0
    for _, d in enumerate_basic_feasible(A2, b2, tol=tol):
        if np.dot(c, d) < -tol:
            return True
    return False


def brute_force_solve(lp, cost=None):
    """(status, objective, vertex) by full basis enumeration."""
    c = np.asarray(lp.c if cost is None else cost, dtype=float)
    vertices = enumerate_basic_feasible(lp.A, lp.b)
    if not vertices:
        return "infeasible", None, None
    if recession_improves(lp.A, c):
        return "unbounded", None, None
    values = [float(np.dot(c, x)) for _, x in vertices]
    k = int(np.argmin(values))
    return "optimal", values[k], vertices[k][1]


def random_feasible_lp(rng, max_n=8, max_m=6):
    """Random equality-form LP with a known interior point, so it is feasible."""
    from funplex import StandardFormLP

    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(m + 1, max_n + 1))
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(0.5, 2.0, size=n)
    b = A @ x0
    c = rng.normal(size=n)
    return StandardFormLP(A, b, c)


def box_lp(costs, lower=0.0, upper=1.0):
    """An axis-aligned box [lower, upper]^d as a standard-form LP."""
    from funplex import build_standard_form

    d = len(costs)
    rows = []
    for j in range(d):
        row = np.zeros(d)
        row[j] = 1.0
        rows.append((row.copy(), "<=", upper))
        if lower > 0:
            rows.append((row.copy(), ">=", lower))
    return build_standard_form(rows, costs, interest_columns=list(range(d)))
