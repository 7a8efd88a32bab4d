"""Standard-form LP containers, constructors, and a plain-text fixture format.

Everything downstream works on the equality form ``min c.x  s.t.  A x = b,
x >= 0``. Inequalities are converted here by appending slack or surplus
columns, rows are sign-normalized so ``b >= 0``, and linearly dependent rows
are eliminated at construction time.

Fixture grammar (one directive or constraint per line, ``#`` comments)::

    names: x1 x2            # optional, defaults to x0..x{n-1}
    interest: x1            # optional, names or 0-based indices
    min: 1.0 0.0            # objective coefficients, required
    1 1 <= 4                # n coefficients, a relation (<=, =, >=), the rhs
    2 -1 >= 0
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

RELATIONS = ("<=", "=", ">=")

_RANK_RTOL = 1e-10


class LpError(Exception):
    """Base class for LP construction and solver failures."""


class InfeasibleError(LpError):
    pass


class UnboundedError(LpError):
    pass


class SingularBasisError(LpError):
    pass


class CyclingError(LpError):
    """Pivot cap exceeded; the solve is reported as failed, never silently truncated."""


@dataclass(eq=False)
class StandardFormLP:
    """Equality-constrained LP ``min c.x  s.t.  A x = b, x >= 0``.

    Rows are sign-normalized so ``b >= 0``. Dependent rows are dropped with a
    warning; if a dropped row contradicts the kept ones the problem is flagged
    ``inconsistent`` and phase one reports it as infeasible.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    column_names: list[str] | None = None
    interest_columns: tuple[int, ...] = ()
    inconsistent: bool = field(default=False)

    def __post_init__(self):
        self.A = np.array(self.A, dtype=float, ndmin=2)
        self.b = np.asarray(self.b, dtype=float).ravel().copy()
        self.c = np.asarray(self.c, dtype=float).ravel().copy()
        m, n = self.A.shape
        if self.b.shape != (m,):
            raise ValueError(f"b has length {self.b.size}, expected {m}")
        if self.c.shape != (n,):
            raise ValueError(f"c has length {self.c.size}, expected {n}")
        for name, arr in (("A", self.A), ("b", self.b), ("c", self.c)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite entries in {name}")
        if self.column_names is None:
            self.column_names = [f"x{j}" for j in range(n)]
        if len(self.column_names) != n:
            raise ValueError("column_names length does not match column count")
        self.interest_columns = tuple(int(j) for j in self.interest_columns)
        if len(set(self.interest_columns)) != len(self.interest_columns):
            raise ValueError("interest_columns must be distinct")
        if any(j < 0 or j >= n for j in self.interest_columns):
            raise ValueError("interest_columns out of range")

        neg = self.b < 0
        if neg.any():
            self.A[neg] *= -1.0
            self.b[neg] *= -1.0
        self._enforce_full_rank()

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def objective_value(self, x) -> float:
        return float(np.dot(self.c, x))

    def constraint_residual(self, x) -> float:
        """Max-abs residual of A x = b."""
        if self.m == 0:
            return 0.0
        return float(np.abs(self.A @ np.asarray(x, dtype=float) - self.b).max())

    def is_feasible(self, x, tol: float = 1e-7) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(self.constraint_residual(x) <= tol and x.min(initial=0.0) >= -tol)

    def column_index(self, name: str) -> int:
        return self.column_names.index(name)

    def _enforce_full_rank(self):
        m, n = self.A.shape
        if m == 0:
            return
        # QR with column pivoting on A^T picks a maximal independent row set.
        _, R, piv = scipy.linalg.qr(self.A.T, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        lead = diag[0] if diag.size else 0.0
        rank = int(np.sum(diag > max(_RANK_RTOL * lead, 1e-300))) if lead > 0 else 0
        if rank == m:
            return
        keep = np.sort(piv[:rank])
        drop = np.sort(piv[rank:])
        if rank == 0:
            lam_b = np.zeros(drop.size)
        else:
            lam, *_ = np.linalg.lstsq(self.A[keep].T, self.A[drop].T, rcond=None)
            lam_b = lam.T @ self.b[keep]
        mismatch = np.abs(lam_b - self.b[drop]) > 1e-8 * (1.0 + np.abs(self.b[drop]))
        if mismatch.any():
            self.inconsistent = True
            warnings.warn(
                f"dropping {drop.size} dependent row(s); {int(mismatch.sum())} "
                "contradict the kept rows (problem marked inconsistent)",
                stacklevel=3,
            )
        else:
            warnings.warn(f"dropping {drop.size} redundant dependent row(s)", stacklevel=3)
        self.A = self.A[keep]
        self.b = self.b[keep]


def build_standard_form(rows, costs, names=None, interest_columns=None,
                        normalize_rows=True) -> StandardFormLP:
    """Assemble a :class:`StandardFormLP` from relational constraint rows.

    Parameters
    ----------
    rows:
        Iterable of ``(coefficients, relation, rhs)`` with relation one of
        ``<=``, ``=``, ``>=``. Inequalities get a zero-cost slack or surplus
        column appended.
    costs:
        Objective coefficients for the structural variables.
    names:
        Optional structural variable names; slack names are generated.
    interest_columns:
        Optional variable names or indices designating the interest variables.
    normalize_rows:
        Divide each row (and its rhs) by its max-abs coefficient so mixed-unit
        models keep comparable row scales.
    """
    costs = np.asarray(costs, dtype=float).ravel()
    n0 = costs.size
    rows = list(rows)
    m = len(rows)
    if names is None:
        names = [f"x{j}" for j in range(n0)]
    names = list(names)
    if len(names) != n0:
        raise ValueError("names length does not match cost length")

    n_extra = sum(1 for _, rel, _ in rows if rel != "=")
    n = n0 + n_extra
    A = np.zeros((m, n))
    b = np.zeros(m)
    all_names = names + [""] * n_extra
    extra = n0
    for i, (coeffs, rel, rhs) in enumerate(rows):
        coeffs = np.asarray(coeffs, dtype=float).ravel()
        if coeffs.size != n0:
            raise ValueError(f"row {i} has {coeffs.size} coefficients, expected {n0}")
        if rel not in RELATIONS:
            raise ValueError(f"row {i}: unknown relation {rel!r}")
        if not (np.all(np.isfinite(coeffs)) and np.isfinite(rhs)):
            raise ValueError(f"row {i}: non-finite data")
        scale = np.abs(coeffs).max() if normalize_rows else 1.0
        if scale <= 0.0:
            scale = 1.0
        A[i, :n0] = coeffs / scale
        b[i] = rhs / scale
        if rel == "<=":
            A[i, extra] = 1.0
            all_names[extra] = f"slack_{i}"
            extra += 1
        elif rel == ">=":
            A[i, extra] = -1.0
            all_names[extra] = f"surplus_{i}"
            extra += 1

    c = np.concatenate([costs, np.zeros(n_extra)])
    interest = _resolve_interest(interest_columns, all_names)
    return StandardFormLP(A, b, c, all_names, interest)


def _resolve_interest(interest_columns, names) -> tuple[int, ...]:
    if interest_columns is None:
        return ()
    out = []
    for item in interest_columns:
        if isinstance(item, str):
            out.append(names.index(item))
        else:
            out.append(int(item))
    return tuple(out)


def parse_lp_text(text: str) -> StandardFormLP:
    """Parse the fixture grammar documented in the module docstring."""
    names = None
    interest = None
    costs = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered.startswith("names:"):
            names = line.split(":", 1)[1].split()
        elif lowered.startswith("interest:"):
            interest = line.split(":", 1)[1].split()
        elif lowered.startswith("min:"):
            costs = [float(v) for v in line.split(":", 1)[1].split()]
        else:
            tokens = line.replace("==", "=").split()
            rel_positions = [i for i, t in enumerate(tokens) if t in RELATIONS]
            if len(rel_positions) != 1:
                raise ValueError(f"line {lineno}: expected exactly one relation in {raw!r}")
            k = rel_positions[0]
            if k != len(tokens) - 2:
                raise ValueError(f"line {lineno}: relation must be followed by a single rhs")
            coeffs = [float(v) for v in tokens[:k]]
            rows.append((coeffs, tokens[k], float(tokens[k + 1])))
    if costs is None:
        raise ValueError("fixture has no 'min:' objective line")
    if not rows:
        raise ValueError("fixture has no constraint rows")
    if interest is not None:
        interest = [int(v) if v.lstrip("-").isdigit() else v for v in interest]
    return build_standard_form(rows, costs, names=names, interest_columns=interest)


def read_lp(path) -> StandardFormLP:
    with open(path, encoding="utf-8") as fh:
        return parse_lp_text(fh.read())


def write_lp(lp: StandardFormLP, path) -> None:
    """Write an equality-form LP back out in the fixture grammar."""
    lines = ["# funplex LP fixture"]
    lines.append("names: " + " ".join(lp.column_names))
    if lp.interest_columns:
        lines.append("interest: " + " ".join(lp.column_names[j] for j in lp.interest_columns))
    lines.append("min: " + " ".join(repr(float(v)) for v in lp.c))
    for i in range(lp.m):
        coeffs = " ".join(repr(float(v)) for v in lp.A[i])
        lines.append(f"{coeffs} = {float(lp.b[i])!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
