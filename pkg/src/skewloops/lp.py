"""Dense two-phase simplex with Bland's rule.

Problems are stated as::

    maximize    c . x
    subject to  A x = b
                x_j >= lower_j      (lower_j may be -inf: free variable)

Sizes here are a few hundred variables at most, so a full tableau in numpy is
plenty. Pivoting is deterministic: Bland's smallest-index rule for the
entering column and smallest basic index among ratio-test ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import InputError

PIVOT_EPS = 1e-9
COST_EPS = 1e-10


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LpProblem:
    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    lower: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        a = np.asarray(self.a_eq, dtype=float)
        b = np.asarray(self.b_eq, dtype=float)
        if c.ndim != 1:
            raise InputError("objective must be 1-d")
        nvar = c.size
        if a.size == 0:
            a = np.zeros((0, nvar))
        if a.ndim != 2 or a.shape[1] != nvar or b.shape != (a.shape[0],):
            raise InputError(f"dimension mismatch: objective {c.shape}, A {a.shape}, b {b.shape}")
        lower = np.zeros(nvar) if self.lower is None else np.asarray(self.lower, dtype=float)
        if lower.shape != (nvar,):
            raise InputError("lower bounds must match the number of variables")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InputError("LP data must be finite")
        if np.any(np.isnan(lower)) or np.any(lower == np.inf):
            raise InputError("lower bounds must be finite or -inf")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "b_eq", b)
        object.__setattr__(self, "lower", lower)


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0


class _Tableau:
    def __init__(self, a, b):
        rows, cols = a.shape
        self.t = np.zeros((rows + 1, cols + 1))
        self.t[:rows, :cols] = a
        self.t[:rows, -1] = b
        self.basis = np.zeros(rows, dtype=int)
        self.iterations = 0

    @property
    def rows(self):
        return self.t.shape[0] - 1

    def set_cost(self, cost):
        """Install a minimization cost as the reduced-cost row for the current basis."""
        self.t[-1, :-1] = cost
        self.t[-1, -1] = 0.0
        for r, j in enumerate(self.basis):
            if self.t[-1, j] != 0.0:
                self.t[-1] -= self.t[-1, j] * self.t[r]

    def pivot(self, r, j):
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        t[nz] -= np.outer(col[nz], t[r])
        self.basis[r] = j
        self.iterations += 1

    def run(self, allowed, max_iter):
        """Minimize the installed cost over the ``allowed`` columns. Returns False if unbounded."""
        t = self.t
        while True:
            if self.iterations > max_iter:
                raise RuntimeError("simplex iteration limit exceeded")
            candidates = np.flatnonzero(allowed & (t[-1, :-1] < -COST_EPS))
            if candidates.size == 0:
                return True
            j = candidates[0]
            column = t[:-1, j]
            rows = np.flatnonzero(column > PIVOT_EPS)
            if rows.size == 0:
                return False
            ratios = t[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = ties[np.argmin(self.basis[ties])]
            self.pivot(r, j)


def _standard_form(problem: LpProblem):
    """Shift finite lower bounds to zero and split free variables into x+ - x-."""
    lower = problem.lower
    free = ~np.isfinite(lower)
    shift = np.where(free, 0.0, lower)
    a = problem.a_eq
    b = problem.b_eq - a @ shift
    a_std = np.hstack([a, -a[:, free]])
    c_std = np.concatenate([problem.objective, -problem.objective[free]])
    return a_std, b, c_std, shift, np.flatnonzero(free)


def _crash_basis(a, b):
    """Pick slack-like columns (single non-zero entry) as the starting basis where possible.

    Rows are rescaled in place so each chosen column becomes a unit column.
    Returns one column index per row, -1 where an artificial is needed.
    """
    rows = a.shape[0]
    basis = np.full(rows, -1)
    for j in np.flatnonzero(np.count_nonzero(a, axis=0) == 1):
        r = np.flatnonzero(a[:, j])[0]
        v = a[r, j]
        if basis[r] >= 0 or (v < 0 and b[r] != 0.0):
            continue
        a[r] /= v
        b[r] /= v
        basis[r] = j
    return basis


def solve_lp(problem: LpProblem) -> LpSolution:
    a, b, c, shift, free_idx = _standard_form(problem)
    nvar = problem.objective.size
    rows, cols = a.shape
    flip = b < 0
    a = np.where(flip[:, None], -a, a)
    b = np.where(flip, -b, b)
    a_orig, b_orig = a.copy(), b.copy()
    start = _crash_basis(a, b)

    # phase 1: artificials only for rows without a slack-like column
    need = np.flatnonzero(start < 0)
    art = np.zeros((rows, need.size))
    art[need, np.arange(need.size)] = 1.0
    tab = _Tableau(np.hstack([a, art]), b)
    tab.basis[:] = start
    tab.basis[need] = cols + np.arange(need.size)
    tab.set_cost(np.concatenate([np.zeros(cols), np.ones(need.size)]))
    max_iter = 50 * (rows + cols + 10)
    allowed = np.ones(cols + need.size, dtype=bool)
    tab.run(allowed, max_iter)
    infeasibility = -tab.t[-1, -1]
    if infeasibility > 1e-9 * (1.0 + np.abs(b).max(initial=0.0)):
        return LpSolution(LpStatus.INFEASIBLE, iterations=tab.iterations)

    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for r in range(rows):
        if tab.basis[r] >= cols:
            nz = np.flatnonzero(np.abs(tab.t[r, :cols]) > PIVOT_EPS)
            if nz.size:
                tab.pivot(r, nz[0])
            else:
                continue
        keep.append(r)
    keep = np.array(keep, dtype=int)
    t = np.vstack([tab.t[keep], tab.t[-1:]])
    tab.t = np.delete(t, np.s_[cols:cols + need.size], axis=1)
    tab.basis = tab.basis[keep]

    # phase 2
    tab.set_cost(-c)
    if not tab.run(np.ones(cols, dtype=bool), max_iter):
        return LpSolution(LpStatus.UNBOUNDED, iterations=tab.iterations)

    x_std = np.zeros(cols)
    basis = tab.basis
    if basis.size:
        try:
            x_std[basis] = np.linalg.solve(a_orig[keep][:, basis], b_orig[keep])
        except np.linalg.LinAlgError:
            x_std[basis] = tab.t[:-1, -1]
    x_std = np.where((x_std < 0) & (x_std > -1e-9), 0.0, x_std)
    x = x_std[:nvar] + shift
    x[free_idx] -= x_std[nvar:]
    return LpSolution(LpStatus.OPTIMAL, x, float(problem.objective @ x), tab.iterations)
