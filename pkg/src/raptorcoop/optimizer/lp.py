"""Linear programs in a small explicit form, solved by dual simplex."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

RELATIONS = (">=", "<=", "=")


@dataclass
class LpProblem:
    """maximize objective @ x subject to rows (a, rel, b) and per-variable bounds."""
    objective: np.ndarray
    constraints: list[tuple[np.ndarray, str, float]] = field(default_factory=list)
    bounds: list[tuple[float | None, float | None]] | None = None
    names: list[str] | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.size
        if self.bounds is None:
            self.bounds = [(0.0, None)] * n
        if len(self.bounds) != n:
            raise ValueError("one bound pair per variable")
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"inconsistent bounds ({lo}, {hi})")
        for a, rel, _ in self.constraints:
            if np.asarray(a).size != n:
                raise ValueError("constraint dimension differs from objective")
            if rel not in RELATIONS:
                raise ValueError(f"relation must be one of {RELATIONS}")

    @property
    def n_vars(self) -> int:
        return self.objective.size

    def add(self, a, rel: str, b: float):
        a = np.asarray(a, dtype=float)
        if a.size != self.n_vars or rel not in RELATIONS:
            raise ValueError("bad constraint")
        self.constraints.append((a, rel, float(b)))

    def residuals(self, x) -> np.ndarray:
        """Signed slack per constraint; negative means violated."""
        x = np.asarray(x, dtype=float)
        out = []
        for a, rel, b in self.constraints:
            v = float(np.dot(a, x))
            out.append(v - b if rel == ">=" else b - v if rel == "<=" else -abs(v - b))
        return np.array(out)


@dataclass
class LpResult:
    status: str            # "optimal" | "infeasible" | "unbounded" | "error"
    x: np.ndarray | None
    objective: float | None
    message: str = ""


def lp_solve(p: LpProblem, tol: float = 1e-9) -> LpResult:
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for a, rel, b in p.constraints:
        if rel == "<=":
            ub_rows.append(a)
            ub_rhs.append(b)
        elif rel == ">=":
            ub_rows.append(-a)
            ub_rhs.append(-b)
        else:
            eq_rows.append(a)
            eq_rhs.append(b)
    res = linprog(
        -p.objective,
        A_ub=np.array(ub_rows) if ub_rows else None, b_ub=np.array(ub_rhs) if ub_rows else None,
        A_eq=np.array(eq_rows) if eq_rows else None, b_eq=np.array(eq_rhs) if eq_rows else None,
        bounds=p.bounds, method="highs-ds",
        options={"primal_feasibility_tolerance": tol, "dual_feasibility_tolerance": tol},
    )
    if res.status == 0:
        return LpResult("optimal", np.asarray(res.x), float(-res.fun), res.message)
    if res.status == 2:
        return LpResult("infeasible", None, None, res.message)
    if res.status == 3:
        return LpResult("unbounded", None, None, res.message)
    return LpResult("error", None, None, res.message)


def enumerate_vertices(p: LpProblem, tol: float = 1e-9) -> list[np.ndarray]:
    """All basic feasible points of a small problem, by brute force over active sets."""
    import itertools

    rows, rhs = [], []
    for a, rel, b in p.constraints:
        rows.append(np.asarray(a, dtype=float))
        rhs.append(b)
    n = p.n_vars
    for i, (lo, hi) in enumerate(p.bounds):
        e = np.zeros(n)
        e[i] = 1.0
        if lo is not None:
            rows.append(e)
            rhs.append(lo)
        if hi is not None:
            rows.append(e)
            rhs.append(hi)
    A = np.array(rows)
    b = np.array(rhs)
    eq_idx = [i for i, (_, rel, _) in enumerate(p.constraints) if rel == "="]
    out = []
    for active in itertools.combinations(range(len(rows)), n):
        if not set(eq_idx) <= set(active):
            continue
        sub = A[list(active)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(active)])
        if np.all(p.residuals(x) >= -tol) and all(
                (lo is None or x[i] >= lo - tol) and (hi is None or x[i] <= hi + tol)
                for i, (lo, hi) in enumerate(p.bounds)):
            if not any(np.allclose(x, y) for y in out):
                out.append(x)
    return out
