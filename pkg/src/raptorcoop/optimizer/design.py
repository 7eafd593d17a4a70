"""Degree-distribution design LPs for both cooperation schemes.

Both LPs ask that the degree law seen by a receiver that already knows a
share of the symbols keeps a ripple of c*sqrt((1-x)K) degree-one symbols
(K unknown symbols) at every decoding stage x in [0, 1 - delta]:

    sum_d d x^(d-1) Phi'_d  >=  -r ln(1 - x - c sqrt((1-x)/K)),

where Phi' is the edge-stripped law.  Phi' is linear in the design variables
(a hypergeometric matrix applied to Phi), so each (stage, x) pair is one LP
row.  The objective is the plain sum of the r values.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..codec import DegreeDistribution
from ..codec.hypergeom import hypergeom_matrix
from .lp import LpProblem, LpResult, lp_solve


class DesignError(RuntimeError):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class DesignParams:
    M: int
    k: int
    D: int = 50
    delta: float = 0.01
    c: float = 0.1
    step: float = 0.005
    N: int | None = None
    e_inter: float = 0.0
    part_cap: int = 20

    def __post_init__(self):
        if self.M < 1 or self.k < 1:
            raise ValueError("M and k must be positive")
        if not 2 <= self.D <= self.k:
            raise ValueError("need 2 <= D <= k")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.step <= 0 or self.c < 0:
            raise ValueError("step must be positive and c non-negative")
        if self.N is not None and self.N < 1:
            raise ValueError("N must be positive")

    @property
    def grid(self) -> np.ndarray:
        top = 1.0 - self.delta
        n = int(math.floor(top / self.step + 1e-9))
        g = np.arange(n + 1) * self.step
        if top - g[-1] > 1e-12:
            g = np.append(g, top)
        return g

    def with_(self, **kw) -> "DesignParams":
        return replace(self, **kw)


@dataclass
class StageRows:
    """Constraint (i) for one stage: derivative rows over the retained grid."""
    label: str
    unknown: float          # K, the number of symbols still unknown
    x: np.ndarray
    coeffs: np.ndarray      # (len(x), D): d/dx of the stripped law, per design variable
    log_arg: np.ndarray     # ln(1 - x - c sqrt((1 - x)/K)) (negative)
    dropped: np.ndarray


def _stage_rows(params: DesignParams, total: int, known: int, label: str) -> StageRows:
    D = params.D
    unknown = total - known
    x = params.grid
    arg = 1.0 - x - params.c * np.sqrt((1.0 - x) / unknown)
    keep = arg > 0
    if not keep.all():
        warnings.warn(f"{label}: dropped {int((~keep).sum())} grid points where the "
                      "log argument is not positive", RuntimeWarning, stacklevel=3)
    xk = x[keep]
    H = hypergeom_matrix(total, known, D)[1:, :]          # rows: design degree 1..D
    d = np.arange(D + 1)
    # derivative of sum_d H[D', d] x^d at each grid point, for every design degree D'
    powers = np.where(d[None, 1:] >= 1, xk[:, None] ** np.maximum(d[None, 1:] - 1, 0), 0.0)
    deriv_basis = powers * d[None, 1:]                    # (nx, D): d x^(d-1) for d = 1..D
    coeffs = deriv_basis @ H[:, 1:].T                     # (nx, D)
    return StageRows(label, float(unknown), xk, coeffs, np.log(arg[keep]), x[~keep])


def fcc_stages(params: DesignParams) -> list[StageRows]:
    M, k = params.M, params.k
    return [_stage_rows(params, M * k, m * k, f"m={m}") for m in range(M)]


def pcc_stages(params: DesignParams, s: Sequence[float]) -> list[StageRows]:
    M, k = params.M, params.k
    if any(b < a for a, b in zip(s, list(s)[1:])):
        raise ValueError("s must be non-decreasing")
    out = []
    for j, sj in enumerate(s, start=1):
        if sj < 0 or sj >= k:
            raise ValueError(f"s^({j}) = {sj} outside [0, k)")
        known = int(round(M * sj))
        known = min(known, M * k - 1)
        out.append(_stage_rows(params, M * k, known, f"j={j}"))
    return out


def _build(params: DesignParams, stages: list[StageRows]) -> LpProblem:
    D = params.D
    R = len(stages)
    n = D + R
    obj = np.zeros(n)
    obj[D:] = 1.0
    p = LpProblem(obj, bounds=[(0.0, 1.0)] * D + [(0.0, None)] * R,
                  names=[f"w{d}" for d in range(1, D + 1)] + [f"r[{s.label}]" for s in stages])
    for i, st in enumerate(stages):
        for row, la in zip(st.coeffs, st.log_arg):
            a = np.zeros(n)
            a[:D] = row
            a[D + i] = la
            p.add(a, ">=", 0.0)
    simplex = np.zeros(n)
    simplex[:D] = 1.0
    p.add(simplex, "=", 1.0)
    return p


def build_fcc_lp(params: DesignParams) -> LpProblem:
    """Variables: Phi^(M)_1..D then r_0..r_{M-1}."""
    return _build(params, fcc_stages(params))


def build_pcc_lp(params: DesignParams, s: Sequence[float]) -> LpProblem:
    """Variables: Omega_1..D then r_1..r_L, one stage per entry of s."""
    return _build(params, pcc_stages(params, s))


@dataclass
class Design:
    dist: DegreeDistribution
    r: np.ndarray
    labels: list[str]
    objective: float
    residual_min: np.ndarray
    dropped: dict[str, int]
    status: str = "optimal"

    @property
    def epsilon(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.where(self.r > 0, 1.0 / self.r - 1.0, np.inf)

    @property
    def mean(self) -> float:
        return self.dist.mean

    def report(self) -> dict:
        return {
            "status": self.status,
            "mean_degree": self.mean,
            "objective": self.objective,
            "stages": [
                {"stage": lab, "r": float(r), "epsilon": float(eps), "residual_min": float(res),
                 "dropped_points": self.dropped.get(lab, 0)}
                for lab, r, eps, res in zip(self.labels, self.r, self.epsilon, self.residual_min)
            ],
        }


def stage_residuals(stages: list[StageRows], w: np.ndarray, r: np.ndarray) -> list[np.ndarray]:
    """Constraint (i) slack at every retained grid point, by direct evaluation."""
    return [st.coeffs @ w + ri * st.log_arg for st, ri in zip(stages, r)]


def _finish(stages: list[StageRows], res: LpResult, D: int) -> Design:
    if res.status != "optimal":
        raise DesignError(f"LP {res.status}: {res.message}")
    x = res.x
    w = np.clip(x[:D], 0.0, None)
    w = w / w.sum()
    # shrink each r to the largest value the cleaned-up distribution supports
    r = []
    for st in stages:
        lhs = st.coeffs @ w
        r.append(max(0.0, float(np.min(lhs / -st.log_arg))) if st.x.size else 0.0)
    r = np.array(r)
    resid = stage_residuals(stages, w, r)
    pmf = np.concatenate([[0.0], w])
    pmf[np.abs(pmf) < 1e-15] = 0.0
    dist = DegreeDistribution.from_weights(pmf)
    return Design(dist, r, [s.label for s in stages], float(r.sum()),
                  np.array([float(v.min()) if v.size else 0.0 for v in resid]),
                  {s.label: int(s.dropped.size) for s in stages})


def design_fcc(params: DesignParams) -> Design:
    stages = fcc_stages(params)
    return _finish(stages, lp_solve(_build(params, stages)), params.D)


def design_pcc(params: DesignParams, s: Sequence[float]) -> Design:
    stages = pcc_stages(params, s)
    return _finish(stages, lp_solve(_build(params, stages)), params.D)


@dataclass
class FixedPointResult:
    design: Design
    s: np.ndarray
    iterations: int
    converged: bool
    history: list[np.ndarray] = field(default_factory=list)
    tv_steps: list[float] = field(default_factory=list)


def pcc_design_fixed_point(params: DesignParams, max_outer: int = 10,
                           tol_fraction: float = 0.001) -> FixedPointResult:
    """Alternate the PCC LP with the partner-recovery recursion until s settles."""
    from ..analysis.pcc import pcc_user_recursion

    if max_outer < 1:
        raise ValueError("max_outer must be >= 1")
    if params.N is None:
        raise ValueError("the PCC design needs N")
    k, N, M = params.k, params.N, params.M
    L = min(math.ceil(k / N), params.part_cap)
    s = np.array([min(i * N, k - 1) for i in range(1, L + 1)], dtype=float)
    history = [s.copy()]
    tv = []
    design = None
    converged = False
    it = 0
    for it in range(1, max_outer + 1):
        new_design = design_pcc(params, s)
        if design is not None:
            tv.append(new_design.dist.tv_distance(design.dist))
        design = new_design
        rec = pcc_user_recursion(design.dist, k, N, M, params.e_inter, L)
        s_new = np.minimum(np.maximum.accumulate(rec.s), k - 1)
        step = float(np.max(np.abs(s_new - s)))
        s = s_new
        history.append(s.copy())
        if step < tol_fraction * k:
            converged = True
            break
    return FixedPointResult(design, s, it, converged, history, tv)
