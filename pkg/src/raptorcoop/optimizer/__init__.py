from .design import (Design, DesignError, DesignParams, FixedPointResult, build_fcc_lp,
                     build_pcc_lp, design_fcc, design_pcc, fcc_stages, pcc_design_fixed_point,
                     pcc_stages, stage_residuals)
from .lp import LpProblem, LpResult, enumerate_vertices, lp_solve

__all__ = [
    "Design", "DesignError", "DesignParams", "FixedPointResult", "LpProblem", "LpResult",
    "build_fcc_lp", "build_pcc_lp", "design_fcc", "design_pcc", "enumerate_vertices",
    "fcc_stages", "lp_solve", "pcc_design_fixed_point", "pcc_stages", "stage_residuals",
]
