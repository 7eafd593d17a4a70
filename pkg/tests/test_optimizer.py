import numpy as np
import pytest

from raptorcoop.optimizer import (DesignError, DesignParams, LpProblem, build_fcc_lp, design_fcc,
                                  design_pcc, enumerate_vertices, lp_solve,
                                  pcc_design_fixed_point)
from raptorcoop.optimizer.design import fcc_stages, stage_residuals
from raptorcoop.tables import FCC_MEAN


def test_lp_small_known_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6  ->  (1.6, 1.2)
    p = LpProblem(np.array([1.0, 1.0]))
    p.add([1, 2], "<=", 4)
    p.add([3, 1], "<=", 6)
    res = lp_solve(p)
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x, [1.6, 1.2], atol=1e-9)


def test_lp_infeasible_and_unbounded():
    p = LpProblem(np.array([1.0]))
    p.add([1], "<=", -1)
    assert lp_solve(p).status == "infeasible"
    q = LpProblem(np.array([1.0]))
    assert lp_solve(q).status == "unbounded"


def test_lp_matches_vertex_enumeration(rng):
    for _ in range(30):
        n = 3
        p = LpProblem(rng.normal(size=n), bounds=[(0.0, 5.0)] * n)
        for _ in range(4):
            p.add(rng.normal(size=n), "<=", float(rng.uniform(1, 3)))
        p.add(np.ones(n), "=", 2.0)
        res = lp_solve(p)
        verts = enumerate_vertices(p)
        if not verts:
            assert res.status == "infeasible"
            continue
        best = max(float(p.objective @ v) for v in verts)
        assert res.objective == pytest.approx(best, abs=1e-7)
        assert np.min(p.residuals(res.x)) > -1e-8


def test_design_params_validation():
    with pytest.raises(ValueError):
        DesignParams(M=2, k=1000, D=1)
    with pytest.raises(ValueError):
        DesignParams(M=2, k=1000, delta=1.5)
    g = DesignParams(M=1, k=1000).grid
    assert g[0] == 0.0 and g[-1] == pytest.approx(0.99)


@pytest.mark.parametrize("M", [1, 2])
def test_fcc_design_feasible(M):
    params = DesignParams(M=M, k=2000)
    d = design_fcc(params)
    assert d.dist.pmf.sum() == pytest.approx(1.0)
    assert np.all(d.residual_min >= -1e-9)
    # residuals recomputed independently of the solver output
    stages = fcc_stages(params)
    w = d.dist.padded(params.D + 1)[1:]
    assert min(r.min() for r in stage_residuals(stages, w, d.r)) >= -1e-9
    assert abs(d.mean - FCC_MEAN[M]) / FCC_MEAN[M] < 0.2
    assert np.all(d.epsilon >= 0)


def test_fcc_lp_shape():
    params = DesignParams(M=2, k=2000, step=0.05)
    lp = build_fcc_lp(params)
    assert len(lp.objective) == params.D + 2
    assert len(lp.constraints) == 2 * len(params.grid) + 1


def test_pcc_design_rejects_bad_s():
    with pytest.raises(ValueError):
        design_pcc(DesignParams(M=2, k=1000, N=100), [10.0, 5.0, 20.0])
    with pytest.raises(ValueError):
        design_pcc(DesignParams(M=2, k=1000, N=100), [0.0, 1000.0])


def test_infeasible_design_raises():
    # a ripple margin so large that no distribution can satisfy the constraints
    with pytest.raises(DesignError):
        design_fcc(DesignParams(M=1, k=100, D=2, c=50.0, delta=0.5))


def test_fixed_point_desk_scale():
    fp = pcc_design_fixed_point(DesignParams(M=2, k=2000, N=200), max_outer=10)
    assert fp.converged and fp.iterations <= 10
    assert np.all(np.diff(fp.s) >= 0)
    assert np.all(fp.design.residual_min >= -1e-9)
