import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import pytest

from ldgrd.assembly1d import FluxConfig, LdgSolution1D, solve_1d
from ldgrd.assembly2d import FluxConfig2D, LdgSolution2D
from ldgrd.mesh import MeshParams, build_shishkin_1d
from ldgrd.norms import (
    balanced_error_1d,
    balanced_error_2d,
    discrete_energy_sq,
    energy_error_1d,
    energy_error_2d,
    error_report_1d,
    error_report_2d,
)
from ldgrd.polyspace import PiecewisePoly1D, PiecewisePoly2D
from ldgrd.problems import layer1d, poly_exact_1d

from conftest import uniform_mesh, uniform_mesh_2d


@dataclass(frozen=True)
class ZeroProblem1D:
    eps: float
    b: Callable = staticmethod(lambda x: np.ones_like(np.asarray(x, dtype=float)))
    u_exact: Callable = staticmethod(lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    q_exact: Callable = staticmethod(lambda x: np.zeros_like(np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class ZeroProblem2D:
    eps: float
    b: Callable = staticmethod(lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, 2.0))
    u_exact: Callable = staticmethod(lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape))
    p_exact: Callable = staticmethod(lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape))
    q_exact: Callable = staticmethod(lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape))


def unit_pair(mesh, eps):
    zero = np.zeros((mesh.ncells, 2))
    one = zero + np.array([1.0, 0.0])
    return LdgSolution1D(q=PiecewisePoly1D(mesh, zero), u=PiecewisePoly1D(mesh, one))


def test_energy_error_hand_value():
    eps = 1e-4
    mesh = uniform_mesh(8)
    prob = ZeroProblem1D(eps=eps)
    cfg = FluxConfig(eps=eps, lambda0=0.01, lambdaN=0.01, lambda_q=100.0,
                     special_interface=6)
    w = unit_pair(mesh, eps)
    val = energy_error_1d(w, prob, cfg)
    assert math.isclose(val, math.sqrt(1.0 + 2.0 * 0.01), rel_tol=1e-13)


def test_balanced_error_hand_value():
    eps = 1e-4
    mesh = uniform_mesh(8)
    prob = ZeroProblem1D(eps=eps)
    w = unit_pair(mesh, eps)
    assert math.isclose(balanced_error_1d(w, prob), math.sqrt(3.0), rel_tol=1e-13)


def test_discrete_energy_hand_value():
    eps = 1e-4
    mesh = uniform_mesh(8)
    cfg = FluxConfig(eps=eps, lambda0=0.01, lambdaN=0.01, lambda_q=100.0,
                     special_interface=6)
    w = unit_pair(mesh, eps)
    val = discrete_energy_sq(w, lambda x: np.ones_like(x), cfg)
    assert math.isclose(val, 1.02, rel_tol=1e-13)
    z = LdgSolution1D(q=PiecewisePoly1D(mesh, np.zeros((8, 2))),
                      u=PiecewisePoly1D(mesh, np.zeros((8, 2))))
    assert discrete_energy_sq(z, lambda x: np.ones_like(x), cfg) == 0.0


def test_exact_solution_has_zero_error():
    eps = 1e-4
    N, k = 8, 2
    mesh = build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=3.0, N=N))
    prob = poly_exact_1d(eps)
    cfg = FluxConfig.paper(eps, N)
    w = solve_1d(mesh, prob, k, cfg)
    rep = error_report_1d(w, prob, cfg)
    assert rep.err_energy < 1e-10
    assert rep.err_balanced < 1e-9
    assert rep.err_l2_u < 1e-11
    assert rep.err_linf_u < 1e-10
    assert rep.err_l2_q < 1e-11
    assert rep.err_l2_p is None


@pytest.mark.parametrize("s", [2.0, 1e-3])
def test_norm_homogeneity(s, rng):
    eps = 1e-6
    mesh = build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=2.0, N=16))
    prob = ZeroProblem1D(eps=eps)
    cfg = FluxConfig.paper(eps, 16)
    qc = rng.standard_normal((16, 3))
    uc = rng.standard_normal((16, 3))
    w1 = LdgSolution1D(q=PiecewisePoly1D(mesh, qc), u=PiecewisePoly1D(mesh, uc))
    ws = LdgSolution1D(q=PiecewisePoly1D(mesh, s * qc), u=PiecewisePoly1D(mesh, s * uc))
    for fn in (lambda w: energy_error_1d(w, prob, cfg),
               lambda w: balanced_error_1d(w, prob)):
        assert math.isclose(fn(ws), s * fn(w1), rel_tol=1e-12)
    rep1 = error_report_1d(w1, prob, cfg)
    reps = error_report_1d(ws, prob, cfg)
    assert math.isclose(reps.err_linf_u, s * rep1.err_linf_u, rel_tol=1e-12)


def test_quadrature_refinement_stability():
    eps = 1e-8
    N, k = 64, 1
    mesh = build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=2.0, N=N))
    prob = layer1d(eps)
    cfg = FluxConfig.paper(eps, N)
    w = solve_1d(mesh, prob, k, cfg)
    base = error_report_1d(w, prob, cfg, nq=k + 5)
    fine = error_report_1d(w, prob, cfg, nq=2 * (k + 5))
    for name in ("err_energy", "err_balanced", "err_l2_u", "err_l2_q"):
        b, f = getattr(base, name), getattr(fine, name)
        assert abs(b - f) / f < 1e-3


def test_error_monotone_under_refinement():
    eps = 1e-8
    prob = layer1d(eps)
    prev = None
    for N in (16, 32, 64, 128):
        mesh = build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=2.0, N=N))
        cfg = FluxConfig.paper(eps, N)
        w = solve_1d(mesh, prob, 1, cfg)
        val = balanced_error_1d(w, prob)
        if prev is not None:
            assert val <= 1.05 * prev
        prev = val


def test_balanced_at_least_energy_on_solver_errors():
    # holds for the shipped layer problems whenever eps <= 1 because the
    # flux term dominates and its weight grows from eps^{-1} to eps^{-3/2}
    eps = 1e-8
    prob = layer1d(eps)
    for N in (16, 64):
        mesh = build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=2.0, N=N))
        cfg = FluxConfig.paper(eps, N)
        w = solve_1d(mesh, prob, 1, cfg)
        rep = error_report_1d(w, prob, cfg)
        assert rep.err_balanced >= rep.err_energy


# -- 2D hand values -----------------------------------------------------------


def unit_triple(mesh2):
    nx, ny = mesh2.shape
    zero = np.zeros((nx, ny, 2, 2))
    one = zero.copy()
    one[..., 0, 0] = 1.0
    return LdgSolution2D(u=PiecewisePoly2D(mesh2, one),
                         p=PiecewisePoly2D(mesh2, zero),
                         q=PiecewisePoly2D(mesh2, zero))


def test_2d_hand_values():
    eps = 1e-4
    mesh2 = uniform_mesh_2d(4)
    prob = ZeroProblem2D(eps=eps)
    cfg = FluxConfig2D(eps=eps, lambda_boundary=0.01, lambda_p=100.0,
                       lambda_q=100.0, special_index=3)
    t = unit_triple(mesh2)
    # b=2 volume term plus four unit boundary edge families
    assert math.isclose(balanced_error_2d(t, prob, cfg), math.sqrt(6.0), rel_tol=1e-13)
    assert math.isclose(energy_error_2d(t, prob, cfg), math.sqrt(2.0 + 4.0 * 0.01),
                        rel_tol=1e-13)
    rep = error_report_2d(t, prob, cfg)
    assert rep.err_l2_p is not None and rep.err_l2_p == 0.0
    assert math.isclose(rep.err_l2_u, 1.0, rel_tol=1e-13)
    assert math.isclose(rep.err_linf_u, 1.0, rel_tol=1e-13)


def test_2d_zero_error():
    mesh2 = uniform_mesh_2d(4)
    prob = ZeroProblem2D(eps=1e-4)
    cfg = FluxConfig2D.paper(1e-4, 4)
    nx, ny = mesh2.shape
    zero = np.zeros((nx, ny, 2, 2))
    t = LdgSolution2D(u=PiecewisePoly2D(mesh2, zero), p=PiecewisePoly2D(mesh2, zero),
                      q=PiecewisePoly2D(mesh2, zero))
    assert balanced_error_2d(t, prob, cfg) == 0.0
    assert energy_error_2d(t, prob, cfg) == 0.0
