"""Mixed-form DG assembly on tensor-product meshes: per-direction upwind edge
fluxes, boundary penalties on U, and jump-penalized flux lines at index 3N/4
in each direction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import SparseSystem, from_coo, lu_solve
from .mesh import TensorMesh2D
from .polyspace import (
    PiecewisePoly2D,
    end_vals,
    gauss_rule,
    grad_matrix,
    leg_mass,
    legendre_basis,
)

__all__ = [
    "FluxConfig2D",
    "LdgSolution2D",
    "assemble2d",
    "solve_2d",
    "bilinear_B2d",
    "coeffs_to_solution_2d",
    "solution_to_coeffs_2d",
]

ASSEMBLY_EXTRA_NODES = 1

_P, _Q, _U = 0, 1, 2  # per-cell block order


@dataclass(frozen=True)
class FluxConfig2D:
    """Stabilization parameters of the 2D fluxes: a common boundary penalty
    weight on U for all four edge families, and the two jump-penalty weights
    on the special mesh lines (x-flux line for P, y-flux line for Q)."""

    eps: float
    lambda_boundary: float
    lambda_p: float
    lambda_q: float
    special_index: int

    @classmethod
    def paper(cls, eps: float, N: int) -> "FluxConfig2D":
        s = math.sqrt(eps)
        return cls(eps=eps, lambda_boundary=s, lambda_p=1.0 / s, lambda_q=1.0 / s,
                   special_index=3 * N // 4)

    @classmethod
    def classic(cls, eps: float, N: int) -> "FluxConfig2D":
        s = math.sqrt(eps)
        return cls(eps=eps, lambda_boundary=s, lambda_p=0.0, lambda_q=0.0,
                   special_index=3 * N // 4)


@dataclass(frozen=True, eq=False)
class LdgSolution2D:
    """Discrete triple (U, P, Q) on a common tensor mesh and degree."""

    u: PiecewisePoly2D
    p: PiecewisePoly2D
    q: PiecewisePoly2D

    def __post_init__(self):
        if not (self.u.mesh is self.p.mesh is self.q.mesh):
            raise ValueError("U, P, Q must share one mesh")
        if not (self.u.degree == self.p.degree == self.q.degree):
            raise ValueError("U, P, Q must share one degree")


class _Acc:
    def __init__(self):
        self.rows, self.cols, self.vals = [], [], []

    def add(self, r0: int, c0: int, block: np.ndarray) -> None:
        nr, nc = block.shape
        self.rows.append(np.repeat(np.arange(r0, r0 + nr), nc))
        self.cols.append(np.tile(np.arange(c0, c0 + nc), nr))
        self.vals.append(block.ravel())


def assemble2d(mesh: TensorMesh2D, problem, k: int, cfg: FluxConfig2D,
               nq: int | None = None) -> SparseSystem:
    """Assemble the 3*N^2*(k+1)^2 system for the triple (U, P, Q).

    Cells are numbered lexicographically with the x index fastest; each
    cell's unknowns are ordered [P, Q, U] blocks of tensor-Legendre modes
    (x-mode major).  Edge couplings mirror the 1D pattern per direction,
    with the jump penalties oriented for a positive diagonal, as in 1D.
    """
    if k < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {k}")
    if not math.isclose(problem.eps, cfg.eps, rel_tol=1e-12):
        raise ValueError(f"flux config eps={cfg.eps} does not match problem eps={problem.eps}")
    mx, my = mesh.mesh_x, mesh.mesh_y
    if not math.isclose(problem.eps, mx.params.eps, rel_tol=1e-12):
        raise ValueError(f"problem eps={problem.eps} does not match mesh eps={mx.params.eps}")
    nx, ny = mesh.shape
    if nx != ny:
        raise ValueError(
            f"the flux definition uses one special line index per direction; "
            f"got nx={nx} != ny={ny}"
        )
    B1 = k + 1
    B2 = B1 * B1
    nqv = nq if nq is not None else k + 1 + ASSEMBLY_EXTRA_NODES
    rule = gauss_rule(nqv)
    phi = legendre_basis(k, rule.nodes)
    G = grad_matrix(k)
    mass = leg_mass(k)
    em, ep = end_vals(k)
    hx, hy = mx.widths, my.widths
    Xn = (0.5 * (mx.points[:-1] + mx.points[1:]))[:, None] + 0.5 * hx[:, None] * rule.nodes[None, :]
    Yn = (0.5 * (my.points[:-1] + my.points[1:]))[:, None] + 0.5 * hy[:, None] * rule.nodes[None, :]
    X4 = Xn[:, None, :, None]
    Y4 = Yn[None, :, None, :]
    shape4 = (nx, ny, rule.n, rule.n)
    bV = np.broadcast_to(np.asarray(problem.b(X4, Y4), dtype=float), shape4)
    fV = np.broadcast_to(np.asarray(problem.f(X4, Y4), dtype=float), shape4)
    # (b u, v) blocks and f moments for all cells at once
    b_blocks = np.einsum("ijxy,x,y,ax,mx,by,ny->ijabmn",
                         bV, rule.weights, rule.weights, phi, phi, phi, phi)
    b_blocks = b_blocks.reshape(nx, ny, B2, B2) * np.multiply.outer(
        0.5 * hx, 0.5 * hy)[:, :, None, None]
    f_mom = np.einsum("ijxy,x,y,ax,by->ijab", fV, rule.weights, rule.weights, phi, phi)
    f_mom = f_mom.reshape(nx, ny, B2) * np.multiply.outer(0.5 * hx, 0.5 * hy)[:, :, None]

    def off(i: int, j: int, field: int) -> int:
        return ((j * nx + i) * 3 + field) * B2

    acc = _Acc()
    ndof = 3 * nx * ny * B2
    rhs = np.zeros(ndof)
    inv_eps = 1.0 / cfg.eps
    Dm = np.diag(mass)
    grad_x = np.kron(G, Dm)      # to be scaled by hy/2
    grad_y = np.kron(Dm, G)      # to be scaled by hx/2
    mass_t = np.kron(Dm, Dm)     # to be scaled by (hx/2)(hy/2)

    for j in range(ny):
        for i in range(nx):
            cell_mass = (0.25 * hx[i] * hy[j]) * mass_t
            gx = (0.5 * hy[j]) * grad_x
            gy = (0.5 * hx[i]) * grad_y
            acc.add(off(i, j, _P), off(i, j, _P), inv_eps * cell_mass)
            acc.add(off(i, j, _P), off(i, j, _U), gx)
            acc.add(off(i, j, _Q), off(i, j, _Q), inv_eps * cell_mass)
            acc.add(off(i, j, _Q), off(i, j, _U), gy)
            acc.add(off(i, j, _U), off(i, j, _P), gx)
            acc.add(off(i, j, _U), off(i, j, _Q), gy)
            acc.add(off(i, j, _U), off(i, j, _U), b_blocks[i, j])
            rhs[off(i, j, _U):off(i, j, _U) + B2] = f_mom[i, j]

    m = cfg.special_index

    def xblock(test_tx, trial_tx, j, wt):
        # Edge on a vertical line: rank-1 in the x-modes, mass in y.
        return wt * np.kron(np.outer(test_tx, trial_tx), (0.5 * hy[j]) * Dm)

    def yblock(test_ty, trial_ty, i, wt):
        return wt * np.kron((0.5 * hx[i]) * Dm, np.outer(test_ty, trial_ty))

    # Vertical edges: U-hat enters the P-test rows, P-hat the U-test rows.
    for ii in range(nx + 1):
        u_hat = []  # (field, cell_i, trace, weight)
        if 0 < ii < nx:
            u_hat.append((_U, ii - 1, ep, 1.0))
            if ii == m and cfg.lambda_p != 0.0:
                u_hat.append((_P, ii, em, cfg.lambda_p))
                u_hat.append((_P, ii - 1, ep, -cfg.lambda_p))
        if ii == 0:
            p_hat = [(_P, 0, em, 1.0), (_U, 0, em, cfg.lambda_boundary)]
        elif ii == nx:
            p_hat = [(_P, nx - 1, ep, 1.0), (_U, nx - 1, ep, -cfg.lambda_boundary)]
        else:
            p_hat = [(_P, ii, em, 1.0)]
        for j in range(ny):
            tests = []
            if ii >= 1:
                tests.append((ii - 1, -ep))
            if ii <= nx - 1:
                tests.append((ii, em))
            for ci, tv in tests:
                for fld, ti, cv, wt in u_hat:
                    acc.add(off(ci, j, _P), off(ti, j, fld), xblock(tv, cv, j, wt))
                for fld, ti, cv, wt in p_hat:
                    acc.add(off(ci, j, _U), off(ti, j, fld), xblock(tv, cv, j, wt))

    # Horizontal edges: U-hat enters the Q-test rows, Q-hat the U-test rows.
    for jj in range(ny + 1):
        u_hat = []
        if 0 < jj < ny:
            u_hat.append((_U, jj - 1, ep, 1.0))
            if jj == m and cfg.lambda_q != 0.0:
                u_hat.append((_Q, jj, em, cfg.lambda_q))
                u_hat.append((_Q, jj - 1, ep, -cfg.lambda_q))
        if jj == 0:
            q_hat = [(_Q, 0, em, 1.0), (_U, 0, em, cfg.lambda_boundary)]
        elif jj == ny:
            q_hat = [(_Q, ny - 1, ep, 1.0), (_U, ny - 1, ep, -cfg.lambda_boundary)]
        else:
            q_hat = [(_Q, jj, em, 1.0)]
        for i in range(nx):
            tests = []
            if jj >= 1:
                tests.append((jj - 1, -ep))
            if jj <= ny - 1:
                tests.append((jj, em))
            for cj, tv in tests:
                for fld, tj, cv, wt in u_hat:
                    acc.add(off(i, cj, _Q), off(i, tj, fld), yblock(tv, cv, i, wt))
                for fld, tj, cv, wt in q_hat:
                    acc.add(off(i, cj, _U), off(i, tj, fld), yblock(tv, cv, i, wt))

    rows = np.concatenate(acc.rows)
    cols = np.concatenate(acc.cols)
    vals = np.concatenate(acc.vals)
    matrix = from_coo(ndof, rows, cols, vals)
    ordering = "cell-major lexicographic (x fastest); per cell [P, Q, U] tensor modes"
    return SparseSystem(matrix=matrix, rhs=rhs, ordering=ordering)


def coeffs_to_solution_2d(mesh: TensorMesh2D, k: int, x: np.ndarray) -> LdgSolution2D:
    nx, ny = mesh.shape
    B1 = k + 1
    blocks = np.asarray(x, dtype=float).reshape(ny, nx, 3, B1, B1)

    def field(f):
        return PiecewisePoly2D(mesh, np.ascontiguousarray(blocks[:, :, f].transpose(1, 0, 2, 3)))

    return LdgSolution2D(u=field(_U), p=field(_P), q=field(_Q))


def solution_to_coeffs_2d(t: LdgSolution2D) -> np.ndarray:
    stacked = np.stack(
        [t.p.coeffs.transpose(1, 0, 2, 3),
         t.q.coeffs.transpose(1, 0, 2, 3),
         t.u.coeffs.transpose(1, 0, 2, 3)],
        axis=2,
    )
    return stacked.ravel()


def solve_2d(mesh: TensorMesh2D, problem, k: int, cfg: FluxConfig2D,
             nq: int | None = None) -> LdgSolution2D:
    system = assemble2d(mesh, problem, k, cfg, nq=nq)
    x = lu_solve(system.matrix, system.rhs)
    return coeffs_to_solution_2d(mesh, k, x)


def bilinear_B2d(t: LdgSolution2D, z: LdgSolution2D, b, cfg: FluxConfig2D,
                 nq: int | None = None) -> float:
    """Evaluate the 2D compact bilinear form B(T; Z) for Z = (v, s, r).

    Same structure as the 1D form, duplicated per direction: volume terms,
    upwind edge sums entering with a minus sign, downwind boundary edge
    terms, boundary penalties on U and the two jump-penalty lines.  On the
    diagonal it reproduces the squared 2D energy norm.
    """
    if t.u.mesh is not z.u.mesh or t.u.degree != z.u.degree:
        raise ValueError("both arguments must share mesh and degree")
    mesh = t.u.mesh
    mx, my = mesh.mesh_x, mesh.mesh_y
    nx, ny = mesh.shape
    k = t.u.degree
    nqv = nq if nq is not None else k + 1 + ASSEMBLY_EXTRA_NODES
    rule = gauss_rule(nqv)
    G = grad_matrix(k)
    mass = leg_mass(k)
    hx, hy = mx.widths, my.widths

    cU, cP, cQ = t.u.coeffs, t.p.coeffs, t.q.coeffs
    cV, cS, cR = z.u.coeffs, z.p.coeffs, z.q.coeffs

    Xn = (0.5 * (mx.points[:-1] + mx.points[1:]))[:, None] + 0.5 * hx[:, None] * rule.nodes[None, :]
    Yn = (0.5 * (my.points[:-1] + my.points[1:]))[:, None] + 0.5 * hy[:, None] * rule.nodes[None, :]
    bV = np.broadcast_to(
        np.asarray(b(Xn[:, None, :, None], Yn[None, :, None, :]), dtype=float),
        (nx, ny, rule.n, rule.n),
    )
    Uv = t.u.values_on_ref(rule.nodes, rule.nodes)
    Vv = z.u.values_on_ref(rule.nodes, rule.nodes)
    total = float(np.einsum("ijxy,x,y,i,j->", bV * Uv * Vv, rule.weights, rule.weights,
                            0.5 * hx, 0.5 * hy))
    area = np.multiply.outer(0.5 * hx, 0.5 * hy)
    total += (1.0 / cfg.eps) * float(np.einsum("ijmn,m,n,ij->", cP * cS, mass, mass, area))
    total += (1.0 / cfg.eps) * float(np.einsum("ijmn,m,n,ij->", cQ * cR, mass, mass, area))
    # (U, s_x) and (P, v_x): derivative in x-modes, mass in y-modes.
    total += float(np.einsum("ijan,am,ijmn,n,j->", cS, G, cU, mass, 0.5 * hy))
    total += float(np.einsum("ijan,am,ijmn,n,j->", cV, G, cP, mass, 0.5 * hy))
    # (U, r_y) and (Q, v_y).
    total += float(np.einsum("ijma,ab,ijmb,m,i->", cR, G, cU, mass, 0.5 * hx))
    total += float(np.einsum("ijma,ab,ijmb,m,i->", cV, G, cQ, mass, 0.5 * hx))

    def line_dot_x(A, Bc, j_weights):
        # A, Bc: (ny, k+1) tangential coefficients on one vertical line.
        return float(np.einsum("jn,jn,n,j->", A, Bc, mass, j_weights))

    wy = 0.5 * hy
    wx = 0.5 * hx
    m = cfg.special_index

    for ii in range(1, nx):
        jump_s = z.p.trace_x(ii, "left") - z.p.trace_x(ii, "right")
        total -= line_dot_x(t.u.trace_x(ii, "left"), jump_s, wy)
    for ii in range(nx):
        total -= line_dot_x(t.p.trace_x(ii, "right"), z.u.jump_x(ii), wy)
    total -= line_dot_x(t.p.trace_x(nx, "left"), z.u.jump_x(nx), wy)
    if cfg.lambda_p != 0.0:
        jp = t.p.trace_x(m, "left") - t.p.trace_x(m, "right")
        js = z.p.trace_x(m, "left") - z.p.trace_x(m, "right")
        total += cfg.lambda_p * line_dot_x(jp, js, wy)
    total += cfg.lambda_boundary * (
        line_dot_x(t.u.jump_x(0), z.u.jump_x(0), wy)
        + line_dot_x(t.u.jump_x(nx), z.u.jump_x(nx), wy)
    )

    for jj in range(1, ny):
        jump_r = z.q.trace_y(jj, "left") - z.q.trace_y(jj, "right")
        total -= line_dot_x(t.u.trace_y(jj, "left"), jump_r, wx)
    for jj in range(ny):
        total -= line_dot_x(t.q.trace_y(jj, "right"), z.u.jump_y(jj), wx)
    total -= line_dot_x(t.q.trace_y(ny, "left"), z.u.jump_y(ny), wx)
    if cfg.lambda_q != 0.0:
        jq = t.q.trace_y(m, "left") - t.q.trace_y(m, "right")
        jr = z.q.trace_y(m, "left") - z.q.trace_y(m, "right")
        total += cfg.lambda_q * line_dot_x(jq, jr, wx)
    total += cfg.lambda_boundary * (
        line_dot_x(t.u.jump_y(0), z.u.jump_y(0), wx)
        + line_dot_x(t.u.jump_y(ny), z.u.jump_y(ny), wx)
    )
    return total
