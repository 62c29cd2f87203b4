"""Mixed-form DG assembly in 1D: elementwise variational equations coupled by
upwind numerical fluxes with boundary penalties and one interior jump penalty."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import SparseSystem, from_coo, lu_solve, matvec
from .mesh import ShishkinMesh1D
from .polyspace import PiecewisePoly1D, end_vals, gauss_rule, grad_matrix, leg_mass, legendre_basis

__all__ = [
    "FluxConfig",
    "LdgSolution1D",
    "flux_u_hat",
    "flux_q_hat",
    "assemble",
    "solve_1d",
    "bilinear_B",
    "residual_check",
    "coeffs_to_solution",
    "solution_to_coeffs",
]

ASSEMBLY_EXTRA_NODES = 1  # one node beyond exactness for the polynomial terms


@dataclass(frozen=True)
class FluxConfig:
    """Stabilization parameters of the numerical fluxes.

    lambda0/lambdaN weight the boundary penalties on U, lambda_q the jump
    penalty on Q at the single special interface (index 3N/4).  lambda_q=0
    recovers the plain upwind flux used for the ablation study.
    """

    eps: float
    lambda0: float
    lambdaN: float
    lambda_q: float
    special_interface: int

    @classmethod
    def paper(cls, eps: float, N: int) -> "FluxConfig":
        s = math.sqrt(eps)
        return cls(eps=eps, lambda0=s, lambdaN=s, lambda_q=1.0 / s,
                   special_interface=3 * N // 4)

    @classmethod
    def classic(cls, eps: float, N: int) -> "FluxConfig":
        s = math.sqrt(eps)
        return cls(eps=eps, lambda0=s, lambdaN=s, lambda_q=0.0,
                   special_interface=3 * N // 4)


@dataclass(frozen=True, eq=False)
class LdgSolution1D:
    """Discrete pair (Q, U) on a common mesh and degree."""

    q: PiecewisePoly1D
    u: PiecewisePoly1D

    def __post_init__(self):
        if self.q.mesh is not self.u.mesh or self.q.degree != self.u.degree:
            raise ValueError("Q and U must share mesh and degree")


def flux_u_hat(w: LdgSolution1D, j: int, cfg: FluxConfig) -> float:
    """Single-valued trace of U at interface j.

    Zero at both boundary interfaces; the upwind value U^- elsewhere.  At
    the special interface a jump penalty on Q is added, oriented as
    lambda_q * (Q^+ - Q^-) so that its diagonal contribution to the scheme's
    bilinear form is +lambda_q*[[Q]]^2 (the orientation required for the
    energy identity; the opposite one makes the penalty antidissipative).
    """
    N = w.u.mesh.ncells
    if j == 0 or j == N:
        return 0.0
    val = w.u.trace_left(j)
    if j == cfg.special_interface and cfg.lambda_q != 0.0:
        val += cfg.lambda_q * (w.q.trace_right(j) - w.q.trace_left(j))
    return val


def flux_q_hat(w: LdgSolution1D, j: int, cfg: FluxConfig) -> float:
    """Single-valued trace of Q at interface j: downwind value Q^+ in the
    interior, boundary values penalized by lambda*U toward u=0."""
    N = w.q.mesh.ncells
    if j == 0:
        return w.q.trace_right(0) + cfg.lambda0 * w.u.trace_right(0)
    if j == N:
        return w.q.trace_left(N) - cfg.lambdaN * w.u.trace_left(N)
    return w.q.trace_right(j)


class _Accumulator:
    def __init__(self):
        self.rows = []
        self.cols = []
        self.vals = []

    def add_block(self, r0: int, c0: int, block: np.ndarray) -> None:
        nr, nc = block.shape
        r = np.repeat(np.arange(r0, r0 + nr), nc)
        c = np.tile(np.arange(c0, c0 + nc), nr)
        self.rows.append(r)
        self.cols.append(c)
        self.vals.append(block.ravel())

    def concat(self):
        return (np.concatenate(self.rows), np.concatenate(self.cols),
                np.concatenate(self.vals))


def _check_consistent(mesh: ShishkinMesh1D, problem, cfg: FluxConfig) -> None:
    if not math.isclose(problem.eps, mesh.params.eps, rel_tol=1e-12):
        raise ValueError(
            f"problem eps={problem.eps} does not match mesh eps={mesh.params.eps}"
        )
    if not math.isclose(cfg.eps, problem.eps, rel_tol=1e-12):
        raise ValueError(f"flux config eps={cfg.eps} does not match problem eps={problem.eps}")


def assemble(mesh: ShishkinMesh1D, problem, k: int, cfg: FluxConfig,
             nq: int | None = None) -> SparseSystem:
    """Assemble the 2N(k+1)-dimensional system for the pair (Q, U).

    Unknown ordering is cell-major with the Q block before the U block in
    each cell; row blocks follow the same layout (flux-variable test
    equations first).  The jump penalty couples the Q blocks of the two
    cells flanking the special interface into both of their test rows.
    """
    if k < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {k}")
    _check_consistent(mesh, problem, cfg)
    N = mesh.ncells
    B = k + 1
    nq = nq if nq is not None else k + 1 + ASSEMBLY_EXTRA_NODES
    rule = gauss_rule(nq)
    phi = legendre_basis(k, rule.nodes)
    G = grad_matrix(k)
    mass = leg_mass(k)
    em, ep = end_vals(k)
    h = mesh.widths
    mid = 0.5 * (mesh.points[:-1] + mesh.points[1:])
    X = mid[:, None] + 0.5 * h[:, None] * rule.nodes[None, :]
    bX = np.broadcast_to(np.asarray(problem.b(X), dtype=float), X.shape)
    fX = np.broadcast_to(np.asarray(problem.f(X), dtype=float), X.shape)
    b_blocks = np.einsum("g,jg,ag,ng->jan", rule.weights, bX, phi, phi) * (0.5 * h)[:, None, None]
    f_mom = np.einsum("g,jg,ag->ja", rule.weights, fX, phi) * (0.5 * h)[:, None]

    def iq(c):  # Q-coefficient (and flux-test-row) offset of cell c
        return c * 2 * B

    def iu(c):  # U-coefficient (and primal-test-row) offset of cell c
        return c * 2 * B + B

    acc = _Accumulator()
    rhs = np.zeros(2 * N * B)
    inv_eps = 1.0 / cfg.eps
    for c in range(N):
        acc.add_block(iq(c), iq(c), np.diag(inv_eps * 0.5 * h[c] * mass))
        acc.add_block(iq(c), iu(c), G)
        acc.add_block(iu(c), iq(c), G)
        acc.add_block(iu(c), iu(c), b_blocks[c])
        rhs[iu(c):iu(c) + B] = f_mom[c]

    m = cfg.special_interface
    for j in range(N + 1):
        # Test traces hit by the flux at interface j: the cell to the left
        # sees -value at its right end, the cell to the right +value at its
        # left end.
        tests_q = []
        tests_u = []
        if j >= 1:
            tests_q.append((iq(j - 1), -ep))
            tests_u.append((iu(j - 1), -ep))
        if j <= N - 1:
            tests_q.append((iq(j), em))
            tests_u.append((iu(j), em))

        u_hat_terms = []
        if 0 < j < N:
            u_hat_terms.append((iu(j - 1), ep, 1.0))
            if j == m and cfg.lambda_q != 0.0:
                u_hat_terms.append((iq(j), em, cfg.lambda_q))
                u_hat_terms.append((iq(j - 1), ep, -cfg.lambda_q))

        if j == 0:
            q_hat_terms = [(iq(0), em, 1.0), (iu(0), em, cfg.lambda0)]
        elif j == N:
            q_hat_terms = [(iq(N - 1), ep, 1.0), (iu(N - 1), ep, -cfg.lambdaN)]
        else:
            q_hat_terms = [(iq(j), em, 1.0)]

        for r0, tv in tests_q:
            for c0, cv, wt in u_hat_terms:
                acc.add_block(r0, c0, np.outer(tv, cv) * wt)
        for r0, tv in tests_u:
            for c0, cv, wt in q_hat_terms:
                acc.add_block(r0, c0, np.outer(tv, cv) * wt)

    rows, cols, vals = acc.concat()
    matrix = from_coo(2 * N * B, rows, cols, vals)
    ordering = "cell-major; per cell [Q_0..Q_k, U_0..U_k]"
    return SparseSystem(matrix=matrix, rhs=rhs, ordering=ordering)


def coeffs_to_solution(mesh: ShishkinMesh1D, k: int, x: np.ndarray) -> LdgSolution1D:
    N = mesh.ncells
    B = k + 1
    blocks = np.asarray(x, dtype=float).reshape(N, 2, B)
    return LdgSolution1D(
        q=PiecewisePoly1D(mesh, blocks[:, 0, :].copy()),
        u=PiecewisePoly1D(mesh, blocks[:, 1, :].copy()),
    )


def solution_to_coeffs(w: LdgSolution1D) -> np.ndarray:
    return np.stack([w.q.coeffs, w.u.coeffs], axis=1).ravel()


def solve_1d(mesh: ShishkinMesh1D, problem, k: int, cfg: FluxConfig,
             nq: int | None = None) -> LdgSolution1D:
    """Assemble, solve and unpack the discrete pair."""
    system = assemble(mesh, problem, k, cfg, nq=nq)
    x = lu_solve(system.matrix, system.rhs)
    return coeffs_to_solution(mesh, k, x)


def residual_check(system: SparseSystem, coeffs: np.ndarray) -> float:
    """Max-norm residual of candidate solution coefficients."""
    return float(np.abs(matvec(system.matrix, coeffs) - system.rhs).max(initial=0.0))


def bilinear_B(w: LdgSolution1D, chi: LdgSolution1D, b, cfg: FluxConfig,
               nq: int | None = None) -> float:
    """Evaluate the scheme's compact bilinear form B(W; chi).

    This is the cell-sum of the elementwise equations with the fluxes
    substituted: volume terms, upwind interface sums (entering with a
    minus sign), the downwind boundary term, the two boundary penalties on
    U and the interior jump penalty on Q.  On the diagonal it reproduces
    the squared energy norm.
    """
    if w.u.mesh is not chi.u.mesh or w.u.degree != chi.u.degree:
        raise ValueError("both arguments must share mesh and degree")
    mesh = w.u.mesh
    N = mesh.ncells
    k = w.u.degree
    nq = nq if nq is not None else k + 1 + ASSEMBLY_EXTRA_NODES
    rule = gauss_rule(nq)
    G = grad_matrix(k)
    mass = leg_mass(k)
    em, ep = end_vals(k)
    h = mesh.widths
    mid = 0.5 * (mesh.points[:-1] + mesh.points[1:])
    X = mid[:, None] + 0.5 * h[:, None] * rule.nodes[None, :]
    bX = np.broadcast_to(np.asarray(b(X), dtype=float), X.shape)

    cQ, cU = w.q.coeffs, w.u.coeffs
    cR, cV = chi.q.coeffs, chi.u.coeffs

    Uvals = cU @ legendre_basis(k, rule.nodes)
    Vvals = cV @ legendre_basis(k, rule.nodes)
    total = float(np.einsum("jg,g,jg,j->", bX * Uvals, rule.weights, Vvals, 0.5 * h))
    total += (1.0 / cfg.eps) * float(np.einsum("jm,m,jm,j->", cQ, mass, cR, 0.5 * h))
    total += float(np.einsum("ja,an,jn->", cR, G, cU))  # <U, r'>
    total += float(np.einsum("ja,an,jn->", cV, G, cQ))  # <Q, v'>

    # Interface traces: *_m at right cell ends (interfaces 1..N), *_p at
    # left cell ends (interfaces 0..N-1).
    Um, Up = cU @ ep, cU @ em
    Qm, Qp = cQ @ ep, cQ @ em
    Rm, Rp = cR @ ep, cR @ em
    Vm, Vp = cV @ ep, cV @ em

    jump_r = Rm[:-1] - Rp[1:]  # interior interfaces 1..N-1
    jump_v = Vm[:-1] - Vp[1:]
    total -= float(Um[:-1] @ jump_r)
    total -= float(Qp[1:] @ jump_v)
    total -= Qp[0] * (-Vp[0])  # j=0 term of the downwind sum, [[v]]_0 = -v^+
    total -= Qm[-1] * Vm[-1]  # boundary term (Q v)^-_N
    total += cfg.lambda0 * (-Up[0]) * (-Vp[0])
    total += cfg.lambdaN * Um[-1] * Vm[-1]
    if cfg.lambda_q != 0.0:
        m = cfg.special_interface
        total += cfg.lambda_q * (Qm[m - 1] - Qp[m]) * (Rm[m - 1] - Rp[m])
    return total
