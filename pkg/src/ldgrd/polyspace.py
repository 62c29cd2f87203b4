"""Legendre reference-cell machinery: quadrature, basis evaluation and
piecewise-polynomial containers for the broken spaces in 1D and 2D."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mesh import ShishkinMesh1D, TensorMesh2D

__all__ = [
    "QuadratureRule",
    "gauss_rule",
    "legendre_eval",
    "legendre_basis",
    "legendre_basis_deriv",
    "leg_mass",
    "grad_matrix",
    "end_vals",
    "LocalPoly",
    "PiecewisePoly1D",
    "PiecewisePoly2D",
]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on the reference interval [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.nodes.size


@lru_cache(maxsize=None)
def _gauss_cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1."""
    if n < 1:
        raise ValueError(f"quadrature rule needs at least one node, got {n}")
    nodes, weights = _gauss_cached(n)
    return QuadratureRule(nodes=nodes, weights=weights)


def legendre_eval(degree: int, t):
    """Value of the Legendre polynomial of the given degree at t in [-1, 1]."""
    t = np.asarray(t, dtype=float)
    if degree == 0:
        return np.ones_like(t)
    prev = np.ones_like(t)
    cur = t.copy()
    for m in range(1, degree):
        prev, cur = cur, ((2 * m + 1) * t * cur - m * prev) / (m + 1)
    return cur


@lru_cache(maxsize=None)
def _basis_cached(k: int, key: bytes, nt: int) -> np.ndarray:
    t = np.frombuffer(key, dtype=float)
    vals = np.empty((k + 1, nt))
    vals[0] = 1.0
    if k >= 1:
        vals[1] = t
    for m in range(1, k):
        vals[m + 1] = ((2 * m + 1) * t * vals[m] - m * vals[m - 1]) / (m + 1)
    vals.flags.writeable = False
    return vals


def legendre_basis(k: int, t: np.ndarray) -> np.ndarray:
    """Rows P_0..P_k evaluated at the nodes t, shape (k+1, len(t))."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return _basis_cached(k, t.tobytes(), t.size)


def legendre_basis_deriv(k: int, t: np.ndarray) -> np.ndarray:
    """Rows P_0'..P_k' at the nodes t (derivatives in the reference variable)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    vals = legendre_basis(k, t)
    der = np.zeros((k + 1, t.size))
    if k >= 1:
        der[1] = 1.0
    for m in range(2, k + 1):
        der[m] = der[m - 2] + (2 * m - 1) * vals[m - 1]
    return der


@lru_cache(maxsize=None)
def leg_mass(k: int) -> np.ndarray:
    """Diagonal of the reference mass matrix: integral of P_m^2 = 2/(2m+1)."""
    d = 2.0 / (2.0 * np.arange(k + 1) + 1.0)
    d.flags.writeable = False
    return d


@lru_cache(maxsize=None)
def grad_matrix(k: int) -> np.ndarray:
    """G[a, n] = integral over [-1,1] of P_a'(t) P_n(t) dt."""
    rule = gauss_rule(k + 1)
    phi = legendre_basis(k, rule.nodes)
    dphi = legendre_basis_deriv(k, rule.nodes)
    G = np.einsum("g,ag,ng->an", rule.weights, dphi, phi)
    G.flags.writeable = False
    return G


@lru_cache(maxsize=None)
def end_vals(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis values at the cell ends: (at t=-1, at t=+1)."""
    minus = (-1.0) ** np.arange(k + 1)
    plus = np.ones(k + 1)
    minus.flags.writeable = False
    plus.flags.writeable = False
    return minus, plus


@dataclass(frozen=True, eq=False)
class LocalPoly:
    """Polynomial on one reference cell, stored as Legendre coefficients."""

    degree: int
    coeffs: np.ndarray

    def eval(self, t):
        phi = legendre_basis(self.degree, np.atleast_1d(t))
        out = self.coeffs @ phi
        return out if np.ndim(t) else float(out[0])


class PiecewisePoly1D:
    """Element of the broken polynomial space: one Legendre coefficient row
    per mesh cell, no continuity across interfaces.

    Interface convention: trace_left(j) is the limit at x_j from cell j-1,
    trace_right(j) from cell j (0-based cells).  jump(j) is
    trace_left - trace_right at interior interfaces, -trace_right at j=0
    and +trace_left at j=N.
    """

    def __init__(self, mesh: ShishkinMesh1D, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != 2 or coeffs.shape[0] != mesh.ncells:
            raise ValueError(
                f"coefficient array must be (ncells, k+1); got {coeffs.shape} "
                f"for {mesh.ncells} cells"
            )
        self.mesh = mesh
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    def eval(self, x):
        """Point values; at an interior mesh point the right-cell limit is taken."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        pts = self.mesh.points
        cells = np.clip(np.searchsorted(pts, xf, side="right") - 1, 0, self.mesh.ncells - 1)
        h = self.mesh.widths[cells]
        t = 2.0 * (xf - pts[cells]) / h - 1.0
        k = self.degree
        vals = np.zeros_like(xf)
        prev = np.ones_like(t)
        vals += self.coeffs[cells, 0] * prev
        if k >= 1:
            cur = t.copy()
            vals += self.coeffs[cells, 1] * cur
            for m in range(1, k):
                prev, cur = cur, ((2 * m + 1) * t * cur - m * prev) / (m + 1)
                vals += self.coeffs[cells, m + 1] * cur
        return float(vals[0]) if scalar else vals

    def values_on_ref(self, t: np.ndarray) -> np.ndarray:
        """Values at the same reference nodes in every cell, shape (ncells, len(t))."""
        return self.coeffs @ legendre_basis(self.degree, t)

    def deriv_values_on_ref(self, t: np.ndarray) -> np.ndarray:
        """Physical-derivative values at reference nodes per cell."""
        ref = self.coeffs @ legendre_basis_deriv(self.degree, t)
        return ref * (2.0 / self.mesh.widths)[:, None]

    def trace_left(self, j: int) -> float:
        if j < 1 or j > self.mesh.ncells:
            raise IndexError(f"no cell to the left of interface {j}")
        em, ep = end_vals(self.degree)
        return float(self.coeffs[j - 1] @ ep)

    def trace_right(self, j: int) -> float:
        if j < 0 or j >= self.mesh.ncells:
            raise IndexError(f"no cell to the right of interface {j}")
        em, ep = end_vals(self.degree)
        return float(self.coeffs[j] @ em)

    def jump(self, j: int) -> float:
        N = self.mesh.ncells
        if j == 0:
            return -self.trace_right(0)
        if j == N:
            return self.trace_left(N)
        return self.trace_left(j) - self.trace_right(j)


class PiecewisePoly2D:
    """Tensor-Legendre coefficients per cell of a tensor-product mesh,
    shape (nx, ny, k+1, k+1) with the x-mode first."""

    def __init__(self, mesh: TensorMesh2D, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        nx, ny = mesh.shape
        if coeffs.ndim != 4 or coeffs.shape[:2] != (nx, ny) or coeffs.shape[2] != coeffs.shape[3]:
            raise ValueError(f"coefficient array must be (nx, ny, k+1, k+1); got {coeffs.shape}")
        self.mesh = mesh
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return self.coeffs.shape[2] - 1

    def values_on_ref(self, tx: np.ndarray, ty: np.ndarray) -> np.ndarray:
        """Values on the tensor reference grid per cell, shape (nx, ny, len(tx), len(ty))."""
        k = self.degree
        px = legendre_basis(k, tx)
        py = legendre_basis(k, ty)
        return np.einsum("ijmn,mx,ny->ijxy", self.coeffs, px, py)

    def dx_values_on_ref(self, tx: np.ndarray, ty: np.ndarray) -> np.ndarray:
        k = self.degree
        dpx = legendre_basis_deriv(k, tx)
        py = legendre_basis(k, ty)
        vals = np.einsum("ijmn,mx,ny->ijxy", self.coeffs, dpx, py)
        return vals * (2.0 / self.mesh.mesh_x.widths)[:, None, None, None]

    def dy_values_on_ref(self, tx: np.ndarray, ty: np.ndarray) -> np.ndarray:
        k = self.degree
        px = legendre_basis(k, tx)
        dpy = legendre_basis_deriv(k, ty)
        vals = np.einsum("ijmn,mx,ny->ijxy", self.coeffs, px, dpy)
        return vals * (2.0 / self.mesh.mesh_y.widths)[None, :, None, None]

    def eval(self, x: float, y: float) -> float:
        mx, my = self.mesh.mesh_x, self.mesh.mesh_y
        i = int(np.clip(np.searchsorted(mx.points, x, side="right") - 1, 0, mx.ncells - 1))
        j = int(np.clip(np.searchsorted(my.points, y, side="right") - 1, 0, my.ncells - 1))
        tx = 2.0 * (x - mx.points[i]) / mx.widths[i] - 1.0
        ty = 2.0 * (y - my.points[j]) / my.widths[j] - 1.0
        k = self.degree
        px = legendre_basis(k, np.array([tx]))[:, 0]
        py = legendre_basis(k, np.array([ty]))[:, 0]
        return float(px @ self.coeffs[i, j] @ py)

    def trace_x(self, i: int, side: str) -> np.ndarray:
        """Tangential Legendre coefficients (ny, k+1) of the trace on the
        vertical line x = x_i; side 'left' uses cell i-1, 'right' cell i."""
        em, ep = end_vals(self.degree)
        if side == "left":
            if i < 1 or i > self.mesh.mesh_x.ncells:
                raise IndexError(f"no cell left of line x_{i}")
            return np.einsum("jmn,m->jn", self.coeffs[i - 1], ep)
        if side == "right":
            if i < 0 or i >= self.mesh.mesh_x.ncells:
                raise IndexError(f"no cell right of line x_{i}")
            return np.einsum("jmn,m->jn", self.coeffs[i], em)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def trace_y(self, j: int, side: str) -> np.ndarray:
        """Tangential coefficients (nx, k+1) on the horizontal line y = y_j."""
        em, ep = end_vals(self.degree)
        if side == "left":
            if j < 1 or j > self.mesh.mesh_y.ncells:
                raise IndexError(f"no cell below line y_{j}")
            return np.einsum("imn,n->im", self.coeffs[:, j - 1], ep)
        if side == "right":
            if j < 0 or j >= self.mesh.mesh_y.ncells:
                raise IndexError(f"no cell above line y_{j}")
            return np.einsum("imn,n->im", self.coeffs[:, j], em)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def jump_x(self, i: int) -> np.ndarray:
        """Jump coefficients across x = x_i with the 1D interface convention."""
        nx = self.mesh.mesh_x.ncells
        if i == 0:
            return -self.trace_x(0, "right")
        if i == nx:
            return self.trace_x(nx, "left")
        return self.trace_x(i, "left") - self.trace_x(i, "right")

    def jump_y(self, j: int) -> np.ndarray:
        ny = self.mesh.mesh_y.ncells
        if j == 0:
            return -self.trace_y(0, "right")
        if j == ny:
            return self.trace_y(ny, "left")
        return self.trace_y(j, "left") - self.trace_y(j, "right")
