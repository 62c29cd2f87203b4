"""Compressed-sparse-row storage and direct solution of the assembled systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = [
    "SparseMatrix",
    "SparseSystem",
    "SingularSystemError",
    "from_coo",
    "matvec",
    "lu_solve",
    "residual_inf",
]

RESIDUAL_TOL = 1e-10


class SingularSystemError(RuntimeError):
    """Raised when LU factorization hits a singular pivot."""


@dataclass(eq=False)
class SparseMatrix:
    """Square CSR matrix: row offsets, sorted unique column indices, values."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.data, self.indices, self.indptr), shape=(self.n, self.n))


@dataclass(eq=False)
class SparseSystem:
    """Assembled linear system plus a description of the unknown ordering."""

    matrix: SparseMatrix
    rhs: np.ndarray
    ordering: str


def from_coo(n: int, rows, cols, vals) -> SparseMatrix:
    """Build CSR from triplets; duplicate entries are summed."""
    coo = sp.coo_matrix(
        (np.asarray(vals, dtype=float), (np.asarray(rows), np.asarray(cols))),
        shape=(n, n),
    )
    csr = coo.tocsr()
    csr.sum_duplicates()
    csr.sort_indices()
    if not np.all(np.isfinite(csr.data)):
        raise ValueError("matrix contains non-finite entries")
    return SparseMatrix(n=n, indptr=csr.indptr, indices=csr.indices, data=csr.data)


def matvec(A: SparseMatrix, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.n,):
        raise ValueError(f"vector has shape {x.shape}, expected ({A.n},)")
    return A.to_scipy() @ x


def residual_inf(A: SparseMatrix, x: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.abs(matvec(A, x) - rhs).max(initial=0.0))


def lu_solve(A: SparseMatrix, rhs: np.ndarray) -> np.ndarray:
    """Direct sparse LU solve with partial pivoting.

    Performs one step of iterative refinement if the residual misses
    RESIDUAL_TOL * max(1, |rhs|_inf); raises SingularSystemError on a
    singular pivot.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (A.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({A.n},)")
    if not np.all(np.isfinite(rhs)):
        raise ValueError("rhs contains non-finite entries")
    try:
        factor = spla.splu(A.to_scipy().tocsc())
    except RuntimeError as exc:  # SuperLU reports the failing pivot index
        raise SingularSystemError(f"sparse LU factorization failed: {exc}") from exc
    x = factor.solve(rhs)
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("solver produced non-finite values")
    tol = RESIDUAL_TOL * max(1.0, float(np.abs(rhs).max(initial=0.0)))
    if residual_inf(A, x, rhs) > tol:
        x = x + factor.solve(rhs - matvec(A, x))
    return x
