"""Dense linear algebra used for slab systems.

Factorization is delegated to LAPACK (``getrf``) through scipy; the
singularity policy, the permutation bookkeeping and a small pure-numpy
reference factorization live here.
"""
from __future__ import annotations

from dataclasses import dataclass

import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, SingularMatrix

PIVOT_RTOL = 1e-14


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major dense matrix with finite entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("matrix entries must be finite")

    @classmethod
    def from_array(cls, a) -> "DenseMatrix":
        a = np.atleast_2d(np.asarray(a, dtype=float))
        return cls(a.shape[0], a.shape[1], tuple(a.ravel()))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(self.rows, self.cols)


def as_array(a) -> np.ndarray:
    if isinstance(a, DenseMatrix):
        return a.to_array()
    return np.asarray(a, dtype=float)


@dataclass(frozen=True)
class LuFactors:
    """Combined LU storage (unit lower part implicit) and row permutation.

    ``perm[k]`` is the original row placed at position ``k``, so that
    ``A[perm] == L @ U``.
    """

    lu: np.ndarray
    perm: np.ndarray
    norm_inf: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.n:
            raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {self.n}")
        y = scipy.linalg.solve_triangular(self.lu, b[self.perm], lower=True,
                                          unit_diagonal=True, check_finite=False)
        return scipy.linalg.solve_triangular(self.lu, y, lower=False, check_finite=False)


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")


def _check_pivots(lu: np.ndarray, norm_inf: float) -> None:
    piv = np.abs(np.diag(lu))
    k = int(np.argmin(piv)) if piv.size else 0
    if piv.size and not piv[k] >= PIVOT_RTOL * norm_inf:
        raise SingularMatrix(
            f"pivot {piv[k]:.3e} at step {k} below {PIVOT_RTOL:g}*||A||_inf = "
            f"{PIVOT_RTOL * norm_inf:.3e}")


def _swaps_to_perm(piv: np.ndarray) -> np.ndarray:
    perm = np.arange(piv.size)
    for i, j in enumerate(piv):
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def lu_factor(a) -> LuFactors:
    """LU factorization with partial pivoting (LAPACK getrf)."""
    a = as_array(a)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    norm_inf = float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0
    if a.size == 0:
        return LuFactors(a.copy(), np.arange(0), 0.0)
    with warnings.catch_warnings():
        # the pivot policy below reports singularity itself
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    _check_pivots(lu, norm_inf)
    return LuFactors(lu, _swaps_to_perm(piv), norm_inf)


def lu_factor_reference(a) -> LuFactors:
    """Textbook right-looking Doolittle elimination in numpy.

    Slow (one rank-1 update per column); kept as an independent route for
    cross-checking the LAPACK-backed factorization on small matrices.
    """
    a = as_array(a).copy()
    _check_square(a)
    n = a.shape[0]
    norm_inf = float(np.max(np.sum(np.abs(a), axis=1))) if n else 0.0
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if abs(a[k, k]) < PIVOT_RTOL * norm_inf or a[k, k] == 0.0:
            raise SingularMatrix(f"zero pivot at step {k}")
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return LuFactors(a, perm, norm_inf)


def lu_solve(a, b) -> np.ndarray:
    """Solve ``A x = b``; ``b`` may be a vector or a matrix of right-hand sides."""
    a = as_array(a)
    b = np.asarray(b, dtype=float)
    _check_square(a)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    return lu_factor(a).solve(b)


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``result[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_array(a), as_array(b))
