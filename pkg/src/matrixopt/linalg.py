"""Dense linear-algebra substrate shared by every solver.

All matrices are plain two-dimensional ``float64`` numpy arrays; the
:func:`as_matrix` helper enforces that carrier contract (finite entries,
explicit shape) at module boundaries.  Operations are pure functions of
their inputs.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .errors import (
    CapacityError,
    DimensionError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

# Largest entry count a Kronecker product may produce (4096 x 4096 output).
DEFAULT_KRON_CAP = 4096 * 4096

# Relative pivot threshold below which LU declares the matrix singular.
LU_PIVOT_RTOL = 1e-14

# Default relative singular-value cutoff for the pseudo-inverse.
DEFAULT_RANK_TOL = 1e-12


def as_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``obj`` to a 2-D float64 array with finite entries."""
    m = np.asarray(obj, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def frobenius_norm(m: np.ndarray) -> float:
    """Frobenius norm sqrt(sum of squared entries)."""
    return float(np.linalg.norm(m, "fro"))


def trace_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Trace inner product tr(a^T b) = sum_ij a_ij * b_ij."""
    if a.shape != b.shape:
        raise DimensionError(f"trace_inner shapes differ: {a.shape} vs {b.shape}")
    return float(np.vdot(a, b))


def lu_solve(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a @ X = rhs by LU with partial pivoting.

    Raises :class:`SingularMatrixError` when any pivot magnitude falls
    below ``LU_PIVOT_RTOL`` times the largest entry magnitude of ``a``.
    """
    a = np.asarray(a, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"lu_solve needs a square matrix, got {a.shape}")
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(
            f"rhs rows {rhs.shape[0]} do not match system order {a.shape[0]}"
        )
    with warnings.catch_warnings():
        # exact singularity is detected below and raised as our own error
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    scale = np.max(np.abs(a))
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or np.min(pivots) < LU_PIVOT_RTOL * scale:
        raise SingularMatrixError("numerically singular pivot in LU factorization")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def cholesky_solve(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a @ X = rhs for symmetric positive definite ``a`` via Cholesky.

    Raises :class:`NotPositiveDefiniteError` on a non-positive pivot, in
    which case the caller may fall back to :func:`lu_solve`.
    """
    a = np.asarray(a, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"cholesky_solve needs a square matrix, got {a.shape}")
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(
            f"rhs rows {rhs.shape[0]} do not match system order {a.shape[0]}"
        )
    try:
        c, low = scipy.linalg.cho_factor(a, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    return scipy.linalg.cho_solve((c, low), rhs, check_finite=False)


def spd_factor(a: np.ndarray):
    """Cholesky-factor a symmetric positive definite matrix for reuse.

    Returns an opaque factor object accepted by :func:`spd_solve`.
    """
    try:
        return scipy.linalg.cho_factor(
            np.asarray(a, dtype=np.float64), check_finite=False
        )
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def spd_solve(factor, rhs: np.ndarray) -> np.ndarray:
    """Solve against a factor produced by :func:`spd_factor`."""
    return scipy.linalg.cho_solve(factor, rhs, check_finite=False)


def pseudo_inverse(a: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse via SVD.

    Singular values below ``rank_tol * sigma_max`` are truncated.  The
    zero matrix maps to the zero matrix of transposed shape.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    a = np.asarray(a, dtype=np.float64)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]))
    keep = s > rank_tol * s[0]
    s_inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    return (vt.T * s_inv) @ u.T


def kron(a: np.ndarray, b: np.ndarray, max_entries: int | None = None) -> np.ndarray:
    """Kronecker product with an output-size guard.

    Raises :class:`CapacityError` when the output would exceed
    ``max_entries`` (default :data:`DEFAULT_KRON_CAP`) entries; the dense
    product grows quartically, so failing loudly beats thrashing memory.
    """
    cap = DEFAULT_KRON_CAP if max_entries is None else max_entries
    out_rows = a.shape[0] * b.shape[0]
    out_cols = a.shape[1] * b.shape[1]
    if out_rows * out_cols > cap:
        raise CapacityError(
            f"kron output {out_rows}x{out_cols} exceeds cap of {cap} entries"
        )
    return np.kron(a, b)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking operator: columns of ``m`` concatenated into one column.

    Storage is row-major throughout the package; the column-major order
    here is what the Kronecker identity vec(AXB) = (B^T kron A) vec(X)
    assumes, so the conversion is always explicit.
    """
    m = np.asarray(m, dtype=np.float64)
    return m.reshape(-1, 1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a column vector into rows x cols."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (rows * cols, 1):
        raise DimensionError(
            f"unvec expects shape ({rows * cols}, 1), got {v.shape}"
        )
    return v.reshape(rows, cols, order="F").copy()


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Average away floating-point asymmetry: (m + m^T) / 2."""
    return 0.5 * (m + m.T)
