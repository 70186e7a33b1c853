"""
Module with the dense real linear-algebra kernel.

All solver paths share `pinv`, so rank decisions are made in a single place.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .common import CONSISTENCY_TOL, NumericalError, PreconditionError, ShapeError, SizeError, as_real_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PinvResult:
    pinv: np.ndarray
    rank: int
    singular_values: np.ndarray
    tol_used: float


@dataclass(frozen=True)
class LsSolutionFamily:
    """
    The least-squares solutions x = particular + projector @ y of A x = b.

    `projector` is None when the family was built for the minimum-norm
    member only.
    """

    particular: np.ndarray
    projector: Optional[np.ndarray]
    consistent: bool
    residual_norm: float
    rank: int


def kron(A, B) -> np.ndarray:
    """
    Kronecker product, raising `SizeError` when it cannot be allocated.
    """

    A = np.asarray(A)
    B = np.asarray(B)
    try:
        return np.kron(A, B)
    except MemoryError as exc:
        raise SizeError(
            f"cannot allocate kron of {A.shape} and {B.shape}"
        ) from exc


def svd(A: np.ndarray, compute_uv: bool = True):
    """
    Thin SVD via `gesdd`, retried with `gesvd` before giving up.
    """

    attempts = []
    for driver in ("gesdd", "gesvd"):
        try:
            return scipy.linalg.svd(
                A,
                full_matrices=False,
                compute_uv=compute_uv,
                lapack_driver=driver,
                check_finite=False,
            )
        except np.linalg.LinAlgError as exc:
            attempts.append(f"{driver}: {exc}")
            logger.debug("SVD driver %s failed on %s matrix", driver, A.shape)

    raise NumericalError(
        f"SVD did not converge for a {A.shape[0]}x{A.shape[1]} matrix "
        f"({'; '.join(attempts)})"
    )


def default_rank_tol(shape, sigma_max: float) -> float:
    return max(shape) * np.finfo(np.float64).eps * sigma_max


def pinv(A, tol: Optional[float] = None) -> PinvResult:
    """
    Moore-Penrose pseudoinverse with a hard singular-value cut.

    Parameters
    ----------
    A : array_like
        Real m x n matrix.
    tol : float, optional
        Absolute threshold; singular values at or below it are dropped. The
        default is max(m, n) * eps * sigma_max.

    Returns
    -------
    PinvResult
        The n x m pseudoinverse, the numerical rank, the singular values and
        the threshold actually applied.
    """

    A = as_real_matrix(A, "A")
    m, n = A.shape
    if A.size == 0:
        return PinvResult(np.zeros((n, m)), 0, np.zeros(0), 0.0)

    U, sigma, Vt = svd(A)
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    if tol is None:
        tol = default_rank_tol(A.shape, sigma_max)

    keep = sigma > tol
    rank = int(np.count_nonzero(keep))
    # (V[:, keep] / sigma[keep]) @ U[:, keep].T without forming diag(1/sigma)
    result = (Vt[keep].T / sigma[keep]) @ U[:, keep].T

    return PinvResult(result, rank, sigma, float(tol))


def numerical_rank(A, tol: Optional[float] = None) -> int:
    A = as_real_matrix(A, "A")
    if A.size == 0:
        return 0
    sigma = svd(A, compute_uv=False)
    if tol is None:
        tol = default_rank_tol(A.shape, float(sigma[0]))

    return int(np.count_nonzero(sigma > tol))


def ls_family(
    A,
    b,
    tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
    with_projector: bool = True,
) -> LsSolutionFamily:
    """
    Solve min ||A x - b|| in the least-norm sense and describe all minimizers.

    The system is consistent when ||A A^+ b - b|| <= consistency_tol * max(1, ||b||).
    """

    A = as_real_matrix(A, "A")
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if A.shape[0] != b.size:
        raise ShapeError(
            f"design has {A.shape[0]} rows but right-hand side has {b.size} entries"
        )
    if consistency_tol is None:
        consistency_tol = CONSISTENCY_TOL

    p = pinv(A, tol)
    particular = p.pinv @ b
    residual = float(np.linalg.norm(A @ particular - b))
    consistent = residual <= consistency_tol * max(1.0, float(np.linalg.norm(b)))

    projector = None
    if with_projector:
        projector = np.eye(A.shape[1]) - p.pinv @ A

    logger.debug(
        "least squares on %dx%d: rank %d, residual %.3e", A.shape[0], A.shape[1], p.rank, residual
    )

    return LsSolutionFamily(particular, projector, consistent, residual, p.rank)


def sample_family(fam: LsSolutionFamily, y) -> np.ndarray:
    """
    Return the family member particular + projector @ y.
    """

    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != fam.particular.size:
        raise ShapeError(
            f"family parameter needs {fam.particular.size} entries, got {y.size}"
        )
    if fam.projector is None:
        raise PreconditionError("solution family was built without its projector")

    return fam.particular + fam.projector @ y
