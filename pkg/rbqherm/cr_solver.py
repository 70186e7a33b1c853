"""
Module implementing the complex-representation (CR) baseline for the same
Hermitian problem.

A matrix is split as A = A1 + A2 j with complex A1 = X0 + X1 i and
A2 = X2 + X3 i. Since j commutes with i and j^2 = 1, the equation AXB = E
becomes the complex system h(K1 + K2 j) [vec X1; vec X2] = [vec E1; vec E2]
with h(K) = [[K1, K2], [K2, K1]]. The stacked pseudoinverse of the real and
imaginary parts is evaluated with the auxiliary H, R, Z matrices rather
than one SVD of the stacked system.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .common import (
    CONSISTENCY_TOL,
    STACKED_RANK_RTOL,
    NumericalError,
    ShapeError,
    as_real_matrix,
)
from .linalg import default_rank_tol, kron, pinv
from .model import RbqMatrix, complex_pair
from .rr_solver import Method, RbmeProblem, SolveReport
from .structure import build_k_a, build_k_s, hermitian_dim, unpack_hermitian, vec

logger = logging.getLogger(__name__)


def complex_rep(A: RbqMatrix) -> np.ndarray:
    """
    Return h(A) = [[A1, A2], [A2, A1]], a complex 2m x 2n matrix.
    """

    pair = complex_pair(A)
    return np.block([[pair.c1, pair.c2], [pair.c2, pair.c1]])


@dataclass(frozen=True)
class CrSystem:
    """
    The stacked real system [Q1; Q2] x = e of the CR method.
    """

    M: np.ndarray
    N: Optional[np.ndarray]
    U: sp.csc_matrix
    Qcr: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    e: np.ndarray

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([self.Q1, self.Q2])


@dataclass(frozen=True)
class StackedPinvParts:
    """
    Pieces of the pseudoinverse of [Q1; Q2].

    `pinv` is [Q1^+ - H^T Q2 Q1^+, H^T] and `projector` the orthogonal
    projector onto the row space of the stacked matrix.
    """

    H: np.ndarray
    Rcr: np.ndarray
    Z: np.ndarray
    q1_pinv: np.ndarray
    r_pinv: np.ndarray
    pinv: np.ndarray
    projector: np.ndarray
    rank: int


def _equation_operator(left: RbqMatrix, right: RbqMatrix) -> np.ndarray:
    # h(right^T kron left), with the Kronecker product taken over RBQ
    a = complex_pair(left)
    b = complex_pair(right)
    k1 = kron(b.c1.T, a.c1) + kron(b.c2.T, a.c2)
    k2 = kron(b.c1.T, a.c2) + kron(b.c2.T, a.c1)
    return np.block([[k1, k2], [k2, k1]])


def _selection(n: int) -> sp.csc_matrix:
    # U = [[K_S, i K_A, 0, 0], [0, 0, K_A, i K_A]]
    k_s = build_k_s(n).matrix.astype(np.complex128)
    k_a = build_k_a(n).matrix.astype(np.complex128)
    zero_s = sp.csc_matrix(k_s.shape, dtype=np.complex128)
    zero_a = sp.csc_matrix(k_a.shape, dtype=np.complex128)

    return sp.bmat(
        [[k_s, 1j * k_a, zero_a, zero_a], [zero_s, zero_a, k_a, 1j * k_a]], format="csc"
    )


def build_cr_system(problem: RbmeProblem) -> CrSystem:
    """
    Assemble M, N, U and the real stacked system for `problem`.

    Problems are always treated over RBQ here; a complex-field problem is
    solved among RBQ Hermitian matrices.
    """

    operators, targets = [], []
    for left, right, target in problem.equations():
        operators.append(_equation_operator(left, right))
        pair = complex_pair(target)
        targets.extend([vec(pair.c1), vec(pair.c2)])

    U = _selection(problem.n)
    stacked = np.vstack(operators)
    # dense @ sparse keeps the result dense
    Qcr = (U.T @ stacked.T).T
    rhs = np.concatenate(targets)

    return CrSystem(
        M=operators[0],
        N=operators[1] if len(operators) > 1 else None,
        U=U,
        Qcr=Qcr,
        Q1=np.ascontiguousarray(Qcr.real),
        Q2=np.ascontiguousarray(Qcr.imag),
        e=np.concatenate([rhs.real, rhs.imag]),
    )


def stacked_pinv(Q1, Q2, tol: Optional[float] = None) -> StackedPinvParts:
    """
    Pseudoinverse of [Q1; Q2] from the pseudoinverses of Q1 and of
    R = (I - Q1^+ Q1) Q2^T.

    Parameters
    ----------
    Q1, Q2 : array_like
        Real matrices of equal shape.
    tol : float, optional
        Absolute singular-value cut for both pseudoinverses. By default Q1 is
        cut at max(dims) * eps * scale and R at STACKED_RANK_RTOL * scale,
        where scale is the larger spectral norm of Q1 and Q2.

    Raises
    ------
    NumericalError
        If the positive definite system defining Z cannot be factored.
    """

    Q1 = as_real_matrix(Q1, "Q1")
    Q2 = as_real_matrix(Q2, "Q2")
    if Q1.shape != Q2.shape:
        raise ShapeError(f"Q1 is {Q1.shape[0]}x{Q1.shape[1]} but Q2 is {Q2.shape[0]}x{Q2.shape[1]}")
    rows, cols = Q1.shape

    scale = max(np.linalg.norm(Q1, 2) if Q1.size else 0.0, np.linalg.norm(Q2, 2) if Q2.size else 0.0)
    q1_tol = default_rank_tol(Q1.shape, scale) if tol is None else tol
    r_tol = STACKED_RANK_RTOL * scale if tol is None else tol

    q1 = pinv(Q1, q1_tol)
    q1p = q1.pinv
    Rcr = (np.eye(cols) - q1p @ Q1) @ Q2.T
    r = pinv(Rcr, r_tol)
    rp = r.pinv

    eye_rows = np.eye(rows)
    not_r = eye_rows - rp @ Rcr
    q2q1p = Q2 @ q1p
    gram = q2q1p @ q2q1p.T
    defining = eye_rows + not_r @ gram @ not_r
    defining = 0.5 * (defining + defining.T)
    try:
        factor = scipy.linalg.cho_factor(defining, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Z-system of order {rows} is not positive definite ({exc})") from exc
    Z = scipy.linalg.cho_solve(factor, eye_rows, check_finite=False)

    H = rp + not_r @ Z @ q2q1p @ q1p.T @ (np.eye(cols) - Q2.T @ rp)
    stacked = np.hstack([q1p - H.T @ q2q1p, H.T])
    projector = q1p @ Q1 + Rcr @ rp
    logger.debug("Stacked pseudoinverse: rank(Q1)=%d, rank(R)=%d", q1.rank, r.rank)

    return StackedPinvParts(
        H=H,
        Rcr=Rcr,
        Z=Z,
        q1_pinv=q1p,
        r_pinv=rp,
        pinv=stacked,
        projector=projector,
        rank=q1.rank + r.rank,
    )


def cr_solve_hermitian(
    problem: RbmeProblem,
    y=None,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> SolveReport:
    """
    Solve `problem` with the CR method; `y` selects a member of the solution
    family, the least-norm member when absent.

    The packed unknown [vec_s(Re X1); vec_a(Im X1); vec_a(Re X2); vec_a(Im X2)]
    coincides with the real-representation packing of X0, X1, X2, X3.
    """

    free_dim = hermitian_dim(problem.n)
    if y is not None:
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if y.size != free_dim:
            raise ShapeError(f"family parameter needs {free_dim} entries, got {y.size}")
    if consistency_tol is None:
        consistency_tol = CONSISTENCY_TOL

    start = time.perf_counter()
    system = build_cr_system(problem)
    parts = stacked_pinv(system.Q1, system.Q2, rank_tol)
    packed = parts.pinv @ system.e
    if y is not None:
        packed = packed + y - parts.projector @ y
    solution = unpack_hermitian(packed, problem.n)
    elapsed = time.perf_counter() - start

    x_min = parts.pinv @ system.e if y is not None else packed
    defect = float(np.linalg.norm(system.stacked @ x_min - system.e))
    report = SolveReport(
        solution=solution,
        residual=problem.residual(solution),
        consistent=defect <= consistency_tol * max(1.0, float(np.linalg.norm(system.e))),
        unique=parts.rank == free_dim,
        rank=parts.rank,
        elapsed=elapsed,
        method=Method.CR,
        field="rbq",
    )
    logger.info(
        "CR solve n=%d m=%d s=%d: rank %d/%d, residual %.3e, %.2f ms",
        problem.n,
        problem.m,
        problem.s,
        report.rank,
        free_dim,
        report.residual,
        report.elapsed_ms,
    )

    return report


def cr_check_consistency(
    problem: RbmeProblem,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> bool:
    if consistency_tol is None:
        consistency_tol = CONSISTENCY_TOL

    system = build_cr_system(problem)
    parts = stacked_pinv(system.Q1, system.Q2, rank_tol)
    defect = np.linalg.norm(system.stacked @ (parts.pinv @ system.e) - system.e)

    return bool(defect <= consistency_tol * max(1.0, float(np.linalg.norm(system.e))))


def cr_check_uniqueness(problem: RbmeProblem, rank_tol: Optional[float] = None) -> bool:
    system = build_cr_system(problem)
    return stacked_pinv(system.Q1, system.Q2, rank_tol).rank == hermitian_dim(problem.n)
