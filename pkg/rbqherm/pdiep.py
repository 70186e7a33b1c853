"""
Module for the partially described inverse eigenvalue problem: find a complex
Hermitian M with M u_i = lambda_i u_i for k prescribed real eigenvalues and
complex eigenvectors.

The problem is the single complex equation A X B = E with A = I_n, X = M,
B = Phi and E = Phi Lambda, solved with the complex Hermitian solver.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import fileio
from .common import FormatError, PreconditionError, ShapeError, as_complex_matrix
from .linalg import default_rank_tol, numerical_rank, svd
from .model import RbqMatrix, is_hermitian
from .rr_solver import RbmeProblem, assemble_design, solve_family, solve_min_norm

logger = logging.getLogger(__name__)

# Half a unit in the fourth decimal, the precision of printed eigenpairs
PRINT_TOL = 5e-5


@dataclass(frozen=True, eq=False)
class EigenpairData:
    """
    Prescribed eigenvalues `lambdas` (k reals) and eigenvectors, the columns
    of the complex n x k matrix `phi`.
    """

    lambdas: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        lambdas = np.asarray(self.lambdas)
        if np.iscomplexobj(lambdas):
            if np.any(lambdas.imag != 0):
                raise PreconditionError("eigenvalues must be real")
            lambdas = lambdas.real
        lambdas = np.array(lambdas, dtype=np.float64).reshape(-1)
        phi = as_complex_matrix(self.phi, "phi")

        if phi.shape[1] != lambdas.size:
            raise ShapeError(
                f"{lambdas.size} eigenvalues given for {phi.shape[1]} eigenvectors"
            )
        if lambdas.size == 0:
            raise PreconditionError("at least one eigenpair is required")
        if lambdas.size > phi.shape[0]:
            raise PreconditionError(
                f"{lambdas.size} eigenpairs prescribed for a matrix of order {phi.shape[0]}"
            )
        if not np.all(np.isfinite(lambdas)):
            raise PreconditionError("eigenvalues have non-finite entries")
        zero = [idx + 1 for idx in range(phi.shape[1]) if not np.any(phi[:, idx])]
        if zero:
            raise PreconditionError(f"eigenvector columns {zero} are zero")

        lambdas.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "phi", phi)

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @property
    def k(self) -> int:
        return self.phi.shape[1]

    def subset(self, indices: Sequence[int]) -> "EigenpairData":
        """
        Select eigenpairs by 1-based index.
        """

        idx = [i - 1 for i in indices]
        if any(i < 0 or i >= self.k for i in idx):
            raise ShapeError(f"eigenpair indices {list(indices)} out of range 1..{self.k}")
        return EigenpairData(self.lambdas[idx], self.phi[:, idx])

    def polished(self) -> "EigenpairData":
        """
        Re-orthogonalize eigenvectors given to a few decimals.

        Each vector keeps its phase and its norm; only the small
        non-orthogonal part left by rounding is removed.
        """

        norms = np.linalg.norm(self.phi, axis=0)
        Q, R = np.linalg.qr(self.phi)
        diag = np.diag(R)
        phases = diag / np.abs(diag)
        return EigenpairData(self.lambdas, Q * phases * norms)

    @classmethod
    def from_dict(cls, data: Dict, where: str = "") -> "EigenpairData":
        n = fileio.require(data, "n", where)
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise FormatError(f"{fileio.field_path(where, 'n')}: expected a positive integer")

        lambdas = fileio.require(data, "lambdas", where)
        if not isinstance(lambdas, list):
            raise FormatError(f"{fileio.field_path(where, 'lambdas')}: expected a list of reals")
        try:
            lambdas = np.array(lambdas, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{fileio.field_path(where, 'lambdas')}: {exc}") from exc

        k = lambdas.size
        re = fileio.read_plane(fileio.require(data, "phi_re", where), n, k, fileio.field_path(where, "phi_re"))
        im = np.zeros_like(re)
        if "phi_im" in data:
            im = fileio.read_plane(data["phi_im"], n, k, fileio.field_path(where, "phi_im"))

        return cls(lambdas, re + 1j * im)

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "lambdas": self.lambdas.tolist(),
            "phi_re": self.phi.real.reshape(-1).tolist(),
            "phi_im": self.phi.imag.reshape(-1).tolist(),
        }


@dataclass(frozen=True)
class PdiepReport:
    matrix: np.ndarray
    residuals: np.ndarray
    solvable: bool
    rank: int

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))

    def to_dict(self) -> Dict:
        return {
            "matrix": fileio.matrix_to_dict(RbqMatrix.from_complex(self.matrix), complex_only=True),
            "residuals": self.residuals.tolist(),
            "solvable": self.solvable,
            "rank": self.rank,
        }


def _problem(data: EigenpairData) -> RbmeProblem:
    return RbmeProblem.from_complex(
        np.eye(data.n), data.phi, data.phi * data.lambdas
    )


def eigen_residuals(M: np.ndarray, data: EigenpairData) -> np.ndarray:
    """
    ||M u_i - lambda_i u_i||_2 for every prescribed pair.
    """

    return np.linalg.norm(M @ data.phi - data.phi * data.lambdas, axis=0)


def check_solvable(data: EigenpairData, tol: Optional[float] = None) -> bool:
    """
    Decide solvability by comparing rank(N) and rank([N, t]) under one
    threshold, by default max(dims) * eps * sigma_max([N, t]).
    """

    design = assemble_design(_problem(data))
    augmented = np.hstack([design.coeff, design.rhs[:, None]])
    if tol is None:
        sigma = svd(augmented, compute_uv=False)
        tol = default_rank_tol(augmented.shape, float(sigma[0]))

    return numerical_rank(design.coeff, tol) == numerical_rank(augmented, tol)


def reconstruct(
    data: EigenpairData,
    y=None,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> PdiepReport:
    """
    Build a Hermitian matrix having the prescribed eigenpairs.

    Parameters
    ----------
    data : EigenpairData
        The prescribed pairs.
    y : array_like, optional
        Real vector of length n^2 selecting a member of the solution family;
        the least-norm member when omitted.

    Returns
    -------
    PdiepReport
        The matrix, the residual of each pair, the solvability decision and
        the rank of the design.
    """

    problem = _problem(data)
    if y is None:
        report = solve_min_norm(problem, rank_tol, consistency_tol)
    else:
        report = solve_family(problem, y, rank_tol, consistency_tol)

    M = report.solution.to_complex()
    residuals = eigen_residuals(M, data)
    if not is_hermitian(report.solution):
        logger.warning("Reconstructed matrix failed the Hermitian check")
    logger.info(
        "Reconstructed order-%d matrix from %d pairs, max residual %.3e",
        data.n,
        data.k,
        float(np.max(residuals)),
    )

    # the range test of the solve decides rank(N) = rank([N, t])
    return PdiepReport(M, residuals, report.consistent, report.rank)


def derive_eigenpairs(M) -> EigenpairData:
    """
    Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending.

    Each eigenvector is scaled by a unit phase so that its last entry is
    real and non-negative.
    """

    M = as_complex_matrix(M, "M")
    lambdas, vectors = np.linalg.eigh(M)
    last = vectors[-1, :]
    phases = np.ones_like(last)
    nonzero = np.abs(last) > np.finfo(np.float64).eps
    phases[nonzero] = np.conj(last[nonzero]) / np.abs(last[nonzero])

    return EigenpairData(lambdas, vectors * phases)


def match_printed(
    derived: EigenpairData, printed: EigenpairData
) -> Tuple[EigenpairData, float]:
    """
    Align the signs of `derived` eigenvectors with `printed` ones.

    Returns the aligned pairs and the largest absolute deviation from the
    printed eigenvalues and from the real and imaginary parts of the printed
    eigenvector entries.
    """

    if derived.phi.shape != printed.phi.shape:
        raise ShapeError(
            f"derived pairs are {derived.phi.shape}, printed pairs are {printed.phi.shape}"
        )

    aligned = derived.phi.copy()
    for col in range(derived.k):
        plus = np.max(np.abs(aligned[:, col] - printed.phi[:, col]))
        minus = np.max(np.abs(aligned[:, col] + printed.phi[:, col]))
        if minus < plus:
            aligned[:, col] = -aligned[:, col]

    # real and imaginary parts are rounded separately
    diff = aligned - printed.phi
    deviation = max(
        float(np.max(np.abs(derived.lambdas - printed.lambdas))),
        float(np.max(np.abs(diff.real))),
        float(np.max(np.abs(diff.imag))),
    )
    if deviation > PRINT_TOL:
        logger.warning("Derived eigenpairs deviate from printed ones by %.2e", deviation)

    return EigenpairData(derived.lambdas, aligned), deviation
