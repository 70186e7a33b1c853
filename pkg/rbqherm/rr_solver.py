"""
Module implementing the real-representation solver for Hermitian least
squares solutions of (AXB, CXD) = (E, F).

The unknown Hermitian X is parameterized by its packed free entries
[vec_s(X0); vec_a(X1); vec_a(X2); vec_a(X3)] (2n^2 - n reals). The design
matrix mapping those entries to [vec(E_r^R); vec(F_r^R)] is assembled one
batch of columns at a time, so the dense Kronecker product is never formed.
Complex problems (X2 = X3 = 0 throughout) use the two-block analogues and
have n^2 free entries.
"""

import enum
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from . import fileio
from .common import (
    COLUMN_BATCH,
    FormatError,
    PreconditionError,
    ShapeError,
    as_complex_matrix,
)
from .linalg import ls_family, numerical_rank, sample_family
from .model import (
    RbqMatrix,
    complex_real_rep,
    complex_real_rep_row,
    frobenius,
    mat_mul,
    real_rep,
    real_rep_row,
)
from .structure import (
    StructureMatrix,
    build_j,
    build_j_tilde,
    build_q,
    build_q_tilde,
    hermitian_dim,
    unpack_complex_hermitian,
    unpack_hermitian,
    vec,
)

logger = logging.getLogger(__name__)

FIELDS = ("rbq", "complex")


class Method(enum.Enum):
    RR = "RR"
    CR = "CR"


@dataclass(frozen=True)
class RbmeProblem:
    """
    The matrix equation pair (AXB, CXD) = (E, F), or the single equation
    AXB = E when C, D and F are omitted.

    With `field="complex"` every operand must have zero j and k planes and
    the unknown is sought among complex Hermitian matrices.
    """

    A: RbqMatrix
    B: RbqMatrix
    E: RbqMatrix
    C: Optional[RbqMatrix] = None
    D: Optional[RbqMatrix] = None
    F: Optional[RbqMatrix] = None
    field: str = "rbq"

    def __post_init__(self):
        if self.field not in FIELDS:
            raise PreconditionError(f"unknown field `{self.field}`, expected one of {FIELDS}")

        second = (self.C, self.D, self.F)
        if any(op is None for op in second) and any(op is not None for op in second):
            raise PreconditionError("C, D and F must be given together or omitted together")

        self._check_equation("A", self.A, "B", self.B, "E", self.E)
        if self.C is not None:
            if self.C.shape != self.A.shape:
                raise ShapeError(f"A is {self.A.rows}x{self.A.cols} but C is {self.C.rows}x{self.C.cols}")
            if self.D.shape != self.B.shape:
                raise ShapeError(f"B is {self.B.rows}x{self.B.cols} but D is {self.D.rows}x{self.D.cols}")
            self._check_equation("C", self.C, "D", self.D, "F", self.F)

        if self.field == "complex":
            for name, op in self.operands():
                if not op.is_complex:
                    raise PreconditionError(f"{name} has nonzero j or k planes in a complex problem")

    @staticmethod
    def _check_equation(lname, left, rname, right, tname, target):
        if left.cols != right.rows:
            raise ShapeError(
                f"{lname} is {left.rows}x{left.cols} but {rname} is {right.rows}x{right.cols}"
            )
        if target.shape != (left.rows, right.cols):
            raise ShapeError(
                f"{tname} is {target.rows}x{target.cols}, expected {left.rows}x{right.cols} "
                f"from {lname} and {rname}"
            )

    @classmethod
    def from_complex(cls, A, B, E, C=None, D=None, F=None) -> "RbmeProblem":
        """
        Build a complex-field problem from complex arrays.
        """

        def embed(value, name):
            if value is None:
                return None
            return RbqMatrix.from_complex(as_complex_matrix(value, name))

        return cls(
            embed(A, "A"),
            embed(B, "B"),
            embed(E, "E"),
            embed(C, "C"),
            embed(D, "D"),
            embed(F, "F"),
            field="complex",
        )

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def s(self) -> int:
        return self.B.cols

    @property
    def single(self) -> bool:
        return self.C is None

    @property
    def free_dim(self) -> int:
        return self.n * self.n if self.field == "complex" else hermitian_dim(self.n)

    def operands(self) -> List[Tuple[str, RbqMatrix]]:
        names = ("A", "B", "E") if self.single else ("A", "B", "C", "D", "E", "F")
        return [(name, getattr(self, name)) for name in names]

    def equations(self) -> List[Tuple[RbqMatrix, RbqMatrix, RbqMatrix]]:
        if self.single:
            return [(self.A, self.B, self.E)]
        return [(self.A, self.B, self.E), (self.C, self.D, self.F)]

    def residual(self, X: RbqMatrix) -> float:
        """
        (||AXB - E||_F^2 + ||CXD - F||_F^2)^(1/2), computed in RBQ arithmetic.
        """

        total = 0.0
        for left, right, target in self.equations():
            total += frobenius(mat_mul(mat_mul(left, X), right) - target) ** 2
        return float(np.sqrt(total))

    @classmethod
    def from_dict(cls, data: Dict, where: str = "") -> "RbmeProblem":
        field = data.get("field", "rbq") if isinstance(data, dict) else "rbq"
        if field not in FIELDS:
            raise FormatError(f"{fileio.field_path(where, 'field')}: unknown field `{field}`")

        ops = {}
        for name in ("A", "B", "E"):
            ops[name] = fileio.matrix_from_dict(fileio.require(data, name, where), fileio.field_path(where, name))
        present = [name for name in ("C", "D", "F") if name in data]
        if present and len(present) != 3:
            missing = sorted({"C", "D", "F"} - set(present))
            raise FormatError(f"{fileio.field_path(where, missing[0])}: missing field")
        for name in present:
            ops[name] = fileio.matrix_from_dict(data[name], fileio.field_path(where, name))

        return cls(field=field, **ops)

    def to_dict(self) -> Dict:
        data = {"field": self.field}
        for name, op in self.operands():
            data[name] = fileio.matrix_to_dict(op, complex_only=self.field == "complex")
        return data


@dataclass(frozen=True)
class DesignSystem:
    """
    The real least-squares system coeff @ packed = rhs.
    """

    coeff: np.ndarray
    rhs: np.ndarray
    n: int
    m: int
    s: int
    field: str = "rbq"

    @property
    def free_dim(self) -> int:
        return self.coeff.shape[1]


@dataclass(frozen=True)
class SolveReport:
    solution: RbqMatrix
    residual: float
    consistent: bool
    unique: bool
    rank: int
    elapsed: float
    method: Method
    field: str = "rbq"

    @property
    def elapsed_ms(self) -> float:
        return self.elapsed * 1000.0

    def to_dict(self) -> Dict:
        return {
            "solution": fileio.matrix_to_dict(self.solution, complex_only=self.field == "complex"),
            "residual": self.residual,
            "consistent": self.consistent,
            "unique": self.unique,
            "rank": self.rank,
            "elapsed_ms": self.elapsed_ms,
            "method": self.method.value,
        }


def _field_maps(field: str, n: int):
    if field == "complex":
        return complex_real_rep, complex_real_rep_row, build_j_tilde(n) @ build_q_tilde(n), 2
    return real_rep, real_rep_row, build_j(n) @ build_q(n), 4


def _equation_block(
    left: np.ndarray, right: np.ndarray, selection: StructureMatrix, size: int
) -> np.ndarray:
    """
    Compute (left kron right) @ selection column batch by column batch.

    `size` is the order of the full representation of the unknown, so a row
    r of `selection` addresses its entry (r % size, r // size).
    """

    rows = left.shape[0] * right.shape[0]
    ncols = selection.cols
    block = np.zeros((rows, ncols))
    csc = selection.matrix

    for start in range(0, ncols, COLUMN_BATCH):
        stop = min(start + COLUMN_BATCH, ncols)
        sub = csc[:, start:stop].tocoo()
        if sub.nnz == 0:
            continue

        a, b = np.divmod(sub.row, size)
        # kron(left[:, a], right[:, b]) for every nonzero at once
        terms = (left[:, a][:, None, :] * right[:, b][None, :, :]).reshape(rows, sub.nnz)
        scatter = sp.csr_matrix(
            (sub.data, (np.arange(sub.nnz), sub.col)), shape=(sub.nnz, stop - start)
        )
        block[:, start:stop] = (scatter.T @ terms.T).T

    return block


def assemble_design(problem: RbmeProblem) -> DesignSystem:
    """
    Assemble the design matrix and right-hand side of `problem`.

    For an RBQ problem the design has 8ms rows (4ms for a single equation)
    and 2n^2 - n columns; for a complex problem 4ms rows (2ms) and n^2
    columns.
    """

    rep, rep_row, selection, nblocks = _field_maps(problem.field, problem.n)
    size = nblocks * problem.n

    coeff_blocks, rhs_blocks = [], []
    for left, right, target in problem.equations():
        coeff_blocks.append(_equation_block(rep(right).T, rep_row(left), selection, size))
        rhs_blocks.append(vec(rep_row(target)))

    design = DesignSystem(
        np.vstack(coeff_blocks),
        np.concatenate(rhs_blocks),
        problem.n,
        problem.m,
        problem.s,
        problem.field,
    )
    logger.debug(
        "Assembled %s design %dx%d", problem.field, design.coeff.shape[0], design.coeff.shape[1]
    )

    return design


def _unpacker(field: str) -> Callable[[np.ndarray, int], RbqMatrix]:
    return unpack_complex_hermitian if field == "complex" else unpack_hermitian


def _solve(
    problem: RbmeProblem,
    y: Optional[np.ndarray],
    rank_tol: Optional[float],
    consistency_tol: Optional[float],
) -> SolveReport:
    if y is not None:
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if y.size != problem.free_dim:
            raise ShapeError(f"family parameter needs {problem.free_dim} entries, got {y.size}")

    start = time.perf_counter()
    design = assemble_design(problem)
    fam = ls_family(
        design.coeff, design.rhs, rank_tol, consistency_tol, with_projector=y is not None
    )
    packed = fam.particular if y is None else sample_family(fam, y)
    solution = _unpacker(problem.field)(packed, problem.n)
    elapsed = time.perf_counter() - start

    report = SolveReport(
        solution=solution,
        residual=problem.residual(solution),
        consistent=fam.consistent,
        unique=fam.rank == design.free_dim,
        rank=fam.rank,
        elapsed=elapsed,
        method=Method.RR,
        field=problem.field,
    )
    logger.info(
        "RR solve n=%d m=%d s=%d: rank %d/%d, residual %.3e, %.2f ms",
        problem.n,
        problem.m,
        problem.s,
        report.rank,
        design.free_dim,
        report.residual,
        report.elapsed_ms,
    )

    return report


def solve_min_norm(
    problem: RbmeProblem,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> SolveReport:
    """
    Return the least-norm Hermitian least-squares solution of `problem`.
    """

    return _solve(problem, None, rank_tol, consistency_tol)


def solve_family(
    problem: RbmeProblem,
    y,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> SolveReport:
    """
    Return the member of the Hermitian least-squares family selected by `y`.

    Every member shares the residual of the least-norm solution, which is
    the member for y = 0.
    """

    return _solve(problem, y, rank_tol, consistency_tol)


def check_consistency(
    problem: RbmeProblem,
    rank_tol: Optional[float] = None,
    consistency_tol: Optional[float] = None,
) -> bool:
    design = assemble_design(problem)
    return ls_family(
        design.coeff, design.rhs, rank_tol, consistency_tol, with_projector=False
    ).consistent


def check_uniqueness(problem: RbmeProblem, rank_tol: Optional[float] = None) -> bool:
    design = assemble_design(problem)
    return numerical_rank(design.coeff, rank_tol) == design.free_dim


def _complex_problem(A, B, C, D, E, F) -> RbmeProblem:
    return RbmeProblem.from_complex(A, B, E, C, D, F)


def solve_complex_min_norm(
    A, B, C, D, E, F, rank_tol: Optional[float] = None, consistency_tol: Optional[float] = None
) -> SolveReport:
    """
    Complex Hermitian least-norm least-squares solution; C, D and F may be
    None for the single equation AXB = E.
    """

    return solve_min_norm(_complex_problem(A, B, C, D, E, F), rank_tol, consistency_tol)


def solve_complex_family(
    A, B, C, D, E, F, y, rank_tol: Optional[float] = None, consistency_tol: Optional[float] = None
) -> SolveReport:
    return solve_family(_complex_problem(A, B, C, D, E, F), y, rank_tol, consistency_tol)


def check_complex_consistency(
    A, B, C, D, E, F, rank_tol: Optional[float] = None, consistency_tol: Optional[float] = None
) -> bool:
    return check_consistency(_complex_problem(A, B, C, D, E, F), rank_tol, consistency_tol)


def check_complex_uniqueness(A, B, C, D, E, F, rank_tol: Optional[float] = None) -> bool:
    return check_uniqueness(_complex_problem(A, B, C, D, E, F), rank_tol)
