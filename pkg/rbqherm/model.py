"""
Module holding the classes for reduced biquaternion scalars and matrices.

A reduced biquaternion a = a0 + a1 i + a2 j + a3 k multiplies commutatively,
with i^2 = k^2 = -1, j^2 = 1, ij = ji = k, jk = kj = i and ki = ik = -j.
Matrices are stored as four real component planes (X0, X1, X2, X3).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .common import (
    HERMITIAN_TOL,
    ShapeError,
    as_complex_matrix,
    as_real_matrix,
    check_inner,
    scaled_tol,
)

# Block layout of the real representation A^R: entry (r, c) holds
# (component index, sign), so that the first block row is [A0, -A1, A2, -A3]
REAL_REP_PATTERN = (
    ((0, 1), (1, -1), (2, 1), (3, -1)),
    ((1, 1), (0, 1), (3, 1), (2, 1)),
    ((2, 1), (3, -1), (0, 1), (1, -1)),
    ((3, 1), (2, 1), (1, 1), (0, 1)),
)

# Same for the complex subfield, A~^R = [[A0, -A1], [A1, A0]]
COMPLEX_REP_PATTERN = (
    ((0, 1), (1, -1)),
    ((1, 1), (0, 1)),
)


def _product(a, b):
    # Components of the commutative product; works for floats and for a float
    # tuple against array planes
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 + a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 + a3 * b2,
        a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1,
        a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
    )


class RbqScalar:
    """
    A reduced biquaternion scalar a0 + a1 i + a2 j + a3 k.
    """

    __slots__ = ("a0", "a1", "a2", "a3")

    def __init__(self, a0: float = 0.0, a1: float = 0.0, a2: float = 0.0, a3: float = 0.0):
        object.__setattr__(self, "a0", float(a0))
        object.__setattr__(self, "a1", float(a1))
        object.__setattr__(self, "a2", float(a2))
        object.__setattr__(self, "a3", float(a3))

    def __setattr__(self, name, value):
        raise AttributeError("RbqScalar is immutable")

    @property
    def components(self) -> Tuple[float, float, float, float]:
        return (self.a0, self.a1, self.a2, self.a3)

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.components)))

    def __add__(self, other: "RbqScalar") -> "RbqScalar":
        return RbqScalar(*[x + y for x, y in zip(self.components, other.components)])

    def __sub__(self, other: "RbqScalar") -> "RbqScalar":
        return RbqScalar(*[x - y for x, y in zip(self.components, other.components)])

    def __neg__(self) -> "RbqScalar":
        return RbqScalar(*[-x for x in self.components])

    def __mul__(self, other) -> "RbqScalar":
        if isinstance(other, RbqScalar):
            return rbq_mul(self, other)
        if isinstance(other, RbqMatrix):
            return NotImplemented
        return RbqScalar(*[x * float(other) for x in self.components])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RbqScalar):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "RbqScalar(%r, %r, %r, %r)" % self.components

    def __str__(self) -> str:
        a0, a1, a2, a3 = self.components
        return f"{a0:g}{a1:+g}i{a2:+g}j{a3:+g}k"


ONE = RbqScalar(1.0)
UNIT_I = RbqScalar(0.0, 1.0)
UNIT_J = RbqScalar(0.0, 0.0, 1.0)
UNIT_K = RbqScalar(0.0, 0.0, 0.0, 1.0)


def rbq_mul(a: RbqScalar, b: RbqScalar) -> RbqScalar:
    """
    Multiply two reduced biquaternion scalars.
    """

    return RbqScalar(*_product(a.components, b.components))


class RbqMatrix:
    """
    An m x n reduced biquaternion matrix X0 + X1 i + X2 j + X3 k.

    The four real planes are copied on construction and made read-only; omitted
    planes are zero.
    """

    __slots__ = ("_planes",)

    def __init__(self, x0, x1=None, x2=None, x3=None):
        first = as_real_matrix(x0, "x0")
        planes = [first]
        for idx, plane in enumerate((x1, x2, x3), start=1):
            if plane is None:
                planes.append(np.zeros_like(first))
                continue
            plane = as_real_matrix(plane, f"x{idx}")
            if plane.shape != first.shape:
                raise ShapeError(
                    f"component x{idx} has shape {plane.shape}, "
                    f"expected {first.shape}"
                )
            planes.append(plane)

        for plane in planes:
            plane.flags.writeable = False
        object.__setattr__(self, "_planes", tuple(planes))

    def __setattr__(self, name, value):
        raise AttributeError("RbqMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RbqMatrix":
        return cls(np.zeros((rows, cols)))

    @classmethod
    def identity(cls, n: int) -> "RbqMatrix":
        return cls(np.eye(n))

    @classmethod
    def from_complex(cls, value) -> "RbqMatrix":
        """
        Embed a complex matrix X0 + X1 i (so that X2 = X3 = 0).
        """

        arr = as_complex_matrix(value)
        return cls(arr.real, arr.imag)

    @classmethod
    def from_real_rep_row(cls, row, cols: int) -> "RbqMatrix":
        """
        Rebuild a matrix from its first block row [X0, -X1, X2, -X3].
        """

        row = as_real_matrix(row, "real_rep_row")
        if row.shape[1] != 4 * cols:
            raise ShapeError(
                f"first block row has {row.shape[1]} columns, expected {4 * cols}"
            )
        planes = [None] * 4
        for block, (comp, sign) in enumerate(REAL_REP_PATTERN[0]):
            planes[comp] = sign * row[:, block * cols : (block + 1) * cols]

        return cls(*planes)

    @property
    def components(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self._planes

    @property
    def shape(self) -> Tuple[int, int]:
        return self._planes[0].shape

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def is_complex(self) -> bool:
        return not (np.any(self._planes[2]) or np.any(self._planes[3]))

    def to_complex(self) -> np.ndarray:
        """
        Return X0 + X1 i as a complex array; X2 and X3 are ignored.
        """

        return self._planes[0] + 1j * self._planes[1]

    def transpose(self) -> "RbqMatrix":
        return RbqMatrix(*[plane.T for plane in self._planes])

    @property
    def T(self) -> "RbqMatrix":
        return self.transpose()

    def _check_same(self, other: "RbqMatrix"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch: {self.shape} and {other.shape}")

    def __add__(self, other: "RbqMatrix") -> "RbqMatrix":
        self._check_same(other)
        return RbqMatrix(*[x + y for x, y in zip(self._planes, other._planes)])

    def __sub__(self, other: "RbqMatrix") -> "RbqMatrix":
        self._check_same(other)
        return RbqMatrix(*[x - y for x, y in zip(self._planes, other._planes)])

    def __neg__(self) -> "RbqMatrix":
        return RbqMatrix(*[-x for x in self._planes])

    def __mul__(self, other) -> "RbqMatrix":
        # Only scaling by reals (or by an RbqScalar) is supported with `*`
        if isinstance(other, RbqScalar):
            return scalar_mul(other, self)
        return RbqMatrix(*[x * float(other) for x in self._planes])

    __rmul__ = __mul__

    def __matmul__(self, other: "RbqMatrix") -> "RbqMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RbqMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(x, y) for x, y in zip(self._planes, other._planes)
        )

    def __hash__(self):
        return hash((self.shape, tuple(plane.tobytes() for plane in self._planes)))

    def __repr__(self) -> str:
        return f"RbqMatrix(rows={self.rows}, cols={self.cols})"


@dataclass(frozen=True)
class ComplexPairRep:
    """
    The pair (c1, c2) of complex matrices with A = c1 + c2 j.
    """

    c1: np.ndarray
    c2: np.ndarray


def scalar_mul(a: RbqScalar, X: RbqMatrix) -> RbqMatrix:
    """
    Multiply every entry of `X` by the scalar `a`.
    """

    return RbqMatrix(*_product(a.components, X.components))


def mat_mul(A: RbqMatrix, C: RbqMatrix) -> RbqMatrix:
    """
    Multiply two reduced biquaternion matrices from their components.
    """

    check_inner(A.shape, C.shape)
    a0, a1, a2, a3 = A.components
    c0, c1, c2, c3 = C.components

    return RbqMatrix(
        a0 @ c0 - a1 @ c1 + a2 @ c2 - a3 @ c3,
        a0 @ c1 + a1 @ c0 + a2 @ c3 + a3 @ c2,
        a0 @ c2 + a2 @ c0 - a1 @ c3 - a3 @ c1,
        a0 @ c3 + a3 @ c0 + a1 @ c2 + a2 @ c1,
    )


def real_rep(A: RbqMatrix) -> np.ndarray:
    """
    Return the 4m x 4n real representation A^R.
    """

    planes = A.components
    return np.block([[sign * planes[comp] for comp, sign in row] for row in REAL_REP_PATTERN])


def real_rep_row(A: RbqMatrix) -> np.ndarray:
    """
    Return the first block row [A0, -A1, A2, -A3] of A^R.
    """

    planes = A.components
    return np.hstack([sign * planes[comp] for comp, sign in REAL_REP_PATTERN[0]])


def complex_real_rep(A: RbqMatrix) -> np.ndarray:
    """
    Return the 2m x 2n real representation [[A0, -A1], [A1, A0]] of a complex matrix.
    """

    planes = A.components
    return np.block(
        [[sign * planes[comp] for comp, sign in row] for row in COMPLEX_REP_PATTERN]
    )


def complex_real_rep_row(A: RbqMatrix) -> np.ndarray:
    """
    Return the first block row [A0, -A1] of the complex real representation.
    """

    planes = A.components
    return np.hstack([sign * planes[comp] for comp, sign in COMPLEX_REP_PATTERN[0]])


def frobenius(A: RbqMatrix) -> float:
    return float(np.sqrt(sum(np.sum(plane * plane) for plane in A.components)))


def complex_pair(A: RbqMatrix) -> ComplexPairRep:
    """
    Split `A` as A1 + A2 j with A1 = X0 + X1 i and A2 = X2 + X3 i.
    """

    x0, x1, x2, x3 = A.components
    return ComplexPairRep(x0 + 1j * x1, x2 + 1j * x3)


def from_complex_pair(pair: ComplexPairRep) -> RbqMatrix:
    c1 = as_complex_matrix(pair.c1, "c1")
    c2 = as_complex_matrix(pair.c2, "c2")
    if c1.shape != c2.shape:
        raise ShapeError(f"complex pair shapes differ: {c1.shape} and {c2.shape}")

    return RbqMatrix(c1.real, c1.imag, c2.real, c2.imag)


def is_hermitian(X: RbqMatrix, tol: Optional[float] = None) -> bool:
    """
    Check that X0 is symmetric and X1, X2, X3 are antisymmetric.
    """

    if X.rows != X.cols:
        raise ShapeError(f"Hermitian check needs a square matrix, got {X.shape}")
    if tol is None:
        tol = HERMITIAN_TOL

    bound = scaled_tol(tol, frobenius(X))
    x0, x1, x2, x3 = X.components
    defects = [
        np.linalg.norm(x0 - x0.T),
        np.linalg.norm(x1 + x1.T),
        np.linalg.norm(x2 + x2.T),
        np.linalg.norm(x3 + x3.T),
    ]

    return all(defect <= bound for defect in defects)
