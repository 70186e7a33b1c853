"""
Module with the vectorization operators and the 0/+-1 selection matrices.

All vectorizations stack columns. Packed symmetric vectors list the lower
triangle (diagonal included) column by column; packed antisymmetric vectors
list the strict lower triangle in the same order.
"""

import functools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .common import HERMITIAN_TOL, ShapeError, StructureError, as_real_matrix, scaled_tol
from .model import COMPLEX_REP_PATTERN, REAL_REP_PATTERN, RbqMatrix


@dataclass(frozen=True)
class StructureMatrix:
    """
    A named sparse selection matrix with entries in {0, +1, -1}.
    """

    name: str
    matrix: sp.csc_matrix

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def triplets(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Return the (row, col, value) triplets, sorted by column.
        """

        coo = self.matrix.tocoo()
        order = np.lexsort((coo.row, coo.col))
        return coo.row[order], coo.col[order], coo.data[order]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def __matmul__(self, other):
        if isinstance(other, StructureMatrix):
            return StructureMatrix(f"{self.name}{other.name}", (self.matrix @ other.matrix).tocsc())
        return self.matrix @ other

    def __repr__(self) -> str:
        return f"StructureMatrix({self.name}, {self.rows}x{self.cols}, nnz={self.nnz})"


def _from_triplets(name: str, rows, cols, vals, shape) -> StructureMatrix:
    matrix = sp.coo_matrix(
        (np.asarray(vals, dtype=np.float64), (np.asarray(rows), np.asarray(cols))),
        shape=shape,
    ).tocsc()
    matrix.sum_duplicates()
    return StructureMatrix(name, matrix)


def _lower_colwise(n: int, offset: int) -> Tuple[np.ndarray, np.ndarray]:
    # (row, col) of the lower triangle enumerated column by column; the upper
    # triangle of the transpose in row-major order gives exactly that order
    cols, rows = np.triu_indices(n, offset)
    return rows, cols


def vec(X) -> np.ndarray:
    """
    Stack the columns of `X` into a single vector.
    """

    return np.asarray(X).reshape(-1, order="F")


def unvec(v, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ShapeError(f"cannot reshape a vector of length {v.size} to {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def _check_square(X: np.ndarray, name: str):
    if X.shape[0] != X.shape[1]:
        raise ShapeError(f"{name} needs a square matrix, got {X.shape}")


def vec_s(X, tol: Optional[float] = None) -> np.ndarray:
    """
    Pack a symmetric matrix into its n(n+1)/2 lower-triangle entries.
    """

    X = as_real_matrix(X)
    _check_square(X, "vec_s")
    if tol is None:
        tol = HERMITIAN_TOL
    if np.linalg.norm(X - X.T) > scaled_tol(tol, np.linalg.norm(X)):
        raise StructureError("vec_s expects a symmetric matrix")

    rows, cols = _lower_colwise(X.shape[0], 0)
    return X[rows, cols]


def unvec_s(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.size != n * (n + 1) // 2:
        raise ShapeError(f"packed symmetric vector of order {n} needs {n * (n + 1) // 2} entries, got {v.size}")

    X = np.zeros((n, n))
    rows, cols = _lower_colwise(n, 0)
    X[rows, cols] = v
    X[cols, rows] = v
    return X


def vec_a(X, tol: Optional[float] = None) -> np.ndarray:
    """
    Pack an antisymmetric matrix into its n(n-1)/2 strictly-lower entries.
    """

    X = as_real_matrix(X)
    _check_square(X, "vec_a")
    if tol is None:
        tol = HERMITIAN_TOL
    if np.linalg.norm(X + X.T) > scaled_tol(tol, np.linalg.norm(X)):
        raise StructureError("vec_a expects an antisymmetric matrix")

    rows, cols = _lower_colwise(X.shape[0], 1)
    return X[rows, cols]


def unvec_a(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.size != n * (n - 1) // 2:
        raise ShapeError(f"packed antisymmetric vector of order {n} needs {n * (n - 1) // 2} entries, got {v.size}")

    X = np.zeros((n, n))
    rows, cols = _lower_colwise(n, 1)
    X[rows, cols] = v
    X[cols, rows] = -v
    return X


def build_k_s(n: int) -> StructureMatrix:
    """
    Build K_S with vec(X) = K_S vec_s(X) for symmetric X.
    """

    rows, cols = _lower_colwise(n, 0)
    packed = np.arange(rows.size)
    off = rows != cols

    # Each packed entry lands on (r, c) and, off the diagonal, on (c, r)
    out_rows = np.concatenate([rows + cols * n, cols[off] + rows[off] * n])
    out_cols = np.concatenate([packed, packed[off]])
    vals = np.ones(out_rows.size)

    return _from_triplets("K_S", out_rows, out_cols, vals, (n * n, rows.size))


def build_k_a(n: int) -> StructureMatrix:
    """
    Build K_A with vec(X) = K_A vec_a(X) for antisymmetric X.
    """

    rows, cols = _lower_colwise(n, 1)
    packed = np.arange(rows.size)

    out_rows = np.concatenate([rows + cols * n, cols + rows * n])
    out_cols = np.concatenate([packed, packed])
    vals = np.concatenate([np.ones(rows.size), -np.ones(rows.size)])

    return _from_triplets("K_A", out_rows, out_cols, vals, (n * n, rows.size))


def _build_block_map(name: str, n: int, pattern: Sequence) -> StructureMatrix:
    # vec of the full representation from vec of its first block row. Every
    # entry of the full representation is +-(some entry of X_t), and the first
    # block row stores X_t with the sign of its own block
    nblocks = len(pattern)
    size = nblocks * n
    row_signs = {comp: sign for comp, sign in pattern[0]}
    first_block = {comp: block for block, (comp, _) in enumerate(pattern[0])}

    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()

    out_rows, out_cols, vals = [], [], []
    for block_row, entries in enumerate(pattern):
        for block_col, (comp, sign) in enumerate(entries):
            full_index = (block_col * n + jj) * size + block_row * n + ii
            row_index = (first_block[comp] * n + jj) * n + ii
            out_rows.append(full_index)
            out_cols.append(row_index)
            vals.append(np.full(ii.size, float(sign * row_signs[comp])))

    return _from_triplets(
        name,
        np.concatenate(out_rows),
        np.concatenate(out_cols),
        np.concatenate(vals),
        (size * size, nblocks * n * n),
    )


def build_j(n: int) -> StructureMatrix:
    """
    Build J (16n^2 x 4n^2) with vec(X^R) = J vec(X_r^R).
    """

    return _build_block_map("J", n, REAL_REP_PATTERN)


def build_j_tilde(n: int) -> StructureMatrix:
    """
    Build the complex-field J~ (4n^2 x 2n^2).
    """

    return _build_block_map("J~", n, COMPLEX_REP_PATTERN)


def _block_diag(name: str, blocks) -> StructureMatrix:
    return StructureMatrix(name, sp.block_diag([b.matrix for b in blocks], format="csc"))


def build_q(n: int) -> StructureMatrix:
    """
    Build the selection matrix diag(K_S, -K_A, K_A, -K_A).
    """

    k_s, k_a = build_k_s(n), build_k_a(n)
    neg = StructureMatrix("-K_A", -k_a.matrix)
    return _block_diag("Q", [k_s, neg, k_a, neg])


def build_r(n: int) -> StructureMatrix:
    """
    Build diag(K_S, K_A, K_A, K_A).
    """

    k_s, k_a = build_k_s(n), build_k_a(n)
    return _block_diag("R", [k_s, k_a, k_a, k_a])


def build_q_tilde(n: int) -> StructureMatrix:
    k_s, k_a = build_k_s(n), build_k_a(n)
    return _block_diag("Q~", [k_s, StructureMatrix("-K_A", -k_a.matrix)])


def build_r_tilde(n: int) -> StructureMatrix:
    k_s, k_a = build_k_s(n), build_k_a(n)
    return _block_diag("R~", [k_s, k_a])


@functools.lru_cache(maxsize=32)
def _packing_map(n: int, field: str) -> sp.csc_matrix:
    # R or R~, reused across unpacking calls; callers must not modify it
    if field == "complex":
        return build_r_tilde(n).matrix
    return build_r(n).matrix


def hermitian_dim(n: int) -> int:
    """
    Number of free real parameters of an n x n Hermitian RBQ matrix.
    """

    return 2 * n * n - n


def pack_hermitian(X: RbqMatrix, tol: Optional[float] = None) -> np.ndarray:
    """
    Return [vec_s(X0); vec_a(X1); vec_a(X2); vec_a(X3)].
    """

    x0, x1, x2, x3 = X.components
    return np.concatenate([vec_s(x0, tol), vec_a(x1, tol), vec_a(x2, tol), vec_a(x3, tol)])


def unpack_hermitian(packed, n: int) -> RbqMatrix:
    """
    Map packed parameters back to a Hermitian matrix through R.
    """

    packed = np.asarray(packed, dtype=np.float64)
    if packed.size != hermitian_dim(n):
        raise ShapeError(f"packed Hermitian vector of order {n} needs {hermitian_dim(n)} entries, got {packed.size}")

    full = _packing_map(n, "rbq") @ packed
    planes = [unvec(full[t * n * n : (t + 1) * n * n], n, n) for t in range(4)]
    return RbqMatrix(*planes)


def pack_complex_hermitian(X: RbqMatrix, tol: Optional[float] = None) -> np.ndarray:
    """
    Return [vec_s(X0); vec_a(X1)] for a complex Hermitian matrix.
    """

    x0, x1 = X.components[:2]
    return np.concatenate([vec_s(x0, tol), vec_a(x1, tol)])


def unpack_complex_hermitian(packed, n: int) -> RbqMatrix:
    packed = np.asarray(packed, dtype=np.float64)
    if packed.size != n * n:
        raise ShapeError(f"packed complex Hermitian vector of order {n} needs {n * n} entries, got {packed.size}")

    full = _packing_map(n, "complex") @ packed
    return RbqMatrix(unvec(full[: n * n], n, n), unvec(full[n * n :], n, n))
