"""
Module with functions and values shared across different parts of the library.
"""

from typing import Sequence, Tuple

import numpy as np

# Default tolerances; every public entry point accepts an override
HERMITIAN_TOL = 1e-10
CONSISTENCY_TOL = 1e-8

# Relative cut used when taking the pseudoinverse of the auxiliary matrix
# R = (I - Q1^+ Q1) Q2^T of the complex-representation method; R is often
# zero up to roundoff, so its numerical rank must be judged against the scale
# of the stacked pair and not against its own largest singular value
STACKED_RANK_RTOL = 1e-10

# Number of design columns assembled per batch
COLUMN_BATCH = 128


class RbqError(Exception):
    """
    Base class for all errors raised by `rbqherm`.
    """


class ShapeError(RbqError, ValueError):
    """
    Raised on dimension mismatches.
    """


class StructureError(RbqError, ValueError):
    """
    Raised when a matrix lacks the required (anti)symmetric structure.
    """


class PreconditionError(RbqError, ValueError):
    """
    Raised when input data violates the data model.
    """


class NumericalError(RbqError, ArithmeticError):
    """
    Raised when a factorization fails.
    """


class SizeError(RbqError, MemoryError):
    """
    Raised when a requested dense product cannot be allocated.
    """


class FormatError(RbqError, ValueError):
    """
    Raised on malformed input files.
    """


class ConfigError(RbqError, ValueError):
    """
    Raised on invalid benchmark configurations.
    """


def as_real_matrix(value, name: str = "matrix") -> np.ndarray:
    """
    Cast `value` to a two-dimensional float64 array, checking finiteness.
    """

    arr = np.asarray(value)
    if np.iscomplexobj(arr):
        raise PreconditionError(f"{name} must be real, got dtype {arr.dtype}")
    arr = np.array(arr, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite entries")

    return arr


def as_complex_matrix(value, name: str = "matrix") -> np.ndarray:
    """
    Cast `value` to a two-dimensional complex128 array, checking finiteness.
    """

    arr = np.array(value, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite entries")

    return arr


def check_inner(
    left: Tuple[int, int], right: Tuple[int, int], names: Sequence[str] = ("A", "C")
):
    """
    Raise a `ShapeError` unless `left @ right` is defined.
    """

    if left[1] != right[0]:
        raise ShapeError(
            f"cannot multiply {names[0]} {left[0]}x{left[1]} "
            f"by {names[1]} {right[0]}x{right[1]}"
        )


def scaled_tol(tol: float, reference: float) -> float:
    """
    Scale-aware threshold `tol * max(1, reference)`.
    """

    return tol * max(1.0, reference)
