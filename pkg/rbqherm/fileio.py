"""
Module for reading and writing the JSON formats shared by the library.

A matrix is stored as {"rows": int, "cols": int, "x0": [...], "x1": [...],
"x2": [...], "x3": [...]}, each plane a flat row-major list; absent planes
are zero.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .common import FormatError
from .model import RbqMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PLANE_KEYS = ("x0", "x1", "x2", "x3")


def load_json(path: PathLike) -> Any:
    """
    Read a JSON document, reporting syntax errors as `path:line:column`.
    """

    path = Path(path)
    with open(path, encoding="utf-8") as handler:
        text = handler.read()

    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dump_json(data: Any, path: Optional[PathLike] = None) -> str:
    """
    Serialize `data`, writing it to `path` when one is given.
    """

    text = json.dumps(data, indent=2)
    if path is not None:
        with open(path, "w", encoding="utf-8") as handler:
            handler.write(text)
            handler.write("\n")
        logger.info("Wrote `%s`", path)

    return text


def field_path(where: str, key: str) -> str:
    return f"{where}.{key}" if where else key


def require(data: Dict, key: str, where: str = "") -> Any:
    if not isinstance(data, dict):
        raise FormatError(f"{where or 'document'}: expected an object, got {type(data).__name__}")
    if key not in data:
        raise FormatError(f"{field_path(where, key)}: missing field")
    return data[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise FormatError(f"{where}: expected a non-negative integer, got {value!r}")
    return value


def read_plane(values, rows: int, cols: int, where: str) -> np.ndarray:
    """
    Parse a flat row-major list of reals into a rows x cols array.
    """

    if not isinstance(values, list):
        raise FormatError(f"{where}: expected a list of numbers")
    if len(values) != rows * cols:
        raise FormatError(f"{where}: expected {rows * cols} entries, got {len(values)}")
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: non-numeric entry ({exc})") from exc

    return arr.reshape((rows, cols))


def matrix_from_dict(data: Dict, where: str = "") -> RbqMatrix:
    rows = _as_int(require(data, "rows", where), field_path(where, "rows"))
    cols = _as_int(require(data, "cols", where), field_path(where, "cols"))

    planes = []
    for key in PLANE_KEYS:
        if key in data:
            planes.append(read_plane(data[key], rows, cols, field_path(where, key)))
        else:
            planes.append(None)
    if planes[0] is None:
        planes[0] = np.zeros((rows, cols))

    return RbqMatrix(*planes)


def matrix_to_dict(X: RbqMatrix, complex_only: bool = False) -> Dict:
    """
    Serialize a matrix; `complex_only` omits the x2 and x3 planes.
    """

    data = {"rows": X.rows, "cols": X.cols}
    keys = PLANE_KEYS[:2] if complex_only else PLANE_KEYS
    for key, plane in zip(keys, X.components):
        data[key] = plane.reshape(-1).tolist()

    return data


def read_matrix(path: PathLike) -> RbqMatrix:
    return matrix_from_dict(load_json(path), Path(path).name)


def write_matrix(X: RbqMatrix, path: PathLike):
    dump_json(matrix_to_dict(X), path)


def read_vector(path: PathLike) -> np.ndarray:
    """
    Read a JSON array of reals, as used for family parameters.
    """

    data = load_json(path)
    if not isinstance(data, list):
        raise FormatError(f"{path}: expected a JSON array of numbers")
    try:
        return np.array(data, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: non-numeric entry ({exc})") from exc

