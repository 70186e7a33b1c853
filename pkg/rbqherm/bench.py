"""
Module with the benchmark protocols and the eigenpair golden runs.

Each protocol builds, for every k, a problem with a known Hermitian solution
X~, solves it and records log10 ||X~ - X||_F together with the median time of
the solve (assembly included).
"""

import csv
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import scipy.linalg

from . import fileio
from .common import ConfigError, FormatError, RbqError
from .cr_solver import cr_solve_hermitian
from .model import RbqMatrix, frobenius, mat_mul
from .pdiep import EigenpairData, derive_eigenpairs, match_printed, reconstruct
from .rr_solver import Method, RbmeProblem, SolveReport, solve_min_norm

logger = logging.getLogger(__name__)

RESOURCE_DIR = Path(__file__).parent.parent / "resources"

PROTOCOLS = {"accuracy": 1, "compare": 2}
DEFAULT_METHODS = {"accuracy": (Method.RR,), "compare": (Method.RR, Method.CR)}

CSV_FIELDS = ("k", "m", "n", "s", "method", "log10_error", "elapsed_ms", "residual")


def parse_k_range(value: str) -> Tuple[int, ...]:
    """
    Parse "1..6" (inclusive) or a comma-separated list such as "1,3,5".
    """

    try:
        if ".." in value:
            start, stop = value.split("..", 1)
            values = tuple(range(int(start), int(stop) + 1))
        else:
            values = tuple(int(item) for item in value.split(",") if item.strip())
    except ValueError as exc:
        raise ConfigError(f"invalid k range `{value}`") from exc

    if not values:
        raise ConfigError(f"empty k range `{value}`")
    return values


@dataclass(frozen=True)
class BenchConfig:
    k_range: Tuple[int, ...]
    seed: int = 0
    repeats: int = 1
    methods: Optional[Tuple[Method, ...]] = None
    rank_tol: Optional[float] = None
    consistency_tol: Optional[float] = None
    identity: bool = False

    def __post_init__(self):
        k_range = tuple(int(k) for k in self.k_range)
        if not k_range:
            raise ConfigError("k_range must not be empty")
        if any(k < 1 for k in k_range):
            raise ConfigError(f"k values must be positive, got {k_range}")
        if self.repeats < 1:
            raise ConfigError(f"repeats must be at least 1, got {self.repeats}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        object.__setattr__(self, "k_range", k_range)

        if self.methods is not None:
            methods = tuple(Method(m) if isinstance(m, str) else m for m in self.methods)
            if not methods:
                raise ConfigError("methods must not be empty")
            object.__setattr__(self, "methods", methods)

    def methods_for(self, protocol: str) -> Tuple[Method, ...]:
        return self.methods if self.methods is not None else DEFAULT_METHODS[protocol]


@dataclass(frozen=True)
class BenchRecord:
    k: int
    m: int
    n: int
    s: int
    method: Method
    log10_error: float
    elapsed_ms: float
    residual: float

    def to_row(self) -> Dict[str, Union[int, float, str]]:
        return {
            "k": self.k,
            "m": self.m,
            "n": self.n,
            "s": self.s,
            "method": self.method.value,
            "log10_error": self.log10_error,
            "elapsed_ms": self.elapsed_ms,
            "residual": self.residual,
        }

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "BenchRecord":
        return cls(
            k=int(row["k"]),
            m=int(row["m"]),
            n=int(row["n"]),
            s=int(row["s"]),
            method=Method(row["method"]),
            log10_error=float(row["log10_error"]),
            elapsed_ms=float(row["elapsed_ms"]),
            residual=float(row["residual"]),
        )


def instance_rng(seed: int, protocol: str, k: int) -> np.random.Generator:
    """
    Counter-based generator for one (protocol, k) instance, independent of
    the other entries of the k range.
    """

    sequence = np.random.SeedSequence(seed, spawn_key=(PROTOCOLS[protocol], k))
    return np.random.Generator(np.random.Philox(sequence))


def _antisym(S: np.ndarray) -> np.ndarray:
    return S - S.T


def accuracy_problem(
    k: int, rng: np.random.Generator, identity: bool = False
) -> Tuple[RbmeProblem, RbqMatrix]:
    """
    Random problem with m = n = 2k and s = k and its Hermitian solution.

    With `identity`, A = B = C = D = I_n (and s = n).
    """

    n = m = 2 * k
    s = n if identity else k

    S0 = rng.random((n, n))
    S1 = S0
    S2 = 5.0 * rng.random((n, n))
    S3 = 2.0 * rng.random((n, n))
    X = RbqMatrix(S0 + S0.T, _antisym(S1), _antisym(S2), _antisym(S3))

    if identity:
        A = B = C = D = RbqMatrix.identity(n)
    else:

        def rand(rows, cols, scales):
            return RbqMatrix(*[scale * rng.random((rows, cols)) for scale in scales])

        A = rand(m, n, (10.0, 1.0, 1.0, 1.0))
        B = rand(n, s, (1.0, 1.0, 1.0, 1.0))
        C = rand(m, n, (1.0, 10.0, 4.0, 1.0))
        D = rand(n, s, (1.0, 2.0, 1.0, 1.0))

    E = mat_mul(mat_mul(A, X), B)
    F = mat_mul(mat_mul(C, X), D)
    return RbmeProblem(A, B, E, C, D, F), X


def compare_problem(k: int, rng: np.random.Generator) -> Tuple[RbmeProblem, RbqMatrix]:
    """
    Structured problem with n = 2k, m = n + 16, s = n + 6 and its unique
    Hermitian solution.
    """

    n = 2 * k
    m, s = n + 16, n + 6
    half = n // 2

    stacked_eye = np.vstack([np.eye(n), np.zeros((m - n, n))])
    zeros_mn = np.zeros((m, n))
    zeros_ns = np.zeros((n, s))

    A = RbqMatrix(zeros_mn, stacked_eye, zeros_mn, zeros_mn)
    B = RbqMatrix(zeros_ns, zeros_ns, zeros_ns, np.hstack([-np.eye(n), np.zeros((n, s - n))]))
    C = RbqMatrix(zeros_mn, zeros_mn, stacked_eye, zeros_mn)
    D = RbqMatrix(zeros_ns, zeros_ns, np.ones((n, s)), zeros_ns)

    S2 = rng.standard_normal((n, n))
    S3 = rng.standard_normal((n, n))
    eye_half = np.eye(half)
    zero_half = np.zeros((half, half))
    X = RbqMatrix(
        scipy.linalg.toeplitz(np.arange(1.0, n + 1.0)),
        np.block([[zero_half, eye_half], [-eye_half, zero_half]]),
        _antisym(S2),
        _antisym(S3),
    )

    E = mat_mul(mat_mul(A, X), B)
    F = mat_mul(mat_mul(C, X), D)
    return RbmeProblem(A, B, E, C, D, F), X


def log10_error(expected: RbqMatrix, found: RbqMatrix) -> float:
    error = frobenius(expected - found)
    return float(np.log10(error)) if error > 0 else float("-inf")


def _solver(method: Method, cfg: BenchConfig) -> Callable[[RbmeProblem], SolveReport]:
    if method is Method.CR:
        return lambda problem: cr_solve_hermitian(
            problem, rank_tol=cfg.rank_tol, consistency_tol=cfg.consistency_tol
        )
    return lambda problem: solve_min_norm(problem, cfg.rank_tol, cfg.consistency_tol)


def time_solve(
    solver: Callable[[RbmeProblem], SolveReport], problem: RbmeProblem, repeats: int
) -> Tuple[SolveReport, float]:
    """
    Run `solver` `repeats` times; return the first report and the median
    elapsed time in milliseconds.
    """

    reports = [solver(problem) for _ in range(repeats)]
    return reports[0], statistics.median(report.elapsed_ms for report in reports)


def _run(
    protocol: str,
    cfg: BenchConfig,
    build: Callable[[int, np.random.Generator], Tuple[RbmeProblem, RbqMatrix]],
) -> List[BenchRecord]:
    records = []
    for k in cfg.k_range:
        problem, expected = build(k, instance_rng(cfg.seed, protocol, k))
        for method in cfg.methods_for(protocol):
            try:
                report, elapsed_ms = time_solve(_solver(method, cfg), problem, cfg.repeats)
                record = BenchRecord(
                    k,
                    problem.m,
                    problem.n,
                    problem.s,
                    method,
                    log10_error(expected, report.solution),
                    elapsed_ms,
                    report.residual,
                )
            except (RbqError, np.linalg.LinAlgError) as exc:
                logger.warning("Protocol %s, k=%d, %s failed: %s", protocol, k, method.value, exc)
                record = BenchRecord(
                    k, problem.m, problem.n, problem.s, method, float("nan"), float("nan"), float("nan")
                )

            logger.info(
                "%s k=%d %s: error 10^%.2f, %.2f ms",
                protocol,
                k,
                method.value,
                record.log10_error,
                record.elapsed_ms,
            )
            records.append(record)

    return records


def run_protocol_accuracy(cfg: BenchConfig) -> List[BenchRecord]:
    """
    Error against dimension on random problems with m = n = 2k, s = k.
    """

    return _run(
        "accuracy", cfg, lambda k, rng: accuracy_problem(k, rng, identity=cfg.identity)
    )


def run_protocol_compare(cfg: BenchConfig) -> List[BenchRecord]:
    """
    Accuracy and time of both methods on the structured problems.
    """

    return _run("compare", cfg, compare_problem)


@dataclass(frozen=True)
class GoldenCase:
    name: str
    indices: Tuple[int, ...]
    residuals: np.ndarray
    printed_deviation: float = float("nan")
    reference_deviation: float = float("nan")

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))


def _load_golden(name: str, resource_dir: Optional[Path]) -> Dict:
    path = Path(resource_dir or RESOURCE_DIR) / name
    if not path.exists():
        raise FileNotFoundError(f"golden file not found: {path}")
    return fileio.load_json(path)


def _print_deviation(matrix: np.ndarray, printed: np.ndarray) -> float:
    # real and imaginary parts are rounded separately
    diff = matrix - printed
    return float(max(np.max(np.abs(diff.real)), np.max(np.abs(diff.imag))))


def run_pdiep_goldens(resource_dir: Optional[Path] = None) -> List[GoldenCase]:
    """
    Reconstruct Hermitian matrices from the shipped eigenpair goldens.

    The three-pair set is printed to four decimals and is re-orthogonalized
    first. For the 5x5 matrix the eigenpairs are recomputed from the printed
    matrix and checked against the printed values before each case is run.
    """

    cases = []

    data = _load_golden("pdiep_three_pairs.json", resource_dir)
    pairs = EigenpairData.from_dict(data, "pdiep_three_pairs").polished()
    report = reconstruct(pairs)
    reference = fileio.matrix_from_dict(data["reference_matrix"], "reference_matrix").to_complex()
    cases.append(
        GoldenCase(
            "three_pairs",
            tuple(range(1, pairs.k + 1)),
            report.residuals,
            reference_deviation=_print_deviation(report.matrix, reference),
        )
    )

    data = _load_golden("pdiep_hermitian_5x5.json", resource_dir)
    M = fileio.matrix_from_dict(fileio.require(data, "matrix"), "matrix").to_complex()
    printed = EigenpairData.from_dict(data, "pdiep_hermitian_5x5")
    derived, deviation = match_printed(derive_eigenpairs(M), printed)
    subsets = fileio.require(data, "cases")
    references = data.get("reference_matrices", [None] * len(subsets))
    if len(references) != len(subsets):
        raise FormatError(
            f"pdiep_hermitian_5x5.reference_matrices: expected {len(subsets)} matrices, got {len(references)}"
        )
    for idx, (indices, reference) in enumerate(zip(subsets, references)):
        report = reconstruct(derived.subset(indices))
        reference_deviation = float("nan")
        if reference is not None:
            where = f"pdiep_hermitian_5x5.reference_matrices[{idx}]"
            reference = fileio.matrix_from_dict(reference, where).to_complex()
            reference_deviation = _print_deviation(report.matrix, reference)
        cases.append(
            GoldenCase(
                "hermitian_5x5",
                tuple(indices),
                report.residuals,
                printed_deviation=deviation,
                reference_deviation=reference_deviation,
            )
        )

    for case in cases:
        logger.info("Golden %s %s: max residual %.3e", case.name, case.indices, case.max_residual)

    return cases


def write_csv(records: Sequence[BenchRecord], target: Union[str, Path, TextIO]):
    """
    Write benchmark records with the fixed header.
    """

    def _write(handler):
        writer = csv.DictWriter(handler, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for record in records:
            writer.writerow(record.to_row())

    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as handler:
            _write(handler)
        logger.info("Wrote %d records to `%s`", len(records), target)
    else:
        _write(target)


def read_csv(path: Union[str, Path]) -> List[BenchRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as handler:
        reader = csv.DictReader(handler)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise FormatError(f"{path}:1: unexpected header {reader.fieldnames}")
        for row in reader:
            try:
                records.append(BenchRecord.from_row(row))
            except (TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{reader.line_num}: {exc}") from exc

    return records
