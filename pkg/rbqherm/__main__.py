#!/usr/bin/env python3

"""
Entry point for the command line `rbqherm` utility.
"""

# Import Python standard libraries
import argparse
import logging
import sys

# Import 3rd-party libraries
import numpy as np

# Import our library
from rbqherm import bench, fileio
from rbqherm.common import NumericalError, RbqError, SizeError
from rbqherm.cr_solver import cr_check_consistency, cr_check_uniqueness, cr_solve_hermitian
from rbqherm.pdiep import EigenpairData, reconstruct
from rbqherm.rr_solver import (
    Method,
    RbmeProblem,
    check_consistency,
    check_uniqueness,
    solve_family,
    solve_min_norm,
)
from rbqherm.structure import hermitian_dim

logger = logging.getLogger("rbqherm")


def parse_arguments(argv=None):
    """
    Parse command-line arguments and return as a namespace.

    Parameters
    ----------
    argv : list of str, optional
        Arguments to parse; `sys.argv[1:]` when not given.

    Returns
    -------
    args : namespace
        A namespace with all the parameters.
    """

    # Define the parser
    parser = argparse.ArgumentParser(
        description="Hermitian least-squares solutions of reduced biquaternion matrix equations."
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase logging verbosity (`-v` for info, `-vv` for debug).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    # Options shared by the solver commands
    tolerances = argparse.ArgumentParser(add_help=False)
    tolerances.add_argument(
        "--tol", type=float, default=None, help="Relative consistency tolerance (default 1e-8)."
    )
    tolerances.add_argument(
        "--rank-tol",
        type=float,
        default=None,
        help="Absolute singular-value cut for rank decisions (default max(dims)*eps*sigma_max).",
    )

    solve = commands.add_parser("solve", parents=[tolerances], help="Solve a problem file.")
    solve.add_argument("problem", type=str, help="Problem JSON file with matrices A to F.")
    solve.add_argument("--method", choices=["rr", "cr"], default="rr", help="Solution method.")
    family = solve.add_mutually_exclusive_group()
    family.add_argument("--y-file", type=str, help="JSON array selecting a family member.")
    family.add_argument("--y-seed", type=int, help="Seed for a random family member.")
    solve.add_argument("--out", type=str, help="Write the report to this file.")

    check = commands.add_parser(
        "check", parents=[tolerances], help="Report consistency and uniqueness."
    )
    check.add_argument("problem", type=str, help="Problem JSON file with matrices A to F.")
    check.add_argument("--method", choices=["rr", "cr"], default="rr", help="Solution method.")

    pdiep = commands.add_parser(
        "pdiep", parents=[tolerances], help="Build a Hermitian matrix from eigenpairs."
    )
    pdiep.add_argument("eigenpairs", type=str, help="Eigenpair JSON file.")
    pdiep.add_argument(
        "--polish",
        action="store_true",
        help="Re-orthogonalize eigenvectors given to a few decimals.",
    )
    pdiep.add_argument("--y-file", type=str, help="JSON array selecting a family member.")
    pdiep.add_argument("--out", type=str, help="Write the report to this file.")

    bench_cmd = commands.add_parser("bench", help="Run a benchmark protocol.")
    bench_cmd.add_argument(
        "--protocol", choices=["accuracy", "compare", "goldens"], default="accuracy"
    )
    bench_cmd.add_argument(
        "--k-range", type=str, default=None, help='Values of k, as "1..6" or "1,3,5".'
    )
    bench_cmd.add_argument("--seed", type=int, default=0, help="Random seed.")
    bench_cmd.add_argument("--repeats", type=int, default=1, help="Timed runs per solve.")
    bench_cmd.add_argument(
        "--methods", type=str, default=None, help='Comma-separated methods, e.g. "rr,cr".'
    )
    bench_cmd.add_argument(
        "--identity", action="store_true", help="Use identity operators (accuracy protocol)."
    )
    bench_cmd.add_argument("--csv", type=str, help="Write records to this CSV file.")
    bench_cmd.add_argument("--tol", type=float, default=None, help="Consistency tolerance.")
    bench_cmd.add_argument("--rank-tol", type=float, default=None, help="Rank cut.")

    # parse arguments and return
    args = parser.parse_args(argv)

    return args


def _emit(data, out=None):
    text = fileio.dump_json(data, out)
    print(text)


def _read_problem(path):
    return RbmeProblem.from_dict(fileio.load_json(path), "")


def run_solve(args):
    problem = _read_problem(args.problem)
    method = Method(args.method.upper())

    y = None
    if args.y_file:
        y = fileio.read_vector(args.y_file)
    elif args.y_seed is not None:
        size = hermitian_dim(problem.n) if method is Method.CR else problem.free_dim
        y = np.random.default_rng(args.y_seed).standard_normal(size)

    if method is Method.CR:
        report = cr_solve_hermitian(problem, y, args.rank_tol, args.tol)
    elif y is None:
        report = solve_min_norm(problem, args.rank_tol, args.tol)
    else:
        report = solve_family(problem, y, args.rank_tol, args.tol)

    _emit(report.to_dict(), args.out)


def run_check(args):
    problem = _read_problem(args.problem)
    if args.method == "cr":
        consistent = cr_check_consistency(problem, args.rank_tol, args.tol)
        unique = cr_check_uniqueness(problem, args.rank_tol)
    else:
        consistent = check_consistency(problem, args.rank_tol, args.tol)
        unique = check_uniqueness(problem, args.rank_tol)

    _emit({"method": args.method.upper(), "consistent": consistent, "unique": unique})


def run_pdiep(args):
    data = EigenpairData.from_dict(fileio.load_json(args.eigenpairs), "")
    if args.polish:
        data = data.polished()
    y = fileio.read_vector(args.y_file) if args.y_file else None

    report = reconstruct(data, y, args.rank_tol, args.tol)
    if args.out:
        fileio.dump_json(report.to_dict(), args.out)
    _emit({"residuals": report.residuals.tolist(), "solvable": report.solvable, "rank": report.rank})


def run_bench(args):
    if args.protocol == "goldens":
        for case in bench.run_pdiep_goldens():
            residuals = " ".join(f"{value:.4e}" for value in case.residuals)
            print(f"{case.name}\t{','.join(map(str, case.indices))}\t{residuals}")
        return

    default_range = "1..6" if args.protocol == "accuracy" else "1..8"
    methods = None
    if args.methods:
        methods = tuple(Method(item.strip().upper()) for item in args.methods.split(","))
    cfg = bench.BenchConfig(
        k_range=bench.parse_k_range(args.k_range or default_range),
        seed=args.seed,
        repeats=args.repeats,
        methods=methods,
        rank_tol=args.rank_tol,
        consistency_tol=args.tol,
        identity=args.identity,
    )

    if args.protocol == "accuracy":
        records = bench.run_protocol_accuracy(cfg)
    else:
        records = bench.run_protocol_compare(cfg)

    if args.csv:
        bench.write_csv(records, args.csv)
    else:
        bench.write_csv(records, sys.stdout)


COMMANDS = {"solve": run_solve, "check": run_check, "pdiep": run_pdiep, "bench": run_bench}


def main(argv=None):
    """
    Entry point for the command-line utility.

    Returns the exit code: 0 on success, 1 when a computation fails and 2
    on invalid input.
    """

    args = parse_arguments(argv)

    levels = [logging.WARNING, logging.INFO, logging.DEBUG]
    logging.basicConfig(
        level=levels[min(args.verbose, 2)], format="%(levelname)s:%(name)s: %(message)s"
    )

    try:
        COMMANDS[args.command](args)
    except (NumericalError, SizeError, MemoryError, np.linalg.LinAlgError) as exc:
        logger.error("%s", exc)
        return 1
    except (RbqError, OSError, ValueError) as exc:
        logger.error("%s", exc)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
