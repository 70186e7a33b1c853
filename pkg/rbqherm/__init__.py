# __init__.py

"""
__init__ module for the `rbqherm` package.
"""

# Version of the rbqherm package
__version__ = "0.1.0"
__author__ = "rbqherm developers"

# Build the namespace
from rbqherm.common import (
    RbqError,
    ShapeError,
    StructureError,
    PreconditionError,
    NumericalError,
    SizeError,
    FormatError,
    ConfigError,
)
from rbqherm.model import (
    RbqScalar,
    RbqMatrix,
    ComplexPairRep,
    ONE,
    UNIT_I,
    UNIT_J,
    UNIT_K,
    rbq_mul,
    mat_mul,
    real_rep,
    real_rep_row,
    complex_real_rep,
    complex_real_rep_row,
    frobenius,
    complex_pair,
    from_complex_pair,
    is_hermitian,
)
from rbqherm.structure import (
    StructureMatrix,
    vec,
    vec_s,
    vec_a,
    unvec_s,
    unvec_a,
    build_k_s,
    build_k_a,
    build_j,
    build_q,
    build_r,
    build_j_tilde,
    build_q_tilde,
    build_r_tilde,
    pack_hermitian,
    unpack_hermitian,
)
from rbqherm.linalg import kron, pinv, numerical_rank, ls_family, sample_family
from rbqherm.rr_solver import (
    Method,
    RbmeProblem,
    DesignSystem,
    SolveReport,
    assemble_design,
    solve_min_norm,
    solve_family,
    check_consistency,
    check_uniqueness,
    solve_complex_min_norm,
    solve_complex_family,
    check_complex_consistency,
    check_complex_uniqueness,
)
from rbqherm.cr_solver import (
    complex_rep,
    build_cr_system,
    stacked_pinv,
    cr_solve_hermitian,
    cr_check_consistency,
    cr_check_uniqueness,
)
from rbqherm.pdiep import EigenpairData, PdiepReport, reconstruct, check_solvable
from rbqherm.bench import (
    BenchConfig,
    BenchRecord,
    run_protocol_accuracy,
    run_protocol_compare,
    run_pdiep_goldens,
)
