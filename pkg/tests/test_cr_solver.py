#!/usr/bin/env python3

"""
test_cr_solver
==============

Tests for the complex-representation solver of the `rbqherm` package.
"""

# Import third-party libraries
import unittest

import numpy as np

# Import the library being test and auxiliary libraries
import rbqherm
from rbqherm import Method, RbmeProblem, RbqMatrix, ShapeError
from rbqherm.bench import compare_problem, instance_rng
from rbqherm.structure import hermitian_dim, pack_hermitian

from .test_model import random_rbq
from .test_rr_solver import consistent_problem, perturb_outside_range, zero_first_column


class TestComplexRep(unittest.TestCase):
    """
    Class for `rbqherm` tests related to the complex representation h(A).
    """

    def test_units(self):
        unit_j = RbqMatrix([[0.0]], x2=[[1.0]])
        np.testing.assert_array_equal(rbqherm.complex_rep(unit_j), [[0, 1], [1, 0]])

        unit_i = RbqMatrix([[0.0]], [[1.0]])
        np.testing.assert_array_equal(rbqherm.complex_rep(unit_i), [[1j, 0], [0, 1j]])

    def test_shape(self):
        A = random_rbq(np.random.default_rng(0), 3, 2)
        assert rbqherm.complex_rep(A).shape == (6, 4)

    def test_multiplicative(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            A = random_rbq(rng, 3, 4)
            C = random_rbq(rng, 4, 2)
            np.testing.assert_allclose(
                rbqherm.complex_rep(A @ C),
                rbqherm.complex_rep(A) @ rbqherm.complex_rep(C),
                atol=1e-12,
            )


class TestStackedPinv(unittest.TestCase):
    """
    Class for `rbqherm` tests related to the stacked pseudoinverse.
    """

    def check_against_svd(self, Q1, Q2):
        stacked = np.vstack([Q1, Q2])
        parts = rbqherm.stacked_pinv(Q1, Q2)
        expected = np.linalg.pinv(stacked)
        scale = max(1.0, np.linalg.norm(expected))
        np.testing.assert_allclose(parts.pinv, expected, atol=1e-8 * scale)
        np.testing.assert_allclose(parts.projector, expected @ stacked, atol=1e-8)
        assert parts.rank == np.linalg.matrix_rank(stacked)

    def test_second_block_zero(self):
        rng = np.random.default_rng(2)
        Q1 = rng.standard_normal((5, 3))
        parts = rbqherm.stacked_pinv(Q1, np.zeros((5, 3)))
        np.testing.assert_allclose(parts.pinv[:, :5], np.linalg.pinv(Q1), atol=1e-12)
        np.testing.assert_allclose(parts.pinv[:, 5:], 0.0, atol=1e-12)
        assert parts.rank == 3

    def test_identity_blocks(self):
        eye = np.eye(3)
        parts = rbqherm.stacked_pinv(eye, eye)
        np.testing.assert_allclose(parts.pinv, np.hstack([0.5 * eye, 0.5 * eye]), atol=1e-12)
        np.testing.assert_allclose(parts.projector, eye, atol=1e-12)
        assert parts.rank == 3

    def test_complementary_rows(self):
        parts = rbqherm.stacked_pinv([[1.0, 0.0]], [[0.0, 1.0]])
        np.testing.assert_allclose(parts.pinv, np.eye(2), atol=1e-12)
        assert parts.rank == 2

        parts = rbqherm.stacked_pinv([[1.0, 1.0]], [[1.0, -1.0]])
        np.testing.assert_allclose(parts.pinv, [[0.5, 0.5], [0.5, -0.5]], atol=1e-12)

    def test_random(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            self.check_against_svd(rng.standard_normal((6, 4)), rng.standard_normal((6, 4)))

    def test_rank_deficient(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            # each block has rank 2, the stack has full column rank
            Q1 = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 4))
            Q2 = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 4))
            self.check_against_svd(Q1, Q2)

            # both blocks share a rank 2 row space
            W = rng.standard_normal((2, 4))
            self.check_against_svd(rng.standard_normal((6, 2)) @ W, rng.standard_normal((6, 2)) @ W)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            rbqherm.stacked_pinv(np.eye(2), np.eye(3))


class TestCrSolve(unittest.TestCase):
    """
    Class for `rbqherm` tests related to CR solutions and their agreement with RR.
    """

    def setUp(self):
        self.rng = np.random.default_rng(55)

    def test_system_shapes(self):
        problem, _ = consistent_problem(self.rng, 3, 4, 2)
        system = rbqherm.build_cr_system(problem)
        assert system.M.shape == (2 * 4 * 2, 2 * 9)
        assert system.N.shape == system.M.shape
        assert system.U.shape == (18, hermitian_dim(3))
        assert system.Q1.shape == (4 * 4 * 2, hermitian_dim(3))
        assert system.e.size == 2 * system.Q1.shape[0]
        assert system.stacked.shape == (2 * system.Q1.shape[0], hermitian_dim(3))

    def test_single_equation_system(self):
        A = random_rbq(self.rng, 2, 2)
        problem = RbmeProblem(A, A, random_rbq(self.rng, 2, 2))
        system = rbqherm.build_cr_system(problem)
        assert system.N is None

    def test_recovers_constructed_solution(self):
        problem, X = consistent_problem(self.rng, 3, 6, 3)
        report = rbqherm.cr_solve_hermitian(problem)
        assert report.method is Method.CR
        assert report.consistent
        assert report.unique
        assert rbqherm.frobenius(report.solution - X) <= 1e-9 * rbqherm.frobenius(X)

    def test_agrees_with_rr(self):
        for idx in range(10):
            problem, _ = consistent_problem(self.rng, 3, 3, 3)
            A, C = problem.A, problem.C
            if idx % 2:
                A, C = zero_first_column(A), zero_first_column(C)
            problem = RbmeProblem(
                A, problem.B, random_rbq(self.rng, 3, 3), C, problem.D, random_rbq(self.rng, 3, 3)
            )

            rr = rbqherm.solve_min_norm(problem)
            cr = rbqherm.cr_solve_hermitian(problem)
            scale = max(1.0, np.linalg.norm(pack_hermitian(rr.solution)))
            np.testing.assert_allclose(
                pack_hermitian(cr.solution), pack_hermitian(rr.solution), atol=1e-8 * scale
            )
            self.assertAlmostEqual(cr.residual, rr.residual, delta=1e-8 * max(1.0, rr.residual))
            assert cr.rank == rr.rank
            assert cr.unique == rr.unique

    def test_compare_problem(self):
        problem, X = compare_problem(1, instance_rng(0, "compare", 1))
        assert (problem.n, problem.m, problem.s) == (2, 18, 8)
        for solve in (rbqherm.solve_min_norm, rbqherm.cr_solve_hermitian):
            report = solve(problem)
            assert rbqherm.frobenius(report.solution - X) <= 1e-9

    def test_checks(self):
        problem, _ = consistent_problem(self.rng, 2, 4, 2)
        assert rbqherm.cr_check_consistency(problem)
        assert rbqherm.cr_check_uniqueness(problem)

        perturbed = perturb_outside_range(problem)
        assert not rbqherm.cr_check_consistency(perturbed)
        assert not rbqherm.cr_solve_hermitian(perturbed).consistent

        deficient = RbmeProblem(
            zero_first_column(problem.A),
            problem.B,
            problem.E,
            zero_first_column(problem.C),
            problem.D,
            problem.F,
        )
        assert not rbqherm.cr_check_uniqueness(deficient)

    def test_family(self):
        problem, _ = consistent_problem(self.rng, 2, 2, 2)
        problem = RbmeProblem(
            zero_first_column(problem.A),
            problem.B,
            random_rbq(self.rng, 2, 2),
            zero_first_column(problem.C),
            problem.D,
            random_rbq(self.rng, 2, 2),
        )
        least = rbqherm.cr_solve_hermitian(problem)
        least_norm = np.linalg.norm(pack_hermitian(least.solution))
        for _ in range(5):
            y = self.rng.standard_normal(problem.free_dim)
            report = rbqherm.cr_solve_hermitian(problem, y)
            rr = rbqherm.solve_family(problem, y)
            assert np.linalg.norm(pack_hermitian(report.solution)) >= least_norm - 1e-10
            self.assertAlmostEqual(report.residual, least.residual, delta=1e-8 * max(1.0, least.residual))
            np.testing.assert_allclose(
                pack_hermitian(report.solution), pack_hermitian(rr.solution), atol=1e-8
            )

        with self.assertRaises(ShapeError):
            rbqherm.cr_solve_hermitian(problem, np.zeros(3))


if __name__ == "__main__":
    # Explicitly creating and running a test suite allows to profile
    suite = unittest.TestSuite()
    for case in (TestComplexRep, TestStackedPinv, TestCrSolve):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
