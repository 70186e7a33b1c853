#!/usr/bin/env python3

"""
test_pdiep
==========

Tests for the eigenpair reconstruction of the `rbqherm` package.
"""

# Import third-party libraries
import unittest
from unittest import mock

import numpy as np

# Import the library being test and auxiliary libraries
import rbqherm
from rbqherm import EigenpairData, PreconditionError, RbqMatrix, ShapeError
from rbqherm import pdiep
from rbqherm.bench import RESOURCE_DIR, run_pdiep_goldens
from rbqherm.fileio import load_json
from rbqherm.pdiep import PRINT_TOL, derive_eigenpairs, eigen_residuals, match_printed


def random_complex_hermitian(rng, n):
    H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return H + H.conj().T


class TestEigenpairData(unittest.TestCase):
    """
    Class for `rbqherm` tests related to eigenpair validation.
    """

    def test_dimensions(self):
        data = EigenpairData([1.0, 2.0], np.eye(3)[:, :2])
        assert (data.n, data.k) == (3, 2)
        assert data.phi.dtype == np.complex128

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            EigenpairData([1.0 + 1.0j], np.eye(2)[:, :1])
        with self.assertRaises(PreconditionError):
            EigenpairData([1.0, 2.0, 3.0], np.ones((2, 3)))
        with self.assertRaises(PreconditionError):
            EigenpairData([1.0, 2.0], np.array([[1.0, 0.0], [0.0, 0.0]]))
        with self.assertRaises(PreconditionError):
            EigenpairData([], np.zeros((3, 0)))
        with self.assertRaises(ShapeError):
            EigenpairData([1.0, 2.0], np.eye(3)[:, :1])

    def test_real_lambdas_from_complex(self):
        data = EigenpairData(np.array([2.0 + 0.0j]), np.eye(2)[:, :1])
        assert data.lambdas.dtype == np.float64

    def test_subset(self):
        data = EigenpairData([1.0, 2.0, 3.0], np.eye(3))
        sub = data.subset([1, 3])
        np.testing.assert_array_equal(sub.lambdas, [1.0, 3.0])
        np.testing.assert_array_equal(sub.phi, np.eye(3)[:, [0, 2]])
        with self.assertRaises(ShapeError):
            data.subset([0])
        with self.assertRaises(ShapeError):
            data.subset([4])

    def test_polished(self):
        rng = np.random.default_rng(6)
        H = random_complex_hermitian(rng, 5)
        vectors = np.linalg.eigh(H)[1][:, :3]
        rounded = np.round(vectors.real, 4) + 1j * np.round(vectors.imag, 4)
        polished = EigenpairData([1.0, 2.0, 3.0], rounded).polished()

        gram = polished.phi.conj().T @ polished.phi
        np.testing.assert_allclose(gram, np.diag(np.diag(gram)), atol=1e-12)
        np.testing.assert_allclose(
            np.linalg.norm(polished.phi, axis=0), np.linalg.norm(rounded, axis=0), atol=1e-12
        )
        np.testing.assert_allclose(polished.phi, rounded, atol=1e-3)

    def test_dict(self):
        data = EigenpairData([1.5, -2.0], np.array([[1.0, 1j], [1j, 1.0]]) / np.sqrt(2.0))
        rebuilt = EigenpairData.from_dict(data.to_dict())
        np.testing.assert_array_equal(rebuilt.lambdas, data.lambdas)
        np.testing.assert_array_equal(rebuilt.phi, data.phi)

        real_only = EigenpairData.from_dict({"n": 2, "lambdas": [3.0], "phi_re": [1.0, 0.0]})
        np.testing.assert_array_equal(real_only.phi, [[1.0], [0.0]])

        with self.assertRaises(rbqherm.FormatError):
            EigenpairData.from_dict({"n": 2, "lambdas": [3.0], "phi_re": [1.0]})
        with self.assertRaises(rbqherm.FormatError):
            EigenpairData.from_dict({"n": 0, "lambdas": [3.0], "phi_re": []})


class TestReconstruct(unittest.TestCase):
    """
    Class for `rbqherm` tests related to Hermitian reconstruction.
    """

    def setUp(self):
        self.rng = np.random.default_rng(41)

    def test_coordinate_vector(self):
        data = EigenpairData([-3.5], np.eye(4)[:, :1])
        report = rbqherm.reconstruct(data)
        expected = np.zeros((4, 4))
        expected[0, 0] = -3.5
        np.testing.assert_allclose(report.matrix, expected, atol=1e-12)
        assert report.max_residual <= 1e-12
        assert report.solvable
        assert rbqherm.is_hermitian(RbqMatrix.from_complex(report.matrix))

    def test_full_spectrum(self):
        for n in (2, 3, 5):
            H = random_complex_hermitian(self.rng, n)
            lambdas, vectors = np.linalg.eigh(H)
            report = rbqherm.reconstruct(EigenpairData(lambdas, vectors))
            np.testing.assert_allclose(report.matrix, H, atol=1e-9 * np.linalg.norm(H))
            assert report.rank == n * n
            assert report.solvable

    def test_partial_spectrum(self):
        H = random_complex_hermitian(self.rng, 4)
        lambdas, vectors = np.linalg.eigh(H)
        data = EigenpairData(lambdas[:2], vectors[:, :2])
        report = rbqherm.reconstruct(data)
        assert report.solvable
        assert report.max_residual <= 1e-10
        assert report.rank < 16

        # many Hermitian matrices share two eigenpairs; all fit them equally well
        matrices = []
        for _ in range(10):
            member = rbqherm.reconstruct(data, self.rng.standard_normal(16))
            assert member.max_residual <= 1e-10
            assert rbqherm.is_hermitian(RbqMatrix.from_complex(member.matrix))
            matrices.append(member.matrix)
        assert np.linalg.norm(matrices[0] - matrices[1]) > 1e-6

    def test_unscaled_vectors(self):
        H = random_complex_hermitian(self.rng, 3)
        lambdas, vectors = np.linalg.eigh(H)
        report = rbqherm.reconstruct(EigenpairData(lambdas[:2], 3.0 * vectors[:, :2]))
        assert report.max_residual <= 1e-10

    def test_contradictory_pairs(self):
        phi = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        data = EigenpairData([1.0, 2.0], phi)
        assert not rbqherm.check_solvable(data)
        report = rbqherm.reconstruct(data)
        assert not report.solvable
        assert report.max_residual > 0.1

        # eigenvectors of distinct eigenvalues must be orthogonal
        phi = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
        assert not rbqherm.check_solvable(EigenpairData([1.0, 2.0], phi))

    def test_solvable_from_solve(self):
        H = random_complex_hermitian(self.rng, 4)
        lambdas, vectors = np.linalg.eigh(H)
        solvable = EigenpairData(lambdas[:2], vectors[:, :2])
        contradictory = EigenpairData([1.0, 2.0], np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]]))

        # the decision reuses the solve; no separate rank computation runs
        failing = mock.Mock(side_effect=AssertionError("rank recomputed"))
        with mock.patch.object(pdiep, "check_solvable", failing), mock.patch.object(
            pdiep, "numerical_rank", failing
        ):
            reports = [rbqherm.reconstruct(solvable), rbqherm.reconstruct(contradictory)]

        assert [report.solvable for report in reports] == [True, False]
        assert [rbqherm.check_solvable(data) for data in (solvable, contradictory)] == [True, False]

    def test_report_dict(self):
        report = rbqherm.reconstruct(EigenpairData([2.0], np.eye(2)[:, :1]))
        data = report.to_dict()
        assert set(data) == {"matrix", "residuals", "solvable", "rank"}
        assert "x2" not in data["matrix"]

    def test_eigen_residuals(self):
        data = EigenpairData([1.0, 2.0], np.eye(2))
        np.testing.assert_allclose(eigen_residuals(np.diag([1.0, 3.0]), data), [0.0, 1.0])


class TestGoldens(unittest.TestCase):
    """
    Class for `rbqherm` tests related to the shipped eigenpair goldens.
    """

    @classmethod
    def setUpClass(cls):
        cls.cases = run_pdiep_goldens()

    def test_cases(self):
        names = [(case.name, case.indices) for case in self.cases]
        assert names == [
            ("three_pairs", (1, 2, 3)),
            ("hermitian_5x5", (4,)),
            ("hermitian_5x5", (2, 5)),
            ("hermitian_5x5", (1, 3, 5)),
        ]

    def test_residuals(self):
        for case in self.cases:
            assert case.max_residual <= 1e-12, (case.name, case.indices, case.residuals)

    def test_three_pair_reference(self):
        assert self.cases[0].reference_deviation < 5e-3

    def test_printed_eigenpairs(self):
        for case in self.cases[1:]:
            assert case.printed_deviation <= PRINT_TOL + 1e-9

    def test_printed_reconstructions(self):
        # four half-units of the last printed digit
        for case in self.cases[1:]:
            assert case.reference_deviation <= 2e-4, (case.indices, case.reference_deviation)

    def test_least_norm_is_packed(self):
        # for a single pair the Frobenius-minimal Hermitian fit is lambda u u^* / |u|^2,
        # which is not the printed reconstruction
        data = load_json(RESOURCE_DIR / "pdiep_hermitian_5x5.json")
        M = rbqherm.fileio.matrix_from_dict(data["matrix"]).to_complex()
        pair = derive_eigenpairs(M).subset([4])
        u = pair.phi[:, 0]
        frobenius_fit = pair.lambdas[0] * np.outer(u, u.conj()) / np.vdot(u, u).real
        assert np.max(eigen_residuals(frobenius_fit, pair)) <= 1e-12

        printed = rbqherm.fileio.matrix_from_dict(data["reference_matrices"][0]).to_complex()
        assert np.max(np.abs(frobenius_fit - printed)) > 0.5
        assert self.cases[1].reference_deviation <= 2e-4

        # the packed parameter vector counts each off-diagonal entry once
        report = rbqherm.reconstruct(pair)
        assert np.linalg.norm(report.matrix) > np.linalg.norm(frobenius_fit)

    def test_derived_phases(self):
        data = load_json(RESOURCE_DIR / "pdiep_hermitian_5x5.json")
        M = rbqherm.fileio.matrix_from_dict(data["matrix"]).to_complex()
        derived = derive_eigenpairs(M)
        np.testing.assert_allclose(derived.phi[-1].imag, 0.0, atol=1e-12)
        assert np.all(derived.phi[-1].real >= 0.0)
        assert np.all(np.diff(derived.lambdas) > 0)

        printed = EigenpairData.from_dict(data)
        aligned, deviation = match_printed(derived, printed)
        assert deviation <= PRINT_TOL + 1e-9
        np.testing.assert_allclose(aligned.phi, printed.phi, atol=PRINT_TOL * np.sqrt(2.0) + 1e-9)


if __name__ == "__main__":
    # Explicitly creating and running a test suite allows to profile
    suite = unittest.TestSuite()
    for case in (TestEigenpairData, TestReconstruct, TestGoldens):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
