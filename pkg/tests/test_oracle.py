import math

import numpy as np
import pytest

from normgate import curves, oracle
from normgate.curves import ParamSet
from normgate.exceptions import InvalidInputError, InvalidSpecError, PreconditionError
from normgate.oracle import (
    attaining_vector,
    build_S,
    build_T,
    build_T_tilde,
    compare_block_norm,
    compare_T_Ttilde,
    matrix_norm,
    modulus,
    run_battery,
    verify_lemma23,
)
from normgate.phicrit import LogPhi, PowerPhi, TablePhi
from normgate.specop import SpectrumSpec

ONE = PowerPhi(1, 0, 0)


def svd_norm(M):
    """Independent oracle: LAPACK singular values through numpy."""
    return float(np.linalg.norm(np.asarray(M), 2))


def rand(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestMatrixNorm:
    def test_identity(self):
        assert matrix_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-15)

    def test_rank_one(self):
        u = np.array([2.0, 0, 0])
        v = np.array([0, 3.0j, 0, 0])
        assert matrix_norm(np.outer(u, v)) == pytest.approx(6.0, rel=1e-14)

    @pytest.mark.parametrize("shape", [(8, 6), (3, 9), (1, 1), (20, 20)])
    def test_against_svd(self, shape):
        M = rand(np.random.default_rng(sum(shape)), shape)
        assert matrix_norm(M) == pytest.approx(svd_norm(M), rel=1e-12)

    def test_guards(self):
        with pytest.raises(InvalidInputError):
            matrix_norm(np.zeros((0, 3)))
        with pytest.raises(InvalidInputError):
            matrix_norm(np.zeros((oracle.MAX_DIM + 1, 1)))
        with pytest.raises(InvalidInputError):
            matrix_norm([[np.inf]])

    def test_attaining_vector(self):
        M = rand(np.random.default_rng(4), (7, 5))
        x = attaining_vector(M)
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(M @ x) == pytest.approx(matrix_norm(M), abs=1e-8)

    def test_modulus(self):
        A = rand(np.random.default_rng(5), (4, 3))
        P = modulus(A)
        np.testing.assert_allclose(P @ P, A.conj().T @ A, atol=1e-12)
        np.testing.assert_allclose(P, P.conj().T, atol=1e-14)


class TestBuildT:
    def test_one_by_one_is_the_curve_matrix(self):
        p, phi = ParamSet(-2, 2, 1), PowerPhi(0, 1, 5)
        for t in (0.0, 0.3, 0.9431, 1.0):
            np.testing.assert_allclose(build_T([[t]], p, phi), curves.make_Mt(p, phi, t), atol=1e-14)

    def test_zero_A(self):
        p = ParamSet(1 + 1j, 2, 3)
        T = build_T(np.zeros((2, 3)), p, PowerPhi(0.5, 1, 2))
        assert svd_norm(T) == pytest.approx(max(abs(p.a), abs(p.b) * 0.5))

    def test_diagonal_A_splits_into_curve_blocks(self):
        p, phi = ParamSet(0.3 - 1j, 1j, 2), LogPhi(2)
        s = np.array([0.2, 0.7, 1.0])
        expected = max(float(curves.eval_f(p, phi, t)) for t in s)
        assert matrix_norm(build_T(np.diag(s), p, phi)) == pytest.approx(expected, rel=1e-12)

    def test_constant_phi_reduces_to_S(self):
        rng = np.random.default_rng(6)
        A, p = rand(rng, (4, 3)), ParamSet(*rand(rng, 3))
        np.testing.assert_allclose(build_T(A, p, ONE), build_S(A, p), atol=1e-13)
        assert matrix_norm(build_T(A, p, ONE)) == pytest.approx(
            curves.norm_block_constant(p, svd_norm(A)), rel=1e-10)


class TestComparisons:
    def test_block_norm_example(self):
        spec = SpectrumSpec(bound=1.0, eigenvalues=(0.3, 0.7, 1.0))
        cmp = compare_block_norm(spec, ParamSet(1, 1, 1), ONE)
        assert cmp.ok()
        assert cmp.lhs == pytest.approx(svd_norm(build_S(np.diag([0.3, 0.7, 1.0]), ParamSet(1, 1, 1))))

    def test_block_norm_random(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            spec = SpectrumSpec(bound=1.0, eigenvalues=tuple(rng.uniform(0, 1, size=int(rng.integers(1, 30)))))
            phi = oracle.PHI_BATTERY[int(rng.integers(len(oracle.PHI_BATTERY)))]
            cmp = compare_block_norm(spec, oracle.random_params(rng), phi)
            assert cmp.ok(), cmp

    def test_block_norm_needs_finite_spec(self):
        with pytest.raises(InvalidSpecError):
            compare_block_norm(SpectrumSpec(bound=1.0, intervals=((0, 1),)), ParamSet(1, 1, 1), ONE)

    def test_T_and_T_tilde_example(self):
        A = rand(np.random.default_rng(8), (6, 4))
        cmp = compare_T_Ttilde(A, ParamSet(1, 2, -1), PowerPhi(1, 1, 2))
        assert cmp.ok()
        assert cmp.lhs == pytest.approx(svd_norm(build_T(A, ParamSet(1, 2, -1), PowerPhi(1, 1, 2))), rel=1e-12)

    def test_T_tilde_for_zero_A(self):
        p = ParamSet(1, 2, -1)
        assert compare_T_Ttilde(np.zeros((3, 2)), p, PowerPhi(1, 1, 2)).ok()
        assert build_T_tilde(np.zeros((3, 2)), p, PowerPhi(1, 1, 2)).shape == (6, 6)

    def test_orthogonal_columns(self):
        A = np.zeros((3, 2))
        A[0, 0], A[2, 1] = 1.0, 2.0
        p, phi = ParamSet(0.5j, 1, 1 - 1j), LogPhi(1)
        cmp = compare_T_Ttilde(A, p, phi)
        assert cmp.ok()
        expected = max(float(curves.eval_f(p, phi, t)) for t in (0.0, 1.0, 2.0))
        assert cmp.lhs == pytest.approx(expected, rel=1e-12)

    def test_phi_hypothesis_enforced(self):
        bad = TablePhi(np.array([0.0, 1.0, 5.0]), np.array([1.0, 0.0, 2.0]))
        with pytest.raises(PreconditionError):
            compare_T_Ttilde(np.eye(2), ParamSet(1, 1, 1), bad)


class TestBlockConstant:
    def test_printed_formula_mismatch(self):
        A = 3 * np.eye(2)
        cmp = verify_lemma23(ParamSet(1, 1, 1), A)
        assert cmp.ok()
        assert cmp.rhs == pytest.approx(svd_norm(build_S(A, ParamSet(1, 1, 1))), rel=1e-12)
        assert abs(cmp.extra["printed"] - cmp.rhs) > 1e-3

    def test_unit_norm_coincides(self):
        rng = np.random.default_rng(9)
        A = rand(rng, (3, 3))
        A /= svd_norm(A)
        cmp = verify_lemma23(ParamSet(*rand(rng, 3)), A)
        assert cmp.ok()
        assert cmp.extra["printed"] == pytest.approx(cmp.lhs, rel=1e-12)

    def test_random_rectangular(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            m, n = (int(x) for x in rng.integers(1, 9, size=2))
            A = rand(rng, (m, n)) * rng.uniform(0.1, 4)
            p = ParamSet(*rand(rng, 3))
            assert curves.norm_block_constant(p, svd_norm(A)) == pytest.approx(svd_norm(build_S(A, p)), rel=1e-10)


class TestBattery:
    def test_zero_trials(self):
        rep = run_battery(0, 0, 4)
        assert rep.passed and rep.deviations == {}

    def test_dimension_one(self):
        rep = run_battery(1, 20, 1)
        assert rep.passed, rep.deviations

    def test_small_battery(self):
        rep = run_battery(2, 25, 6)
        assert rep.passed, rep.deviations
        assert set(rep.deviations) == {"mat2_closed_form", "lemma23", "T_vs_Ttilde", "block_norm_diag"}

    def test_invalid_dimension(self):
        with pytest.raises(InvalidInputError):
            run_battery(0, 1, 0)

    def test_deterministic(self):
        assert run_battery(3, 5, 4).deviations == run_battery(3, 5, 4).deviations


def test_example_counterexample_matrix_norm():
    # the 2x2 block at t = 1 for the worked counterexample
    assert svd_norm(curves.make_Mt(ParamSet(-2, 2, 1), PowerPhi(0, 1, 5), 1.0)) == pytest.approx(math.sqrt(5))
