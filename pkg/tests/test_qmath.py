import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import FIG2, FIG2_LAMBDAS, random_density, random_states, random_unitary
from discordfreeze import qmath
from discordfreeze.errors import ConvergenceError, DimensionError, InvalidProbabilityError, NotHermitianError
from discordfreeze.qmath import (
    I2,
    I4,
    SIGMA_X,
    SIGMA_Z,
    binary_entropy,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from discordfreeze.states import lambdas_from_c, to_density_matrix


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(I2, I2), I4)

    def test_zz_is_diagonal(self):
        np.testing.assert_array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))

    def test_xx_is_antidiagonal(self):
        np.testing.assert_array_equal(kron(SIGMA_X, SIGMA_X), np.fliplr(np.eye(4)))

    def test_matches_numpy(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            np.testing.assert_allclose(kron(a, b), np.kron(a, b), atol=1e-15)

    def test_rejects_wrong_dimension(self):
        with pytest.raises(DimensionError):
            kron(I4, I2)


class TestPartialTrace:
    def test_maximally_mixed(self):
        for side in "AB":
            np.testing.assert_allclose(partial_trace(I4 / 4, side), I2 / 2, atol=1e-15)

    def test_product_state(self):
        ket00 = np.zeros((4, 4))
        ket00[0, 0] = 1
        np.testing.assert_allclose(partial_trace(ket00, "B"), np.diag([1, 0]))

    def test_product_of_random_states(self):
        rng = np.random.default_rng(1)
        a, b = random_density(rng, 2), random_density(rng, 2)
        rho = kron(a, b)
        np.testing.assert_allclose(partial_trace(rho, "A"), a, atol=1e-14)
        np.testing.assert_allclose(partial_trace(rho, "B"), b, atol=1e-14)

    def test_bell_diagonal_marginals_maximally_mixed(self):
        rng = np.random.default_rng(2)
        for s in random_states(rng, 50):
            rho = to_density_matrix(s)
            for side in "AB":
                np.testing.assert_allclose(partial_trace(rho, side), I2 / 2, atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            rho = random_density(rng)
            for side in "AB":
                assert abs(np.trace(partial_trace(rho, side)) - 1) <= 1e-12

    def test_errors(self):
        bad = I4 / 4
        bad = bad.copy()
        bad[0, 1] = 0.1
        with pytest.raises(NotHermitianError):
            partial_trace(bad, "A")
        with pytest.raises(InvalidProbabilityError):
            partial_trace(I4, "A")
        with pytest.raises(ValueError):
            partial_trace(I4 / 4, "C")
        with pytest.raises(DimensionError):
            partial_trace(I2 / 2, "A")


class TestEigenvalues:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_eigenvalues(I4), [1, 1, 1, 1])

    def test_diagonal_is_sorted(self):
        d = np.diag([0.05, 0.75, 0.0125, 0.1875])
        np.testing.assert_allclose(hermitian_eigenvalues(d), sorted(FIG2_LAMBDAS, reverse=True))

    def test_fig2_density(self):
        vals = hermitian_eigenvalues(to_density_matrix(FIG2))
        np.testing.assert_allclose(vals, sorted(FIG2_LAMBDAS, reverse=True), atol=1e-14)

    @pytest.mark.parametrize("dim", [2, 4])
    def test_against_lapack(self, dim):
        rng = np.random.default_rng(4 + dim)
        for _ in range(200):
            z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = z + z.conj().T
            np.testing.assert_allclose(hermitian_eigenvalues(h), np.linalg.eigvalsh(h)[::-1], atol=1e-12)

    def test_degenerate_spectra(self):
        rng = np.random.default_rng(5)
        for target in ([0.25] * 4, [0.5, 0.5, 0, 0], [1, 0, 0, 0], [0.4, 0.4, 0.1, 0.1]):
            u = random_unitary(rng, 4)
            h = u @ np.diag(target) @ u.conj().T
            h = (h + h.conj().T) / 2
            np.testing.assert_allclose(hermitian_eigenvalues(h), sorted(target, reverse=True), atol=1e-13)

    def test_bell_diagonal_matches_closed_form(self):
        rng = np.random.default_rng(6)
        for s in random_states(rng, 200):
            got = hermitian_eigenvalues(to_density_matrix(s))
            want = sorted(lambdas_from_c(s).as_tuple(), reverse=True)
            np.testing.assert_allclose(got, want, atol=1e-10)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitianError):
            hermitian_eigenvalues(np.array([[1, 1], [0, 1]]))

    def test_non_convergence_raises(self, monkeypatch):
        monkeypatch.setattr(qmath, "JACOBI_MAX_SWEEPS", 0)
        with pytest.raises(ConvergenceError):
            hermitian_eigenvalues(to_density_matrix(FIG2))


class TestEntropies:
    def test_binary_entropy_values(self):
        assert binary_entropy(0.5) == 1.0
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        assert binary_entropy(0.8) == pytest.approx(0.7219280948873623, abs=1e-15)

    def test_binary_entropy_slack(self):
        assert binary_entropy(-1e-13) == 0.0
        assert binary_entropy(1 + 1e-13) == 0.0
        for x in (-1e-11, 1.1, math.nan):
            with pytest.raises(InvalidProbabilityError):
                binary_entropy(x)

    def test_shannon_values(self):
        assert shannon_entropy([1, 0, 0, 0]) == 0.0
        assert shannon_entropy([0.25] * 4) == 2.0
        assert shannon_entropy([0.4, 0.4, 0.1, 0.1]) == pytest.approx(1.7219280948873623, abs=1e-15)

    def test_shannon_clamps_tiny_negatives(self):
        assert shannon_entropy([1 + 5e-13, -5e-13]) == 0.0
        with pytest.raises(InvalidProbabilityError):
            shannon_entropy([1.1, -0.1])
        with pytest.raises(InvalidProbabilityError):
            shannon_entropy([0.5, 0.4])
        with pytest.raises(InvalidProbabilityError):
            shannon_entropy([])

    def test_relative_entropy_values(self):
        assert relative_entropy([0.3, 0.7], [0.3, 0.7]) == 0.0
        x = (0.64, 0.16, 0.16, 0.04)
        y = (0.16, 0.04, 0.64, 0.16)
        assert relative_entropy(x, y) == pytest.approx(1.2, abs=1e-14)
        assert relative_entropy([1, 0], [0, 1]) == math.inf
        assert relative_entropy([0, 1], [0.5, 0.5]) == pytest.approx(1.0)

    def test_relative_entropy_length_mismatch(self):
        with pytest.raises(DimensionError):
            relative_entropy([0.5, 0.5], [0.25] * 4)

    def test_von_neumann_of_fig2(self):
        want = -sum(x * math.log2(x) for x in FIG2_LAMBDAS)
        assert von_neumann_entropy(to_density_matrix(FIG2)) == pytest.approx(want, abs=1e-13)

    def test_returns_python_floats(self):
        assert type(shannon_entropy([0.5, 0.5])) is float
        assert type(relative_entropy([0.2, 0.8], [0.5, 0.5])) is float


prob4 = st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3).map(
    lambda v: [x / sum(v) for x in v]
)
prob2 = st.floats(1e-6, 1 - 1e-6).map(lambda x: [x, 1 - x])


@settings(max_examples=200, deadline=None)
@given(prob4, prob4)
def test_relative_entropy_nonnegative(x, y):
    assert relative_entropy(x, y) >= 0.0


@settings(max_examples=200, deadline=None)
@given(prob4)
def test_relative_entropy_zero_on_diagonal(x):
    assert relative_entropy(x, x) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(prob4, st.permutations(range(4)))
def test_shannon_bounds_and_permutation_invariance(p, perm):
    h = shannon_entropy(p)
    assert -1e-15 <= h <= 2.0 + 1e-12
    assert shannon_entropy([p[i] for i in perm]) == pytest.approx(h, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(prob2, prob2, prob2, prob2, st.floats(0.0, 1.0))
def test_joint_convexity(x1, y1, x2, y2, alpha):
    beta = 1.0 - alpha
    mix_x = [alpha * a + beta * b for a, b in zip(x1, x2)]
    mix_y = [alpha * a + beta * b for a, b in zip(y1, y2)]
    lhs = relative_entropy(mix_x, mix_y)
    rhs = alpha * relative_entropy(x1, y1) + beta * relative_entropy(x2, y2)
    assert lhs <= rhs + 1e-12
