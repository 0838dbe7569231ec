"""Whittle objective, fitting, and the score-variance estimator."""

import numpy as np
import pytest

from orthosample.models import MODEL_REGISTRY, generate
from orthosample.spectral import InvalidInputError, dft, grid_frequencies
from orthosample.variance import CovMatrixEstimate, VarianceEstimate
from orthosample.whittle import (
    ar1_model,
    ar2_model,
    score_weight,
    whittle_fit,
    whittle_objective,
    whittle_score_variance,
)


class TestModels:
    def test_ar1_density_closed_form(self):
        model = ar1_model()
        w = np.linspace(0.1, 6.2, 13)
        f = model.density(w, np.array([0.6, 1.0]))
        want = 1.0 / (2 * np.pi) / np.abs(1 - 0.6 * np.exp(1j * w)) ** 2
        np.testing.assert_allclose(f, want, rtol=1e-12)

    @pytest.mark.parametrize(
        "model,theta",
        [
            (ar1_model(), np.array([0.5, 1.2])),
            (ar1_model(sigma=1.0), np.array([-0.4])),
            (ar2_model(), np.array([0.9, -0.5, 0.8])),
            (ar2_model(sigma=2.0), np.array([1.2, -0.6])),
        ],
        ids=["ar1", "ar1-fixed-sigma", "ar2", "ar2-fixed-sigma"],
    )
    def test_gradient_matches_finite_difference(self, model, theta):
        w = np.linspace(0.2, 6.0, 9)
        grad = np.asarray(model.gradient(w, theta))
        h = 1e-5
        for c in range(model.param_dim):
            up, dn = theta.copy(), theta.copy()
            up[c] += h
            dn[c] -= h
            fd = (np.asarray(model.density(w, up)) - np.asarray(model.density(w, dn))) / (2 * h)
            np.testing.assert_allclose(grad[c], fd, atol=1e-6)

    def test_density_positivity_enforced(self):
        from orthosample.whittle import SpectralModel

        bad = SpectralModel(density=lambda w, th: np.cos(w),
                            gradient=lambda w, th: np.zeros((1, w.size)),
                            param_dim=1, bounds=((0.0, 1.0),), name="bad")
        with pytest.raises(InvalidInputError):
            bad.density_on_grid(16, np.array([0.5]))


class TestObjective:
    def test_sign_flip_invariance(self, rng):
        x = rng.standard_normal(200)
        model = ar1_model()
        theta = np.array([0.3, 1.0])
        assert whittle_objective(dft(x), model, theta) == pytest.approx(
            whittle_objective(dft(-x), model, theta), rel=1e-12
        )

    def test_formula(self, rng):
        x = rng.standard_normal(64)
        grid = dft(x)
        model = ar1_model(sigma=1.0)
        theta = np.array([0.4])
        f = model.density(grid_frequencies(64), theta)
        want = np.mean(np.abs(grid.coeffs) ** 2 / f + np.log(f))
        assert whittle_objective(grid, model, theta) == pytest.approx(want, rel=1e-12)


class TestFit:
    def test_recovers_ar1(self):
        x = generate(MODEL_REGISTRY["ar_g_0.6"], 2048, seed=101).series
        fit = whittle_fit(dft(x), ar1_model())
        phi_hat, sigma_hat = fit.theta_hat
        assert phi_hat == pytest.approx(0.6, abs=0.08)
        assert sigma_hat == pytest.approx(1.0, abs=0.1)
        assert not fit.on_boundary

    def test_objective_at_min_beats_seeds(self, rng):
        x = rng.standard_normal(256)
        model = ar1_model(sigma=1.0)
        grid = dft(x)
        fit = whittle_fit(grid, model)
        for phi in np.linspace(-0.9, 0.9, 7):
            assert fit.objective_at_min <= whittle_objective(grid, model, [phi]) + 1e-12

    def test_score_small_at_interior_minimum(self):
        x = generate(MODEL_REGISTRY["ar_g_0.6"], 1024, seed=7).series
        grid = dft(x)
        model = ar1_model()
        fit = whittle_fit(grid, model, tol=1e-8)
        assert not fit.on_boundary
        h = 1e-5
        for c in range(model.param_dim):
            up, dn = fit.theta_hat.copy(), fit.theta_hat.copy()
            up[c] += h
            dn[c] -= h
            deriv = (whittle_objective(grid, model, up)
                     - whittle_objective(grid, model, dn)) / (2 * h)
            assert abs(deriv) <= 1e-4


class TestScoreVariance:
    def test_scalar_and_matrix_dispatch(self, rng):
        x = rng.standard_normal(512)
        grid = dft(x)
        v = whittle_score_variance(grid, ar1_model(sigma=1.0), [0.2], M=10)
        assert isinstance(v, VarianceEstimate)
        cov = whittle_score_variance(grid, ar1_model(), [0.2, 1.0], M=10)
        assert isinstance(cov, CovMatrixEstimate)
        assert cov.matrix.shape == (2, 2)

    def test_score_weight_is_neg_grad_of_reciprocal(self):
        model = ar1_model(sigma=1.0)
        theta = [0.5]
        w = np.linspace(0.3, 5.9, 7)
        got = score_weight(model, theta, 0)(w)
        h = 1e-6
        fd = (1.0 / np.asarray(model.density(w, [0.5 + h]))
              - 1.0 / np.asarray(model.density(w, [0.5 - h]))) / (2 * h)
        np.testing.assert_allclose(got.real, fd, atol=1e-5)
        np.testing.assert_allclose(got.imag, 0.0, atol=1e-12)
