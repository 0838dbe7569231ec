"""Whittle likelihood objective, low-dimensional fitting, and the
score-variance orthogonal-sample estimator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spectral import (
    DftGrid,
    InvalidInputError,
    WeightFunction,
    grid_frequencies,
)
from .variance import (
    CovMatrixEstimate,
    VarianceEstimate,
    covariance_matrix_estimate,
    variance_estimate,
)
from .spectral import orthogonal_sample

__all__ = [
    "SpectralModel",
    "WhittleFit",
    "ar1_model",
    "ar2_model",
    "whittle_objective",
    "whittle_fit",
    "score_weight",
    "whittle_score_variance",
]


@dataclass(frozen=True)
class SpectralModel:
    """A parametric spectral density f(omega; theta) with its theta-gradient.

    ``density(omega, theta)`` returns positive values; ``gradient`` returns an
    array of shape (param_dim, len(omega)).  ``bounds`` is the compact search
    box, one (lo, hi) pair per coordinate.
    """

    density: Callable[[np.ndarray, np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray, np.ndarray], np.ndarray]
    param_dim: int
    bounds: tuple
    name: str = "model"

    def density_on_grid(self, T: int, theta) -> np.ndarray:
        f = np.asarray(self.density(grid_frequencies(T), np.asarray(theta, float)))
        if np.any(f <= 0) or not np.all(np.isfinite(f)):
            raise InvalidInputError(
                f"{self.name}: spectral density nonpositive or non-finite at theta={theta}"
            )
        return f


def _ar_transfer_sq(omega: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """|1 - sum_m phi_m e^{i m omega}|^2."""
    z = np.ones_like(omega, dtype=complex)
    for m, c in enumerate(coeffs, start=1):
        z = z - c * np.exp(1j * m * omega)
    return np.abs(z) ** 2


def ar1_model(sigma: float | None = None,
              phi_bounds: tuple = (-0.95, 0.95),
              sigma_bounds: tuple = (0.1, 5.0)) -> SpectralModel:
    """AR(1) spectral density sigma^2 / (2 pi) * |1 - phi e^{i omega}|^{-2}.

    With ``sigma`` given, theta = (phi,); otherwise theta = (phi, sigma) and
    both are fitted jointly on the box.
    """
    if sigma is None:
        def density(w, th):
            phi, s = th
            return s**2 / (2 * np.pi) / _ar_transfer_sq(w, np.array([phi]))

        def gradient(w, th):
            phi, s = th
            denom = _ar_transfer_sq(w, np.array([phi]))
            f = s**2 / (2 * np.pi) / denom
            dphi = f * (2 * np.cos(w) - 2 * phi) / denom
            dsig = 2 * f / s
            return np.stack([dphi, dsig])

        return SpectralModel(density, gradient, 2, (phi_bounds, sigma_bounds), "ar1")

    s0 = float(sigma)

    def density(w, th):
        (phi,) = th
        return s0**2 / (2 * np.pi) / _ar_transfer_sq(w, np.array([phi]))

    def gradient(w, th):
        (phi,) = th
        denom = _ar_transfer_sq(w, np.array([phi]))
        f = s0**2 / (2 * np.pi) / denom
        return (f * (2 * np.cos(w) - 2 * phi) / denom)[None, :]

    return SpectralModel(density, gradient, 1, (phi_bounds,), f"ar1[sigma={s0}]")


def ar2_model(sigma: float | None = None,
              bounds: tuple = ((-1.9, 1.9), (-0.95, 0.95)),
              sigma_bounds: tuple = (0.1, 5.0)) -> SpectralModel:
    """AR(2) analogue, theta = (phi1, phi2[, sigma])."""
    def transfer(w, phi1, phi2):
        return _ar_transfer_sq(w, np.array([phi1, phi2]))

    if sigma is None:
        def density(w, th):
            phi1, phi2, s = th
            return s**2 / (2 * np.pi) / transfer(w, phi1, phi2)

        def gradient(w, th):
            phi1, phi2, s = th
            denom = transfer(w, phi1, phi2)
            f = s**2 / (2 * np.pi) / denom
            z = 1 - phi1 * np.exp(1j * w) - phi2 * np.exp(2j * w)
            d1 = f * 2 * np.real(np.conj(z) * np.exp(1j * w)) / denom
            d2 = f * 2 * np.real(np.conj(z) * np.exp(2j * w)) / denom
            return np.stack([d1, d2, 2 * f / s])

        return SpectralModel(density, gradient, 3, (*bounds, sigma_bounds), "ar2")

    s0 = float(sigma)

    def density(w, th):
        phi1, phi2 = th
        return s0**2 / (2 * np.pi) / transfer(w, phi1, phi2)

    def gradient(w, th):
        phi1, phi2 = th
        denom = transfer(w, phi1, phi2)
        f = s0**2 / (2 * np.pi) / denom
        z = 1 - phi1 * np.exp(1j * w) - phi2 * np.exp(2j * w)
        d1 = f * 2 * np.real(np.conj(z) * np.exp(1j * w)) / denom
        d2 = f * 2 * np.real(np.conj(z) * np.exp(2j * w)) / denom
        return np.stack([d1, d2])

    return SpectralModel(density, gradient, 2, bounds, f"ar2[sigma={s0}]")


def whittle_objective(grid: DftGrid, model: SpectralModel, theta) -> float:
    """(1/T) sum_{k=1..T} (|J_k|^2 / f(omega_k; theta) + log f(omega_k; theta))."""
    f = model.density_on_grid(grid.T, theta)
    periodogram = np.abs(grid.coeffs) ** 2
    return float(np.mean(periodogram / f + np.log(f)))


@dataclass(frozen=True)
class WhittleFit:
    theta_hat: np.ndarray
    objective_at_min: float
    iterations: int
    on_boundary: bool

    def __post_init__(self):
        self.theta_hat.setflags(write=False)


_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_section(fun, lo, hi, tol=1e-6, max_iter=200):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    it = 0
    while b - a > tol and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
        it += 1
    x = c if fc < fd else d
    return x, min(fc, fd), it


def whittle_fit(grid: DftGrid, model: SpectralModel,
                seeds_per_dim: int = 25, tol: float = 1e-6) -> WhittleFit:
    """Minimize the Whittle objective on the parameter box.

    Coarse grid seeding (25 points per coordinate) followed by cyclic
    coordinate descent with golden-section line searches.
    """
    if model.param_dim > 3:
        raise ValueError("fitting supports param_dim <= 3")
    bounds = [tuple(map(float, b)) for b in model.bounds]

    def objective(theta):
        return whittle_objective(grid, model, theta)

    axes = [np.linspace(lo, hi, seeds_per_dim) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    seeds = np.stack([m.ravel() for m in mesh], axis=1)
    seed_vals = np.array([objective(th) for th in seeds])
    theta = seeds[int(np.argmin(seed_vals))].copy()
    best = float(seed_vals.min())

    iterations = 0
    for _ in range(60):
        moved = 0.0
        for c in range(model.param_dim):
            lo, hi = bounds[c]
            span = (hi - lo) / (seeds_per_dim - 1)
            a = max(lo, theta[c] - span)
            b = min(hi, theta[c] + span)

            def line(v, c=c):
                trial = theta.copy()
                trial[c] = v
                return objective(trial)

            x, fx, it = _golden_section(line, a, b, tol=tol)
            iterations += it
            if fx < best:
                moved = max(moved, abs(x - theta[c]))
                theta[c], best = x, fx
        if moved < tol:
            break

    on_boundary = any(
        min(theta[c] - lo, hi - theta[c]) < 10 * tol for c, (lo, hi) in enumerate(bounds)
    )
    return WhittleFit(theta_hat=theta, objective_at_min=best,
                      iterations=iterations, on_boundary=on_boundary)


def score_weight(model: SpectralModel, theta, coord: int) -> WeightFunction:
    """phi(omega) = d/d theta_coord [ f(omega; theta)^{-1} ] = -grad_c f / f^2."""
    th = np.asarray(theta, dtype=float)

    def ev(w, model=model, th=th, coord=coord):
        f = np.asarray(model.density(w, th), dtype=float)
        if np.any(f <= 0):
            raise InvalidInputError(f"{model.name}: density nonpositive in score weight")
        g = np.asarray(model.gradient(w, th))[coord]
        return (-g / f**2).astype(complex)

    return WeightFunction(ev, descriptor=f"score[{model.name},coord={coord}]")


def whittle_score_variance(grid: DftGrid, model: SpectralModel, theta_hat,
                           M: int) -> VarianceEstimate | CovMatrixEstimate:
    """Orthogonal-sample variance of the Whittle score at the fitted parameter.

    Scalar models return a VarianceEstimate; multi-parameter models return the
    full covariance matrix estimate over the coordinate score weights.
    """
    samples = [
        orthogonal_sample(grid, score_weight(model, theta_hat, c), M)
        for c in range(model.param_dim)
    ]
    if model.param_dim == 1:
        return variance_estimate(samples[0])
    return covariance_matrix_estimate(samples)
