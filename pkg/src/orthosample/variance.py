"""Variance estimation from orthogonal samples, studentized statistics with
fixed-M t calibration, and the multivariate Hotelling extension."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import distributions as dist
from .spectral import (
    DftGrid,
    OrthogonalSample,
    ShiftRangeError,
    WeightFunction,
    orthogonal_sample,
    weighted_average_run,
)

__all__ = [
    "VarianceEstimate",
    "StudentizedReport",
    "CovMatrixEstimate",
    "DegenerateVarianceError",
    "variance_estimate",
    "variance_estimate_at",
    "studentize",
    "covariance_matrix_estimate",
    "hotelling_test",
    "composite_variance",
]


class DegenerateVarianceError(ValueError):
    """All orthogonal-sample entries vanished; no studentization is possible."""


@dataclass(frozen=True)
class VarianceEstimate:
    """V-hat_M = (T/M) * sum of |A(phi; s)|^2 over an M-long shift window.

    ``shift_origin`` is 0 for the variance at frequency zero and r for the
    window starting after shift r.  The estimand is the long-run variance
    V(omega_{r0}) of the underlying functional, which involves the fourth
    order spectrum and is never evaluated directly.
    """

    value: float
    M: int
    T: int
    shift_origin: int = 0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("variance estimate cannot be negative")


@dataclass(frozen=True)
class StudentizedReport:
    statistic: float
    df: int
    p_value: float
    one_sided: bool = False
    confidence_intervals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CovMatrixEstimate:
    matrix: np.ndarray
    M: int
    T: int

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


def variance_estimate(sample: OrthogonalSample) -> VarianceEstimate:
    """V-hat_M(0) = (T/M) * sum_{r=1..M} |A(phi; r)|^2."""
    M = sample.M
    value = float(sample.T / M * np.sum(np.abs(sample.shifted) ** 2))
    return VarianceEstimate(value=value, M=M, T=sample.T, shift_origin=0)


def variance_estimate_at(grid: DftGrid, phi: WeightFunction, r0: int,
                         M: int) -> VarianceEstimate:
    """V-hat_M(omega_{r0}) = (T/M) * sum_{s=r0+1..r0+M} |A(phi; s)|^2."""
    T = grid.T
    if M < 1:
        raise ShiftRangeError("M must be >= 1")
    if r0 < 0 or r0 + M >= T / 2:
        raise ShiftRangeError(
            f"window r0+1..r0+M = {r0 + 1}..{r0 + M} exceeds T/2 (T={T})"
        )
    run = weighted_average_run(grid, phi, r0 + M)
    value = float(T / M * np.sum(np.abs(run[r0 + 1 :]) ** 2))
    return VarianceEstimate(value=value, M=M, T=T, shift_origin=r0)


def studentize(point: float, target: float, variance: VarianceEstimate,
               T: int, one_sided: bool = False,
               ci_levels: tuple = (0.95,)) -> StudentizedReport:
    """T_M = sqrt(T) (A_T - A) / sqrt(V-hat_M(0)), calibrated against t_{2M}.

    Two-sided p-values by default; intervals for the target at the requested
    confidence levels are returned alongside.
    """
    if variance.value <= 0:
        raise DegenerateVarianceError(
            "orthogonal-sample variance estimate is zero; series may be degenerate"
        )
    df = 2 * variance.M
    scale = np.sqrt(variance.value / T)
    stat = (point - target) / scale
    law = dist.student_t(df)
    if one_sided:
        p = law.sf(stat)
    else:
        p = 2.0 * law.sf(abs(stat))
    cis = {}
    for level in ci_levels:
        q = law.quantile(0.5 + level / 2.0)
        cis[level] = (point - q * scale, point + q * scale)
    return StudentizedReport(statistic=float(stat), df=df, p_value=float(min(p, 1.0)),
                             one_sided=one_sided, confidence_intervals=cis)


def covariance_matrix_estimate(samples: list[OrthogonalSample]) -> CovMatrixEstimate:
    """Sigma-hat_M from the orthogonal-sample vectors of p functionals.

    With A(r) the p-vector of shifted functionals,
    Sigma-hat = (T/M) * sum_r [Re A(r) Re A(r)' + Im A(r) Im A(r)'],
    which is symmetric PSD by construction and reduces to the scalar
    variance estimate when p = 1.
    """
    if not samples:
        raise ValueError("need at least one orthogonal sample")
    M = samples[0].M
    T = samples[0].T
    for s in samples:
        if s.M != M or s.T != T:
            raise ValueError("all orthogonal samples must share M and T")
    A = np.stack([s.shifted for s in samples])  # p x M
    re, im = A.real, A.imag
    sigma = T / M * (re @ re.T + im @ im.T)
    sigma = 0.5 * (sigma + sigma.T)
    return CovMatrixEstimate(matrix=sigma, M=M, T=T)


@dataclass(frozen=True)
class HotellingReport:
    statistic: float
    p: int
    df: int
    p_value: float


def hotelling_test(points, targets, cov: CovMatrixEstimate,
                   condition_cap: float = 1e12) -> HotellingReport:
    """T (A_T - A)' Sigma-hat^{-1} (A_T - A) against Hotelling T^2(p, 2M)."""
    a = np.asarray(points, dtype=float) - np.asarray(targets, dtype=float)
    p = cov.p
    if a.shape != (p,):
        raise ValueError(f"points/targets must be length-{p} vectors")
    eigvals = np.linalg.eigvalsh(cov.matrix)
    if eigvals[0] <= 0 or eigvals[-1] / eigvals[0] > condition_cap:
        raise DegenerateVarianceError(
            f"covariance estimate is rank deficient (smallest eigenvalue "
            f"{eigvals[0]:.3e}); increase M relative to p"
        )
    stat = float(cov.T * a @ np.linalg.solve(cov.matrix, a))
    law = dist.hotelling_t2(p, 2 * cov.M)
    return HotellingReport(statistic=stat, p=p, df=2 * cov.M,
                           p_value=float(law.sf(stat)))


def composite_variance(grid: DftGrid, phi_family, theta_hat, M: int) -> VarianceEstimate:
    """Plug-in variance estimate V-hat_{theta-hat, M}(0) for a parameterized weight.

    ``phi_family(theta)`` must return a WeightFunction; the orthogonal sample
    is formed at the estimated parameter.
    """
    phi = phi_family(theta_hat)
    if not isinstance(phi, WeightFunction):
        raise TypeError("phi_family(theta) must return a WeightFunction")
    return variance_estimate(orthogonal_sample(grid, phi, M))
