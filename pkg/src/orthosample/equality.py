"""Two-sample test for equality of spectral densities.

The statistic is an integrated squared distance between smoothed spectral
estimates of the two series.  Its null distribution is calibrated from
shifted (orthogonal) copies of the same distance, with a power transform
chosen to symmetrise the draws before a t reference is applied.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import distributions as dist
from .htests import TestReport
from .spectral import DftGrid, InvalidInputError, ShiftRangeError, dft

__all__ = [
    "KernelSpec",
    "kernel_spectral_estimate",
    "l2_distance_stat",
    "moment_estimates",
    "beta_hat",
    "equality_test",
    "default_M",
    "default_bandwidth",
]


@dataclass(frozen=True)
class KernelSpec:
    """Smoothing window for the averaged periodogram.

    Only the box (flat) window is provided: W(x) = 1/2 on [-1, 1].
    ``bandwidth`` b is a fraction of the full frequency range, in (0, 1),
    so the window spans grid points within b*T of the target frequency;
    b * T >= 4 is required so each local average uses at least a handful
    of grid points.
    """

    bandwidth: float
    window: str = "box"

    def __post_init__(self):
        if self.window != "box":
            raise InvalidInputError(f"unknown window {self.window!r}")
        if not np.isfinite(self.bandwidth) or not 0.0 < self.bandwidth < 1.0:
            raise InvalidInputError("bandwidth must lie in (0, 1)")

    def weights(self, T: int) -> np.ndarray:
        """w[d] = W(delta_d / b) / (b T) over cyclic grid offsets, with
        delta_d = min(d, T - d) / T the offset as a fraction of the range;
        the weights sum to approximately one."""
        if self.bandwidth * T < 4:
            raise InvalidInputError(
                f"bandwidth {self.bandwidth} too small for T={T}: need b*T >= 4")
        d = np.arange(T)
        delta = np.minimum(d, T - d) / T
        w = np.where(np.abs(delta / self.bandwidth) <= 1.0, 0.5, 0.0)
        return w / (self.bandwidth * T)


def kernel_spectral_estimate(grid: DftGrid, kernel: KernelSpec, r: int = 0) -> np.ndarray:
    """Smoothed cross-shift spectral estimate on the full grid.

    f_hat(omega_l; r) = (1/(bT)) sum_k W((omega_l - omega_k)/b)
    J(omega_k) conj(J(omega_{k+r})), computed by circular convolution.
    Index l-1 of the result holds frequency omega_l = 2 pi l / T.
    """
    T = grid.T
    if r < 0 or r >= T / 2:
        raise ShiftRangeError(f"shift r={r} out of range for T={T}")
    u = grid.coeffs * np.conj(grid.shifted(r))
    w = kernel.weights(T)
    # circular convolution over the cyclic frequency grid
    return np.fft.ifft(np.fft.fft(u) * np.fft.fft(w))


def l2_distance_stat(fx: np.ndarray, fy: np.ndarray, T: int,
                     r: int = 0) -> tuple[float, float]:
    """Integrated squared distance between two smoothed estimates.

    r = 0: S = (2/T) sum_{j=1..T/2} |fx_j - fy_j|^2, second slot 0.
    r > 0: the pair (S_R, S_I) = (4/T) sum |Re(fx - fy)|^2 and the imaginary
    analogue, which calibrate the null distribution of S.
    """
    half = T // 2
    diff = (np.asarray(fx) - np.asarray(fy))[:half]
    if r == 0:
        return float(2.0 / T * np.sum(np.abs(diff) ** 2)), 0.0
    return (float(4.0 / T * np.sum(diff.real**2)),
            float(4.0 / T * np.sum(diff.imag**2)))


def moment_estimates(draws: np.ndarray) -> tuple[float, float, float]:
    """(mean, variance, third central moment) of the null draws."""
    draws = np.asarray(draws, dtype=float)
    mu = float(draws.mean())
    var = float(np.mean((draws - mu) ** 2))
    mu3 = float(np.mean((draws - mu) ** 3))
    return mu, var, mu3


def beta_hat(mu: float, var: float, mu3: float) -> float:
    """Power-transform exponent 1 - mu * mu3 / (3 var^2), clamped to (0, 1]."""
    if var <= 0:
        raise ZeroDivisionError("zero variance in null draws; beta undefined")
    b = 1.0 - mu * mu3 / (3.0 * var**2)
    if b <= 0.0 or b > 1.0:
        warnings.warn(f"transform exponent {b:.4g} outside (0, 1]; clamping",
                      RuntimeWarning)
        b = min(max(b, 1e-3), 1.0)
    return float(b)


def default_M(T: int) -> int:
    """Number of shifts used for the null draws: 6 at T=128, 12 at T=512,
    18 at T=1024, interpolated linearly in log2(T) elsewhere."""
    table = {128: 6, 512: 12, 1024: 18}
    if T in table:
        return table[T]
    m = int(round(6 + 6 * (np.log2(T) - 7) / 2))
    return max(2, min(m, int(T / 2) - 1))


def default_bandwidth(T: int) -> float:
    """Smoothing bandwidth: 0.15 for T < 512, 0.1 from T = 512 up."""
    return 0.15 if T < 512 else 0.1


def equality_test(x, y, b: float | None = None, M: int | None = None,
                  beta: float | str = "estimate") -> TestReport:
    """Test H0: the two series have the same spectral density.

    ``beta`` is either a fixed exponent in (0, 1] or "estimate", in which
    case it is chosen from the skewness of the null draws.  The p-value is
    the right tail of a scaled t reference with 2M - 1 degrees of freedom.
    """
    gx, gy = dft(x, demean=True), dft(y, demean=True)
    if gx.T != gy.T:
        raise InvalidInputError(
            f"series lengths differ: {gx.T} vs {gy.T}")
    T = gx.T
    if M is None:
        M = default_M(T)
    if M < 1 or M >= T / 2:
        raise ShiftRangeError(f"M={M} out of range for T={T}")
    kernel = KernelSpec(bandwidth=default_bandwidth(T) if b is None else b)

    stat, _ = l2_distance_stat(kernel_spectral_estimate(gx, kernel),
                               kernel_spectral_estimate(gy, kernel), T, r=0)
    draws = np.empty(2 * M)
    for r in range(1, M + 1):
        sr, si = l2_distance_stat(kernel_spectral_estimate(gx, kernel, r),
                                  kernel_spectral_estimate(gy, kernel, r), T, r=r)
        draws[2 * r - 2], draws[2 * r - 1] = sr, si

    mu, var, mu3 = moment_estimates(draws)
    if beta == "estimate":
        beta_used = beta_hat(mu, var, mu3)
    else:
        beta_used = float(beta)
        if not 0.0 < beta_used <= 1.0:
            raise InvalidInputError(f"beta={beta_used} outside (0, 1]")

    # moments of the transformed statistic by a second-order expansion
    mu_b = mu**beta_used + 0.5 * beta_used * (beta_used - 1.0) * mu ** (beta_used - 2.0) * var
    sd_b = beta_used * mu ** (beta_used - 1.0) * np.sqrt(var)
    if sd_b <= 0:
        raise ZeroDivisionError("degenerate transformed scale; test undefined")
    z = (stat**beta_used - mu_b) / sd_b
    law = dist.student_t(2 * M - 1)
    scale = np.sqrt(1.0 + 1.0 / (2.0 * M))
    p = float(law.sf(z / scale))
    return TestReport(statistic=stat, p_value=p, null_ref=law,
                      method="spectral_equality",
                      tuning={"M": M, "b": kernel.bandwidth, "beta": beta_used,
                              "z": float(z), "mu": mu, "var": var, "mu3": mu3})
