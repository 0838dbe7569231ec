"""Data-driven choice of the orthogonal-sample size M via the average squared
criterion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import DftGrid, ShiftRangeError, WeightFunction, weighted_average_run
from .variance import DegenerateVarianceError

__all__ = ["SelectionResult", "criterion", "select_M", "feasible_search_set",
           "DEFAULT_SEARCH_SET", "DEFAULT_P"]

DEFAULT_SEARCH_SET = range(10, 31)
DEFAULT_P = 4


@dataclass(frozen=True)
class SelectionResult:
    chosen_M: int
    criterion_curve: dict
    search_set: tuple
    p: int


def _criterion_from_run(run: np.ndarray, T: int, M: int, p: int) -> float:
    """Average squared error computed from a precomputed shift run A(phi; 0..)."""
    nr = T // p
    sq = np.abs(run) ** 2  # |A(phi; s)|^2 at index s
    # V-hat_M(omega_r) = (T/M) sum_{s=r+1..r+M} sq[s], r = 1..nr
    csum = np.cumsum(sq)
    r = np.arange(1, nr + 1)
    windows = (csum[r + M] - csum[r]) * (T / M)
    if np.any(windows <= 0):
        raise DegenerateVarianceError(
            f"degenerate variance window encountered for M={M}"
        )
    return float(p / T * np.sum((T * sq[r] / windows - 1.0) ** 2))


def _check_window(T: int, M: int, p: int):
    if p < 2:
        raise ShiftRangeError("p must be >= 2")
    if M < 1:
        raise ShiftRangeError("M must be >= 1")
    if T // p + M >= T / 2:
        raise ShiftRangeError(
            f"criterion needs T/p + M < T/2; got T={T}, p={p}, M={M}"
        )


def criterion(grid: DftGrid, phi: WeightFunction, M: int, p: int = DEFAULT_P) -> float:
    """C(M) = (p/T) sum_{r=1..T/p} (T |A(phi; r)|^2 / V-hat_M(omega_r) - 1)^2."""
    T = grid.T
    _check_window(T, M, p)
    run = weighted_average_run(grid, phi, T // p + M)
    return _criterion_from_run(run, T, M, p)


def feasible_search_set(T: int, search_set=DEFAULT_SEARCH_SET,
                        p: int = DEFAULT_P) -> tuple:
    """Members of the search set whose variance windows stay below T/2."""
    out = tuple(M for M in search_set if T // p + M < T / 2)
    if not out:
        raise ShiftRangeError(
            f"no feasible M in {list(search_set)} for T={T}, p={p}"
        )
    return out


def select_M(grid: DftGrid, phi: WeightFunction, search_set=DEFAULT_SEARCH_SET,
             p: int = DEFAULT_P) -> SelectionResult:
    """argmin of the criterion over the search set; ties go to the smallest M."""
    T = grid.T
    members = tuple(int(M) for M in search_set)
    if not members:
        raise ShiftRangeError("search set is empty")
    for M in members:
        _check_window(T, M, p)
    run = weighted_average_run(grid, phi, T // p + max(members))
    curve = {M: _criterion_from_run(run, T, M, p) for M in members}
    chosen = min(sorted(curve), key=lambda M: curve[M])
    return SelectionResult(chosen_M=chosen, criterion_curve=curve,
                           search_set=members, p=p)
