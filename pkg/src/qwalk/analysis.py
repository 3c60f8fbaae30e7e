"""Observables over walker states: position distributions, marginals,
1-norm discrepancy, axis variances, recurrence probability, and the
classical random-walk baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .statespace import WalkerState

__all__ = [
    "Distribution",
    "WalkSummary",
    "distribution",
    "l1_distance",
    "marginal",
    "variance",
    "recurrence_probability",
    "classical_rw_distribution",
    "summarize",
]

_SUM_TOL = 1e-10


@dataclass(frozen=True)
class Distribution:
    """Nonnegative probability table over lattice sites -L..L (per axis)."""

    probs: NDArray[np.float64]
    halfwidth: int

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        n = 2 * self.halfwidth + 1
        if p.shape not in ((n,), (n, n)):
            raise ValueError(
                f"probability table shape {p.shape} does not match halfwidth "
                f"{self.halfwidth}"
            )
        if p.min() < 0.0:
            raise ValueError(f"negative probability {p.min()}")
        total = p.sum()
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", p)

    @property
    def dimensionality(self) -> int:
        return self.probs.ndim

    def positions(self) -> NDArray[np.int64]:
        """Lattice coordinates -L..L along one axis."""
        return np.arange(-self.halfwidth, self.halfwidth + 1)

    def at(self, *position: int) -> float:
        idx = tuple(p + self.halfwidth for p in position)
        return float(self.probs[idx])


@dataclass
class WalkSummary:
    """Per-step observables: origin probability, axis variances, optional
    1-norm discrepancy against a reference distribution."""

    step: int
    recurrence: float
    variance_x: float
    variance_y: float | None = None
    s_t: float | None = None


def distribution(state: WalkerState) -> Distribution:
    """Position distribution P = sum over coin components of |amplitude|^2."""
    p = (np.abs(state.amplitudes) ** 2).sum(axis=-1)
    return Distribution(p, state.halfwidth)


def _padded(p: Distribution, halfwidth: int) -> NDArray[np.float64]:
    pad = halfwidth - p.halfwidth
    if pad == 0:
        return p.probs
    widths = [(pad, pad)] * p.probs.ndim
    return np.pad(p.probs, widths)


def l1_distance(p: Distribution, q: Distribution) -> float:
    """Half the total absolute difference between two distributions.

    0 for identical distributions, 1 for disjoint support.  Lattices of
    different halfwidth are aligned by zero-padding the smaller one.
    """
    if p.dimensionality != q.dimensionality:
        raise ValueError("cannot compare distributions of different dimensionality")
    L = max(p.halfwidth, q.halfwidth)
    return float(0.5 * np.abs(_padded(p, L) - _padded(q, L)).sum())


def _axis_index(axis: int | str) -> int:
    if axis in (0, "x"):
        return 0
    if axis in (1, "y"):
        return 1
    raise ValueError(f"axis must be 'x'/'y' (or 0/1), got {axis!r}")


def marginal(p: Distribution, axis: int | str) -> Distribution:
    """Marginal of a 2D distribution along one axis."""
    if p.dimensionality != 2:
        raise ValueError("marginal expects a 2D distribution")
    keep = _axis_index(axis)
    return Distribution(p.probs.sum(axis=1 - keep), p.halfwidth)


def variance(p: Distribution, axis: int | str | None = None) -> float:
    """Position variance about the mean, along ``axis`` for 2D input."""
    if p.dimensionality == 2:
        if axis is None:
            raise ValueError("2D distribution requires an axis")
        p = marginal(p, axis)
    xs = p.positions().astype(np.float64)
    mean = float((xs * p.probs).sum())
    return float((xs**2 * p.probs).sum() - mean**2)


def recurrence_probability(p: Distribution) -> float:
    """Probability at the origin site (0, 0) of a 2D distribution."""
    if p.dimensionality != 2:
        raise ValueError("recurrence_probability expects a 2D distribution")
    return p.at(0, 0)


def classical_rw_distribution(t: int) -> Distribution:
    """Symmetric classical random walk after t unit steps.

    P(x) = C(t, (t+x)/2) / 2^t on sites with x = t (mod 2), zero elsewhere;
    variance is exactly t.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return Distribution(np.array([1.0]), 0)
    probs = np.zeros(2 * t + 1)
    for x in range(-t, t + 1):
        if (t + x) % 2 == 0:
            probs[x + t] = math.comb(t, (t + x) // 2) / 2**t
    return Distribution(probs, t)


def summarize(
    step: int, state: WalkerState, reference: Distribution | None = None
) -> WalkSummary:
    """WalkSummary for a state: origin probability, variances, optional s_t."""
    p = distribution(state)
    if state.dimensionality == 1:
        rec = p.at(0)
        var_x = variance(p)
        var_y = None
    else:
        rec = p.at(0, 0)
        var_x = variance(p, "x")
        var_y = variance(p, "y")
    s_t = None if reference is None else l1_distance(p, reference)
    return WalkSummary(step, rec, var_x, var_y, s_t)
