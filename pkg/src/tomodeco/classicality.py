"""Classicality thresholds and the data behind the minimum-W figures.

A distribution of order sigma is nonnegative for every state once its
effective order reaches -1. Discretely this takes ``k* = max(0, ceil((sigma+1)/2))``
measurements, whatever N is. Under the Lindblad flow the effective order
falls linearly, ``sigma_eff(t) = sigma - 4 gamma N t / ln(N+1)``, giving

    t* = (sigma + 1) ln(N + 1) / (4 N gamma)

which decays like ln(N) / N at fixed coupling.

The timescale is a worst case over valid density matrices only. Minimising
over Bloch vectors that do not correspond to positive matrices gives a
different, incorrect answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .lindblad import LindbladParams, evolve_w, interpolation_time
from .quasiprob import QuasiprobSpec, w_min_formula

SIGMA_GRID = (-1.5, 3.0, 0.05)
FIG1B_T_STEPS = 200


def k_star(sigma: float) -> int:
    """Fewest measurements after which order-sigma distributions are nonnegative."""
    if not math.isfinite(sigma):
        raise ValueError(f"sigma must be finite, got {sigma}")
    return max(0, math.ceil((sigma + 1) / 2))


def order_time_unit(p: LindbladParams) -> float:
    """Time over which the effective order drops by one, ``ln(N+1) / (4 gamma N)``."""
    return math.log(p.dim + 1) / (4 * p.gamma * p.dim)


def t_star(sigma: float, p: LindbladParams) -> float:
    if not math.isfinite(sigma):
        raise ValueError(f"sigma must be finite, got {sigma}")
    return max(0.0, (sigma + 1) * order_time_unit(p))


def sigma_eff(sigma: float, t: float, p: LindbladParams) -> float:
    """Order whose initial distribution equals the order-sigma one at time t."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return sigma - t / order_time_unit(p)


@dataclass(frozen=True)
class ThresholdResult:
    sigma: float
    dim: int
    gamma: float
    k_star: int
    t_star: float

    @property
    def bracket(self) -> tuple[float, float]:
        """Flow times of the measurements just before and at k*."""
        p = LindbladParams(self.gamma, self.dim)
        return interpolation_time(max(self.k_star - 1, 0), p), interpolation_time(self.k_star, p)


def threshold(sigma: float, p: LindbladParams) -> ThresholdResult:
    return ThresholdResult(sigma, p.dim, p.gamma, k_star(sigma), t_star(sigma, p))


def worst_case_w(sigma: float, t: float, p: LindbladParams) -> float:
    """Smallest W over all states and points at time t."""
    return evolve_w(w_min_formula(QuasiprobSpec(sigma, p.dim)), t, p)


def bisect_classicality_time(sigma: float, p: LindbladParams, xtol: float = 1e-13) -> float:
    """Zero of the evolved worst-case W, found by bisection.

    Independent of :func:`t_star`; used to check it.
    """
    g = lambda t: worst_case_w(sigma, t, p)  # noqa: E731
    if g(0.0) >= 0:
        return 0.0
    hi = 1.0 / p.rate
    while g(hi) < 0:
        hi *= 2
    return bisect(g, 0.0, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def make_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive grid ``lo, lo+step, ..., hi`` rounded to 12 decimals.

    Rounding keeps named points such as sigma = -1 exact.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"empty grid [{lo}, {hi}]")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(n + 1), 12) + 0.0


@dataclass(frozen=True, eq=False)
class FigureTable:
    """Values on the product of named axes; ``values.shape`` follows axis order."""

    axes: dict[str, np.ndarray]
    values: np.ndarray
    value_name: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(v) for v in self.axes.values())
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} does not match axes {shape}")

    @property
    def columns(self) -> list[str]:
        return [*self.axes, self.value_name]

    def rows(self):
        names = list(self.axes)
        grids = [self.axes[n] for n in names]
        for idx in np.ndindex(*self.values.shape):
            yield [g[i] for g, i in zip(grids, idx)] + [self.values[idx]]


def figure1a_data(dims, sigma_grid) -> FigureTable:
    """Worst-case W over states, per sigma and N."""
    dims = np.asarray(list(dims), dtype=int)
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    if dims.size == 0 or sigma_grid.size == 0:
        raise ValueError("figure grids must be nonempty")
    vals = np.array([[w_min_formula(QuasiprobSpec(s, int(N))) for N in dims] for s in sigma_grid])
    return FigureTable({"sigma": sigma_grid, "N": dims}, vals, "w_min", {"dims": dims.tolist()})


def figure1b_data(p: LindbladParams, sigma_grid, t_grid) -> FigureTable:
    """Evolved worst-case W over the (sigma, t) plane."""
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if sigma_grid.size == 0 or t_grid.size == 0:
        raise ValueError("figure grids must be nonempty")
    if np.any(t_grid < 0):
        raise ValueError("times must be >= 0")
    vals = np.array([[worst_case_w(s, t, p) for t in t_grid] for s in sigma_grid])
    return FigureTable(
        {"sigma": sigma_grid, "t": t_grid}, vals, "min_w", {"N": p.dim, "gamma": p.gamma}
    )


def default_t_grid(p: LindbladParams, sigma_max: float = SIGMA_GRID[1], steps: int = FIG1B_T_STEPS):
    return np.linspace(0.0, 2 * t_star(sigma_max, p), steps + 1)

