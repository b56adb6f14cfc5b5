"""Continuous-time tomographic monitoring as a Lindblad flow.

All su(N) generators act as jump operators with a common rate gamma. The
generator collapses to ``L(rho) = 2 gamma (tr(rho) 1 - N rho)``, so Bloch
components decay at rate ``2 gamma N`` and the flow hits the discrete
channel iterates at ``t_k = k ln(N+1) / (2 gamma N)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .su_algebra import DimensionError, GeneratorSet, generate_su_generators

RK4_STABILITY = 0.1


@dataclass(frozen=True)
class LindbladParams:
    gamma: float
    dim: int

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma}")
        if self.dim < 2:
            raise DimensionError(f"dimension must be >= 2, got {self.dim}")

    @property
    def rate(self) -> float:
        """Decay rate ``2 gamma N`` of every Bloch component."""
        return 2.0 * self.gamma * self.dim

    @property
    def default_dt(self) -> float:
        return 1e-3 / self.rate


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray  # (T,)
    states: np.ndarray  # (T, N, N)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _check(rho: np.ndarray, p: LindbladParams) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (p.dim, p.dim):
        raise DimensionError(f"matrix of shape {rho.shape} does not match dim {p.dim}")
    return rho


def lindblad_rhs_full(rho: np.ndarray, p: LindbladParams, g: GeneratorSet | None = None) -> np.ndarray:
    """``gamma sum_i (l_i rho l_i - {l_i^2, rho} / 2)`` summed term by term.

    Works for any square matrix, not only states.
    """
    rho = _check(rho, p)
    g = generate_su_generators(p.dim) if g is None else g
    if g.dim != p.dim:
        raise DimensionError(f"generators for su({g.dim}) used with dim {p.dim}")
    L = g.generators
    sandwich = (L @ rho @ L).sum(axis=0)
    sq = (L @ L).sum(axis=0)
    return p.gamma * (sandwich - 0.5 * (sq @ rho + rho @ sq))


def lindblad_rhs_reduced(rho: np.ndarray, p: LindbladParams) -> np.ndarray:
    """``2 gamma (1 - N rho)`` for unit-trace input; ``tr(rho) 1`` in general."""
    rho = _check(rho, p)
    return 2.0 * p.gamma * (np.trace(rho) * np.eye(p.dim) - p.dim * rho)


def evolve_closed_form(rho0: np.ndarray, t: float, p: LindbladParams) -> np.ndarray:
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    rho0 = _check(rho0, p)
    mixed = np.eye(p.dim) / p.dim
    return mixed + math.exp(-p.rate * t) * (rho0 - mixed)


def evolve_rk4(
    rho0: np.ndarray,
    t: float,
    p: LindbladParams,
    dt: float | None = None,
    rhs: str = "reduced",
    t_eval: np.ndarray | None = None,
    g: GeneratorSet | None = None,
) -> Trajectory:
    """Fixed-step classical Runge-Kutta integration from 0 to ``t``.

    The step is shrunk so that each interval between consecutive ``t_eval``
    points is covered by a whole number of equal steps. By default every
    step is recorded.
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    dt = p.default_dt if dt is None else dt
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt * p.rate > RK4_STABILITY:
        raise ValueError(
            f"dt={dt:g} violates the stability guard dt*2*gamma*N <= {RK4_STABILITY}"
        )
    if rhs == "full":
        g = generate_su_generators(p.dim) if g is None else g
        field = lambda x: lindblad_rhs_full(x, p, g)  # noqa: E731
    elif rhs == "reduced":
        field = lambda x: lindblad_rhs_reduced(x, p)  # noqa: E731
    else:
        raise ValueError(f"rhs must be 'full' or 'reduced', got {rhs!r}")

    rho = _check(rho0, p).copy()
    if t_eval is None:
        n = max(1, math.ceil(t / dt - 1e-9)) if t > 0 else 0
        t_eval = np.linspace(0.0, t, n + 1)
    else:
        t_eval = np.asarray(t_eval, dtype=float)
        if t_eval[0] != 0.0 or np.any(np.diff(t_eval) <= 0) or not np.isclose(t_eval[-1], t):
            raise ValueError("t_eval must start at 0, increase strictly and end at t")

    times = [0.0]
    states = [rho.copy()]
    for t0, t1 in zip(t_eval[:-1], t_eval[1:]):
        n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
        h = (t1 - t0) / n
        for _ in range(n):
            k1 = field(rho)
            k2 = field(rho + 0.5 * h * k1)
            k3 = field(rho + 0.5 * h * k2)
            k4 = field(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(rho)):
            raise FloatingPointError(f"non-finite state at t={t1:g}")
        times.append(float(t1))
        states.append(rho.copy())
    return Trajectory(np.array(times), np.array(states))


def interpolation_time(k: int, p: LindbladParams) -> float:
    """Time at which the flow equals k tomographic measurements."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return k * math.log(p.dim + 1) / p.rate


def evolve_w(w0, t: float, p: LindbladParams):
    """Solution of ``dW/dt = 2 gamma (1 - N W)`` started from ``w0``."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return 1.0 / p.dim + (w0 - 1.0 / p.dim) * math.exp(-p.rate * t)
