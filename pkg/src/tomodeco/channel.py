"""The universal tomographic measurement channel.

A nonselective measurement maps ``rho -> (1 + rho) / (N + 1)``; k repetitions
shrink the Bloch vector by ``(N + 1)**-k``. The Monte Carlo routines here only
serve as independent checks of the closed forms.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .states import MCEstimate, fs_integrate, haar_samples, husimi, maximally_mixed

log = logging.getLogger(__name__)

MAX_ITERATIONS = 10**6


@dataclass(frozen=True, eq=False)
class ChannelIterate:
    k: int
    state: np.ndarray


def tomographic_step(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[0]
    return (np.eye(N) + rho) / (N + 1)


def tomographic_iterate(rho: np.ndarray, k: int) -> ChannelIterate:
    """Closed form of k consecutive steps."""
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    if k > MAX_ITERATIONS:
        raise ValueError(f"iteration count capped at {MAX_ITERATIONS}, got {k}")
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[0]
    damp = float(N + 1) ** (-k)
    return ChannelIterate(k, maximally_mixed(N) * (1.0 - damp) + damp * rho)


def tomographic_step_mc(rho: np.ndarray, samples: int, rng: np.random.Generator) -> MCEstimate:
    """Monte Carlo estimate of ``int Q(psi) |psi><psi| dmu``."""
    rho = np.asarray(rho, dtype=complex)

    def integrand(psis):
        q = husimi(rho, psis)
        return q[:, None, None] * np.einsum("si,sj->sij", psis, psis.conj())

    return fs_integrate(integrand, rho.shape[0], samples, rng)


def acceptance_rate(rho: np.ndarray) -> float:
    """Expected acceptance of the rejection sampler, ``1 / (N lambda_max)``."""
    rho = np.asarray(rho)
    return 1.0 / (rho.shape[0] * np.linalg.eigvalsh(rho)[-1])


def sample_outcomes(rho: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` measurement outcomes with density Q(psi) w.r.t. dmu.

    Haar proposals are accepted with probability ``Q(psi) / lambda_max``.
    """
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[0]
    lam_max = np.linalg.eigvalsh(rho)[-1]
    rate = 1.0 / (N * lam_max)
    log.debug("rejection sampler: expected acceptance %.4f", rate)
    out = []
    need = size
    while need > 0:
        batch = max(int(need / rate * 1.1) + 16, 64)
        psis = haar_samples(N, batch, rng)
        keep = rng.random(batch) * lam_max < husimi(rho, psis)
        acc = psis[keep][:need]
        out.append(acc)
        need -= len(acc)
    return np.concatenate(out, axis=0)


def sample_outcome(rho: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return sample_outcomes(rho, 1, rng)[0]
