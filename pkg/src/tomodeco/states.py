"""Density matrices, Bloch vectors, Haar sampling and Fubini-Study integration.

States are plain numpy arrays: a density matrix is a complex ``(N, N)`` array,
a pure state a unit vector of length N, and batches of pure states are
``(S, N)`` arrays with one state per row.

The integration measure on projective Hilbert space has total mass N, so that
``int |psi><psi| dmu = 1``. ``fs_integrate`` is the only place that factor
appears.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .su_algebra import DimensionError, GeneratorSet

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
POSITIVITY_ATOL = 1e-10

# Chunk size for Monte Carlo integration. Fixed, so that estimates do not
# depend on how chunks are scheduled across workers.
MC_CHUNK = 50_000


class InvalidStateError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


def check_density_matrix(rho: np.ndarray, N: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {rho.shape}")
    if N is not None and rho.shape[0] != N:
        raise DimensionError(f"expected dimension {N}, got {rho.shape[0]}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_ATOL:
        raise InvalidStateError(f"trace is {np.trace(rho).real:.3g}, expected 1")
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -POSITIVITY_ATOL:
        raise InvalidStateError(f"negative eigenvalue {lam:.3g}")
    return rho


def is_density_matrix(rho: np.ndarray) -> bool:
    try:
        check_density_matrix(rho)
    except ValueError:
        return False
    return True


def maximally_mixed(N: int) -> np.ndarray:
    return np.eye(N, dtype=complex) / N


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def _check_pair(rho: np.ndarray, g: GeneratorSet):
    if rho.shape != (g.dim, g.dim):
        raise DimensionError(f"state of shape {rho.shape} does not match su({g.dim})")


def bloch_encode(rho: np.ndarray, g: GeneratorSet) -> np.ndarray:
    """Generalized Bloch vector ``r_a = tr(rho l_a)``."""
    rho = np.asarray(rho, dtype=complex)
    _check_pair(rho, g)
    r = np.einsum("ij,aji->a", rho, g.generators)
    if np.max(np.abs(r.imag), initial=0.0) > 1e-12:
        raise InvalidStateError("Bloch components have imaginary parts; input not Hermitian")
    return r.real.copy()


def bloch_decode(r: np.ndarray, g: GeneratorSet) -> np.ndarray:
    """Inverse of :func:`bloch_encode`: ``1/N + (1/2) sum_a r_a l_a``.

    The result is Hermitian with unit trace but need not be positive.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (len(g),):
        raise DimensionError(f"Bloch vector must have length {len(g)}, got {r.shape}")
    return maximally_mixed(g.dim) + 0.5 * np.einsum("a,aij->ij", r, g.generators)


def haar_samples(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Fubini-Study uniform pure states as rows of an ``(size, N)`` array."""
    if N < 2:
        raise DimensionError(f"dimension must be >= 2, got {N}")
    x = rng.standard_normal((size, 2 * N))
    z = x[:, :N] + 1j * x[:, N:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_sample(N: int, rng: np.random.Generator) -> np.ndarray:
    return haar_samples(N, 1, rng)[0]


def random_density_matrix(N: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from the induced (Ginibre) measure; ``rank=1`` gives a pure state."""
    rank = N if rank is None else rank
    G = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    rho = G @ G.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def husimi(rho: np.ndarray, psi: np.ndarray) -> float | np.ndarray:
    """``Q(psi) = <psi|rho|psi>``. Accepts one state or a batch of rows."""
    rho = np.asarray(rho)
    psi = np.asarray(psi)
    if psi.shape[-1] != rho.shape[0]:
        raise DimensionError(f"state of length {psi.shape[-1]} vs matrix {rho.shape}")
    q = np.einsum("...i,ij,...j->...", psi.conj(), rho, psi).real
    return float(q) if q.ndim == 0 else q


def min_husimi(rho: np.ndarray) -> float:
    """``min_psi Q(psi)``, i.e. the smallest eigenvalue of rho (a Rayleigh quotient).

    Values in ``[-1e-10, 0)`` are clamped to zero.
    """
    lam = float(np.linalg.eigvalsh(rho)[0])
    if lam < -POSITIVITY_ATOL:
        raise InvalidStateError(f"negative eigenvalue {lam:.3g}")
    return max(lam, 0.0)


@dataclass(frozen=True, eq=False)
class MCEstimate:
    """Monte Carlo estimate with per-component standard error.

    For complex values ``std_error`` carries the standard error of the real
    part in its real component and of the imaginary part in its imaginary one.
    """

    value: float | complex | np.ndarray
    std_error: float | complex | np.ndarray
    samples: int

    def zscores(self, expected, floor: float = 1e-12) -> np.ndarray:
        diff = np.asarray(self.value) - np.asarray(expected)
        se = np.asarray(self.std_error)
        z_re = np.abs(diff.real) / np.maximum(se.real, floor)
        z_im = np.abs(diff.imag) / np.maximum(se.imag, floor)
        return np.maximum(z_re, z_im)

    def within(self, expected, n_sigma: float = 4.0) -> bool:
        return bool(np.all(self.zscores(expected) <= n_sigma))


def fs_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    N: int,
    samples: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> MCEstimate:
    """Estimate ``int f(psi) dmu_psi`` with ``mu`` of total mass N.

    ``f`` is vectorized: it receives an ``(S, N)`` batch of Haar states and
    returns an array whose leading axis has length S. Each chunk draws from
    its own substream spawned from ``rng``, and chunk sums are reduced in
    chunk order, so results do not depend on ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    streams = rng.spawn(len(sizes))

    def chunk(args):
        size, sub = args
        vals = np.asarray(f(haar_samples(N, size, sub)))
        return vals.sum(axis=0), (vals.real**2).sum(axis=0), (vals.imag**2).sum(axis=0)

    jobs = list(zip(sizes, streams))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, jobs))
    else:
        parts = [chunk(j) for j in jobs]

    total = sum(p[0] for p in parts)
    sq_re = sum(p[1] for p in parts)
    sq_im = sum(p[2] for p in parts)
    mean = total / samples
    if samples > 1:
        var_re = np.maximum(sq_re / samples - mean.real**2, 0.0) * samples / (samples - 1)
        var_im = np.maximum(sq_im / samples - np.imag(mean) ** 2, 0.0) * samples / (samples - 1)
    else:
        var_re = var_im = np.zeros_like(np.real(mean))
    se_re = N * np.sqrt(var_re / samples)
    se_im = N * np.sqrt(var_im / samples)
    if np.iscomplexobj(mean):
        return MCEstimate(N * mean, se_re + 1j * se_im, samples)
    return MCEstimate(N * mean, se_re, samples)
