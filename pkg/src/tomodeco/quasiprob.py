"""Stratonovich-Weyl quasiprobability distributions on projective Hilbert space.

The order parameter ``sigma`` interpolates between the Husimi function
(sigma = -1), a Wigner-type distribution (sigma = 0) and the P-representation
(sigma = +1). Every member is an affine rescaling of the Husimi function:

    W(psi) = 1/N + (N + 1)**((sigma + 1) / 2) * (Q(psi) - 1/N)

which is how :func:`evaluate_w` computes it. The kernel matrix is kept for
cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import tomographic_iterate
from .states import husimi, min_husimi
from .su_algebra import DimensionError, GeneratorSet


@dataclass(frozen=True)
class QuasiprobSpec:
    sigma: float
    dim: int

    def __post_init__(self):
        if not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be finite, got {self.sigma}")
        if self.dim < 2:
            raise DimensionError(f"dimension must be >= 2, got {self.dim}")

    @property
    def scale(self) -> float:
        """Weight ``(N + 1)**((sigma + 1) / 2)`` of the traceless part."""
        return float(self.dim + 1) ** ((self.sigma + 1) / 2)

    def shifted(self, dsigma: float) -> "QuasiprobSpec":
        return QuasiprobSpec(self.sigma + dsigma, self.dim)


def sw_kernel(psi: np.ndarray, spec: QuasiprobSpec, g: GeneratorSet) -> np.ndarray:
    """Kernel ``1/N + (1/2) (N+1)**((1+sigma)/2) sum_a <psi|l_a|psi> l_a``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (spec.dim,) or g.dim != spec.dim:
        raise DimensionError("state, spec and generator set dimensions disagree")
    expect = np.einsum("i,aij,j->a", psi.conj(), g.generators, psi).real
    N = spec.dim
    return np.eye(N) / N + 0.5 * spec.scale * np.einsum("a,aij->ij", expect, g.generators)


def evaluate_w(rho: np.ndarray, psi: np.ndarray, spec: QuasiprobSpec):
    """``W(psi) = tr(rho w(psi))`` via the Husimi relation.

    ``psi`` may be a single state or an ``(S, N)`` batch.
    """
    rho = np.asarray(rho)
    if rho.shape != (spec.dim, spec.dim):
        raise DimensionError(f"state of shape {rho.shape} does not match dim {spec.dim}")
    N = spec.dim
    return 1.0 / N + spec.scale * (husimi(rho, psi) - 1.0 / N)


def w_min_formula(spec: QuasiprobSpec) -> float:
    """Lowest value any state's distribution can reach, attained by pure states."""
    return (1.0 - spec.scale) / spec.dim


def min_w(rho: np.ndarray, spec: QuasiprobSpec) -> float:
    """``min_psi W(psi)`` for the given state, from its smallest eigenvalue."""
    N = spec.dim
    return 1.0 / N + spec.scale * (min_husimi(rho) - 1.0 / N)


def w_after_k_steps(rho: np.ndarray, psi: np.ndarray, spec: QuasiprobSpec, k: int):
    """Distribution of order sigma after k measurements.

    Equal to the initial distribution of order ``sigma - 2k``.
    """
    return evaluate_w(tomographic_iterate(rho, k).state, psi, spec)
