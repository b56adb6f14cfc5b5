"""Generalized Gell-Mann basis of su(N) and the identities built on it.

Generators are normalised so that ``tr(l_a l_b) = 2 delta_ab``. The ordering is
fixed: symmetric off-diagonal pairs (j, k) with j < k in lexicographic order,
then the antisymmetric pairs in the same order, then the N - 1 diagonal
generators. For N = 2 this yields (sigma_x, sigma_y, sigma_z).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class DimensionError(ValueError):
    """Raised for an invalid Hilbert-space dimension or mismatched shapes."""


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    dim: int
    generators: np.ndarray  # shape (N^2 - 1, N, N), complex, read-only

    def __len__(self) -> int:
        return self.generators.shape[0]

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, a: int) -> np.ndarray:
        return self.generators[a]


@dataclass(frozen=True, eq=False)
class StructureConstants:
    f: np.ndarray  # totally antisymmetric
    d: np.ndarray  # totally symmetric


def _pairs(n: int):
    return [(j, k) for j in range(n) for k in range(j + 1, n)]


@lru_cache(maxsize=None)
def generate_su_generators(N: int) -> GeneratorSet:
    """Return the N^2 - 1 generalized Gell-Mann matrices in canonical order."""
    if int(N) != N or N < 2:
        raise DimensionError(f"dimension must be an integer >= 2, got {N!r}")
    N = int(N)
    mats = []
    for j, k in _pairs(N):
        m = np.zeros((N, N), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        mats.append(m)
    for j, k in _pairs(N):
        m = np.zeros((N, N), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for l in range(1, N):
        diag = np.zeros(N)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    gens = np.array(mats)
    gens.flags.writeable = False
    return GeneratorSet(dim=N, generators=gens)


def structure_constants(g: GeneratorSet) -> StructureConstants:
    """Antisymmetric and symmetric structure constants from trace formulas.

    ``f_abc = tr([l_a, l_b] l_c) / 4i`` and ``d_abc = tr({l_a, l_b} l_c) / 4``.
    """
    L = g.generators
    # t[a, b, c] = tr(l_a l_b l_c)
    t = np.einsum("aij,bjk,cki->abc", L, L, L)
    f = (t - t.transpose(1, 0, 2)) / 4j
    d = (t + t.transpose(1, 0, 2)) / 4
    return StructureConstants(f=np.ascontiguousarray(f.real), d=np.ascontiguousarray(d.real))


def completeness_map(X: np.ndarray, g: GeneratorSet) -> np.ndarray:
    """Explicit sum ``sum_a l_a X l_a``.

    Equals ``2 (tr(X) 1 - X / N)`` for any square X; that closed form is
    checked in the tests, not used here.
    """
    X = np.asarray(X)
    if X.shape != (g.dim, g.dim):
        raise DimensionError(f"expected a {g.dim}x{g.dim} matrix, got shape {X.shape}")
    return np.einsum("aij,jk,akl->il", g.generators, X, g.generators)
