import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tomodeco.su_algebra import (
    DimensionError,
    completeness_map,
    generate_su_generators,
    structure_constants,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def textbook_gell_mann():
    s3 = np.sqrt(3)
    m = np.zeros((8, 3, 3), dtype=complex)
    m[0][0, 1] = m[0][1, 0] = 1
    m[1][0, 1], m[1][1, 0] = -1j, 1j
    m[2] = np.diag([1, -1, 0])
    m[3][0, 2] = m[3][2, 0] = 1
    m[4][0, 2], m[4][2, 0] = -1j, 1j
    m[5][1, 2] = m[5][2, 1] = 1
    m[6][1, 2], m[6][2, 1] = -1j, 1j
    m[7] = np.diag([1, 1, -2]) / s3
    return m


# textbook label (1-based) of each canonical index
CANONICAL_TO_TEXTBOOK = [1, 4, 6, 2, 5, 7, 3, 8]


def test_n2_is_pauli():
    g = generate_su_generators(2)
    np.testing.assert_array_equal(g.generators, np.array([SX, SY, SZ]))


def test_n3_is_gell_mann_reordered():
    g = generate_su_generators(3)
    book = textbook_gell_mann()
    for ours, label in zip(g.generators, CANONICAL_TO_TEXTBOOK):
        np.testing.assert_allclose(ours, book[label - 1], atol=1e-15)


@pytest.mark.parametrize("N", range(2, 9))
def test_generator_invariants(N):
    L = generate_su_generators(N).generators
    assert L.shape == (N * N - 1, N, N)
    gram = np.einsum("aij,bji->ab", L, L)
    assert np.max(np.abs(gram - 2 * np.eye(N * N - 1))) <= 1e-12
    assert np.max(np.abs(L - L.conj().transpose(0, 2, 1))) <= 1e-14
    assert np.max(np.abs(np.trace(L, axis1=1, axis2=2))) <= 1e-14


@pytest.mark.parametrize("N", [2, 3, 5])
def test_generators_span_traceless_hermitian(N):
    L = generate_su_generators(N).generators
    # real-linear span: stack real and imaginary parts
    vecs = np.concatenate([L.real.reshape(len(L), -1), L.imag.reshape(len(L), -1)], axis=1)
    assert np.linalg.matrix_rank(vecs) == N * N - 1


def test_n5_has_24_orthogonal_generators():
    L = generate_su_generators(5).generators
    assert len(L) == 24
    np.testing.assert_allclose(np.einsum("aij,bji->ab", L, L), 2 * np.eye(24), atol=1e-12)


@pytest.mark.parametrize("bad", [1, 0, -3])
def test_rejects_small_dimension(bad):
    with pytest.raises(DimensionError):
        generate_su_generators(bad)


def test_generators_are_read_only():
    g = generate_su_generators(3)
    with pytest.raises(ValueError):
        g.generators[0, 0, 0] = 5


def test_pauli_structure_constants():
    sc = structure_constants(generate_su_generators(2))
    eps = np.zeros((3, 3, 3))
    for (a, b, c), sign in [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                            ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]:
        eps[a, b, c] = sign
    np.testing.assert_allclose(sc.f, eps, atol=1e-15)
    np.testing.assert_allclose(sc.d, 0, atol=1e-15)
    # [s_1, s_2] = 2i s_3 rebuilt from f
    L = generate_su_generators(2).generators
    np.testing.assert_allclose(2j * np.einsum("c,cij->ij", sc.f[0, 1], L), SX @ SY - SY @ SX)


def test_su3_structure_constants_against_tables():
    sc = structure_constants(generate_su_generators(3))
    idx = {label: i for i, label in enumerate(CANONICAL_TO_TEXTBOOK)}
    r3 = np.sqrt(3)
    f_table = {(1, 2, 3): 1, (1, 4, 7): .5, (1, 6, 5): .5, (2, 4, 6): .5, (2, 5, 7): .5,
               (3, 4, 5): .5, (3, 7, 6): .5, (4, 5, 8): r3 / 2, (6, 7, 8): r3 / 2}
    d_table = {(1, 1, 8): 1 / r3, (2, 2, 8): 1 / r3, (3, 3, 8): 1 / r3,
               (4, 4, 8): -1 / (2 * r3), (5, 5, 8): -1 / (2 * r3), (6, 6, 8): -1 / (2 * r3),
               (7, 7, 8): -1 / (2 * r3), (8, 8, 8): -1 / r3, (1, 4, 6): .5, (1, 5, 7): .5,
               (2, 5, 6): .5, (3, 4, 4): .5, (3, 5, 5): .5, (2, 4, 7): -.5, (3, 6, 6): -.5,
               (3, 7, 7): -.5}
    f_ref = np.zeros((8, 8, 8))
    d_ref = np.zeros((8, 8, 8))
    for table, ref, sym in ((f_table, f_ref, -1), (d_table, d_ref, 1)):
        for abc, val in table.items():
            for perm in itertools.permutations(range(3)):
                parity = np.linalg.det(np.eye(3)[list(perm)])
                key = tuple(idx[abc[p]] for p in perm)
                ref[key] = val * (parity if sym < 0 else 1)
    np.testing.assert_allclose(sc.f, f_ref, atol=1e-12)
    np.testing.assert_allclose(sc.d, d_ref, atol=1e-12)
    # textbook f_123 = 1 and d_118 = 1/sqrt(3) in canonical indices
    assert sc.f[idx[1], idx[2], idx[3]] == pytest.approx(1.0, abs=1e-12)
    assert sc.d[0, 0, 7] == pytest.approx(1 / r3, abs=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_structure_constants_rebuild_algebra(N):
    g = generate_su_generators(N)
    L = g.generators
    sc = structure_constants(g)
    ab = np.einsum("aij,bjk->abik", L, L)
    ba = ab.transpose(1, 0, 2, 3)
    np.testing.assert_allclose(ab - ba, 2j * np.einsum("abc,cij->abij", sc.f, L), atol=1e-12)
    delta = np.einsum("ab,ij->abij", np.eye(len(g)), np.eye(N))
    np.testing.assert_allclose(ab + ba, 4 / N * delta + 2 * np.einsum("abc,cij->abij", sc.d, L),
                               atol=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_structure_constant_symmetries(N):
    sc = structure_constants(generate_su_generators(N))
    for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
        np.testing.assert_allclose(sc.f, -sc.f.transpose(perm), atol=1e-12)
        np.testing.assert_allclose(sc.d, sc.d.transpose(perm), atol=1e-12)


def test_completeness_examples():
    g = generate_su_generators(2)
    np.testing.assert_allclose(completeness_map(np.eye(2), g), 3 * np.eye(2), atol=1e-15)
    # sx sx sx + sy sx sy + sz sx sz = sx - sx - sx
    np.testing.assert_allclose(completeness_map(SX, g), -SX, atol=1e-15)


@given(N=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_completeness_relation(N, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    closed = 2 * (np.trace(X) * np.eye(N) - X / N)
    got = completeness_map(X, generate_su_generators(N))
    assert np.linalg.norm(got - closed) <= 1e-10 * np.linalg.norm(closed)


def test_completeness_dimension_mismatch():
    with pytest.raises(DimensionError):
        completeness_map(np.eye(3), generate_su_generators(2))
