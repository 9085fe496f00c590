import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spa_singlet.linalg import (
    ConvergenceError,
    DimensionError,
    NotHermitianError,
    choi_matrix,
    hermitian_eigensystem,
    hermitian_eigensystems,
    overlap,
    partial_trace,
    partial_transpose_b,
    tensor_product,
)
from spa_singlet.states import make_bell, random_densities

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def pt_by_indices(rho):
    # independent index-loop oracle
    out = np.zeros_like(rho)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + l, 2 * k + j] = rho[2 * i + j, 2 * k + l]
    return out


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tensor_product_examples():
    np.testing.assert_array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(tensor_product(SZ, SZ), np.diag([1, -1, -1, 1]))
    xx = tensor_product(SX, SX)
    basis0 = np.eye(4)[0]
    np.testing.assert_array_equal(xx @ basis0, np.eye(4)[3])


def test_partial_transpose_matches_index_oracle():
    rng = np.random.default_rng(1)
    for rho in random_densities(11, 50):
        np.testing.assert_array_equal(partial_transpose_b(rho), pt_by_indices(rho))
    h = random_hermitian(rng, 4)
    assert np.allclose(partial_transpose_b(h), partial_transpose_b(h).conj().T)


def test_partial_transpose_of_singlet_spectrum():
    singlet = make_bell("psi-").projector()
    vals = np.linalg.eigvalsh(partial_transpose_b(singlet))
    np.testing.assert_allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


def test_partial_transpose_fixes_diagonal_states():
    p = np.zeros((4, 4), dtype=complex)
    p[0, 0] = 1
    np.testing.assert_array_equal(partial_transpose_b(p), p)


def test_partial_transpose_dimension_error():
    with pytest.raises(DimensionError):
        partial_transpose_b(np.eye(3))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_partial_transpose_involution_and_trace(seed):
    rho = random_densities(seed, 1)[0]
    np.testing.assert_array_equal(partial_transpose_b(partial_transpose_b(rho)), rho)
    assert np.trace(partial_transpose_b(rho)) == pytest.approx(np.trace(rho), abs=1e-15)


def test_partial_trace_examples():
    p00 = np.zeros((4, 4)); p00[0, 0] = 1
    np.testing.assert_allclose(partial_trace(p00, "A"), np.diag([1, 0]))
    np.testing.assert_allclose(partial_trace(make_bell("psi+").projector(), "A"), np.eye(2) / 2)
    np.testing.assert_allclose(partial_trace(np.eye(4) / 4, "B"), np.eye(2) / 2)


def test_partial_trace_of_product_recovers_factors():
    rng = np.random.default_rng(3)
    a = random_hermitian(rng, 2)
    b = random_hermitian(rng, 2)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), "A"), a * np.trace(b), atol=1e-14)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), "B"), b * np.trace(a), atol=1e-14)
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), "C")


def test_partial_trace_preserves_trace_and_positivity():
    for rho in random_densities(5, 100):
        for keep in "AB":
            red = partial_trace(rho, keep)
            assert np.trace(red) == pytest.approx(1.0, abs=1e-14)
            assert np.linalg.eigvalsh(red).min() > -1e-14


def test_eigensystem_examples():
    es = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0, 0.0]))
    np.testing.assert_allclose(es.values, [0, 1, 2, 3])
    es = hermitian_eigensystem(SX)
    np.testing.assert_allclose(es.values, [-1, 1], atol=1e-15)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(es.vectors[:, 0], [s, -s], atol=1e-14)
    np.testing.assert_allclose(es.vectors[:, 1], [s, s], atol=1e-14)


def test_eigensystem_against_numpy_and_invariants():
    rng = np.random.default_rng(7)
    for n in (2, 4, 8, 16):
        for _ in range(20):
            h = random_hermitian(rng, n)
            es = hermitian_eigensystem(h)
            np.testing.assert_allclose(es.values, np.linalg.eigvalsh(h), atol=1e-12)
            assert np.all(np.diff(es.values) >= 0)
            for i in range(n):
                v = es.vectors[:, i]
                assert np.max(np.abs(h @ v - es.values[i] * v)) <= 1e-10
                assert abs(np.linalg.norm(v) - 1) <= 1e-12
            gram = es.vectors.conj().T @ es.vectors
            assert np.max(np.abs(gram - np.eye(n))) <= 1e-10


def test_spectral_reconstruction_1000_matrices():
    rng = np.random.default_rng(2024)
    stack = np.array([random_hermitian(rng, 4) for _ in range(1000)])
    for h, es in zip(stack, hermitian_eigensystems(stack)):
        rebuilt = (es.vectors * es.values) @ es.vectors.conj().T
        assert np.max(np.abs(rebuilt - h)) <= 1e-10


def test_single_and_batched_paths_agree():
    rng = np.random.default_rng(8)
    stack = np.array([random_hermitian(rng, 4) for _ in range(30)])
    for h, es in zip(stack, hermitian_eigensystems(stack)):
        single = hermitian_eigensystem(h)
        np.testing.assert_allclose(single.values, es.values, atol=1e-12)


def test_eigenvector_phase_fix():
    rng = np.random.default_rng(9)
    es = hermitian_eigensystem(random_hermitian(rng, 4))
    for i in range(4):
        v = es.vectors[:, i]
        k = np.argmax(np.abs(v))
        assert v[k].imag == pytest.approx(0.0, abs=1e-15) and v[k].real > 0


def test_degenerate_order_is_deterministic():
    es = hermitian_eigensystem(np.eye(4) / 4)
    np.testing.assert_allclose(es.vectors[:, 0], [1, 0, 0, 0])
    again = hermitian_eigensystem(np.eye(4) / 4)
    np.testing.assert_array_equal(es.vectors, again.vectors)


def test_eigensystem_errors():
    with pytest.raises(NotHermitianError):
        hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))
    rng = np.random.default_rng(1)
    with pytest.raises(ConvergenceError):
        hermitian_eigensystem(random_hermitian(rng, 6), max_sweeps=1)


def test_overlap_examples():
    rho = random_densities(4, 1)[0]
    assert overlap(rho, np.eye(4)) == pytest.approx(1.0, abs=1e-14)
    assert overlap(np.diag([1, 0]), np.diag([0, 1])) == 0.0
    with pytest.raises(DimensionError):
        overlap(np.eye(2), np.eye(4))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_overlap_symmetric_and_positive(seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, 4), random_hermitian(rng, 4)
    assert overlap(a, b) == pytest.approx(overlap(b, a), abs=1e-12)
    assert overlap(a, a) >= 0


def test_choi_matrix_examples():
    d = 2
    phi = np.zeros(4); phi[[0, 3]] = 1 / np.sqrt(2)
    np.testing.assert_allclose(choi_matrix([np.eye(2)]), np.outer(phi, phi), atol=1e-15)
    depol = choi_matrix(lambda x: np.trace(x) * np.eye(d) / d, dim=d)
    np.testing.assert_allclose(depol, np.eye(4) / 4, atol=1e-15)
    swap = np.eye(4)[[0, 2, 1, 3]]
    transpose = choi_matrix(lambda x: x.T, dim=2)
    np.testing.assert_allclose(transpose, swap / 2)
    np.testing.assert_allclose(np.linalg.eigvalsh(transpose), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_choi_matrix_trace_and_errors():
    k0 = np.diag([1, np.sqrt(0.7)])
    k1 = np.array([[0, np.sqrt(0.3)], [0, 0]])
    assert np.trace(choi_matrix([k0, k1])) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        choi_matrix([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        choi_matrix(lambda x: x)
