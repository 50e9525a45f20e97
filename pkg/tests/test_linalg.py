"""Tests for the dense multipartite linear-algebra layer."""

import math

import numpy as np
import pytest

from mmesdyn.linalg import (
    DensityMatrix,
    check_state,
    eigvals_hermitian,
    hs_norm_sq,
    partial_trace,
    partial_transpose,
    purity,
    random_density_matrix,
    random_unitary,
    tensor,
    trace_norm,
)

rng = np.random.default_rng(1234)


def bell_state():
    v = np.zeros(4)
    v[0] = v[3] = 1 / math.sqrt(2)
    return DensityMatrix(np.outer(v, v), (2, 2))


def test_density_matrix_shape_bookkeeping():
    rho = random_density_matrix((2, 3, 4), rng)
    assert rho.side == 24
    assert rho.n_subsystems == 3
    assert rho.dims == (2, 3, 4)


def test_density_matrix_rejects_dim_mismatch():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(6) / 6, (2, 4))


def test_random_density_matrix_is_a_state():
    for dims in ((2, 4), (3, 2), (2, 2, 2)):
        rho = random_density_matrix(dims, rng)
        check_state(rho)
        eigs = eigvals_hermitian(rho.data)
        assert eigs[0] >= -1e-12
        assert abs(np.trace(rho.data) - 1.0) < 1e-12


def test_random_density_matrix_rank_control():
    rho = random_density_matrix((2, 4), rng, rank=2)
    eigs = eigvals_hermitian(rho.data)
    assert np.sum(eigs > 1e-10) == 2


def test_tensor_combines_dims_and_traces():
    a = random_density_matrix((2,), rng)
    b = random_density_matrix((3,), rng)
    ab = tensor(a, b)
    assert ab.dims == (2, 3)
    assert abs(np.trace(ab.data) - 1.0) < 1e-12
    # marginals of a product state are the factors
    assert np.allclose(partial_trace(ab, (0,)).data, a.data, atol=1e-12)
    assert np.allclose(partial_trace(ab, (1,)).data, b.data, atol=1e-12)


def test_partial_trace_of_random_tripartite():
    rho = random_density_matrix((2, 3, 2), rng)
    red = partial_trace(rho, (0, 2))
    assert red.dims == (2, 2)
    assert abs(np.trace(red.data) - 1.0) < 1e-12
    # tracing in two steps agrees with one step
    step = partial_trace(partial_trace(rho, (0, 1)), (0,))
    assert np.allclose(step.data, partial_trace(rho, (0,)).data, atol=1e-12)


def test_partial_transpose_involution_and_trace():
    rho = random_density_matrix((2, 4), rng)
    pt = partial_transpose(rho, 0)
    assert abs(np.trace(pt.data) - 1.0) < 1e-12
    assert np.allclose(partial_transpose(pt, 0).data, rho.data, atol=1e-14)
    # transposing both subsystems is the full transpose
    both = partial_transpose(partial_transpose(rho, 0), 1)
    assert np.allclose(both.data, rho.data.T, atol=1e-14)


def test_partial_transpose_keeps_hermiticity():
    rho = random_density_matrix((2, 3), rng)
    pt = partial_transpose(rho, 1).data
    assert np.allclose(pt, pt.conj().T, atol=1e-12)


def test_eigvals_hermitian_sorted_and_correct():
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    m = m + m.conj().T
    eigs = eigvals_hermitian(m)
    assert np.all(np.diff(eigs) >= 0)
    assert np.allclose(eigs, np.sort(np.linalg.eigvalsh(m)), atol=1e-12)


def test_trace_norm_matches_eigenvalue_sum():
    m = rng.normal(size=(5, 5))
    m = m + m.T
    assert abs(trace_norm(m) - np.sum(np.abs(np.linalg.eigvalsh(m)))) < 1e-10


def test_hs_norm_and_purity():
    rho = random_density_matrix((2, 2), rng)
    assert abs(hs_norm_sq(rho.data) - np.sum(np.abs(rho.data) ** 2)) < 1e-12
    assert 0.25 - 1e-12 <= purity(rho) <= 1.0 + 1e-12
    assert abs(purity(bell_state()) - 1.0) < 1e-12


def test_check_state_rejects_bad_inputs():
    with pytest.raises(ValueError):
        check_state(DensityMatrix(np.eye(4) / 2.0, (2, 2)))  # trace 2
    bad = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        check_state(DensityMatrix(bad, (2, 2)))  # negative eigenvalue


def test_random_unitary_is_unitary():
    u = random_unitary(5, rng)
    assert np.allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_ppt_detects_bell_entanglement():
    eigs = eigvals_hermitian(partial_transpose(bell_state(), 0).data)
    assert eigs[0] < -0.49
    sep = tensor(random_density_matrix((2,), rng), random_density_matrix((4,), rng))
    assert eigvals_hermitian(partial_transpose(sep, 0).data)[0] >= -1e-12
