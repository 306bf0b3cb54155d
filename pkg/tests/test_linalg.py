import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorr import _backend, _fallback
from qcorr.errors import DimensionMismatch, NotHermitian
from qcorr.linalg import hermitian_eigs, kron, random_unitary, trace_distance
from qcorr.states import density_from_ket, maximally_mixed, named_state, projector_of

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1, -1]).astype(complex)


def random_matrix(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, n):
    g = random_matrix(rng, (n, n))
    return g + g.conj().T


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_diagonal():
    assert np.array_equal(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))


def test_kron_sigma_x_sigma_z_entries():
    m = kron(SX, SZ)
    # row 0 = <uu|: sx maps u->d, sz keeps u with +1  => only column |du> = 2
    assert m[0, 3] == 0
    assert m[0, 2] == 1


def test_kron_mixed_product(rng):
    a, b, c, d = (random_matrix(rng, (2, 2)) for _ in range(4))
    np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


def test_kron_associative_and_bilinear(rng):
    a, b, c = (random_matrix(rng, (2, 2)) for _ in range(3))
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)
    alpha = 0.3 - 1.2j
    np.testing.assert_allclose(kron(alpha * a + b, c), alpha * kron(a, c) + kron(b, c), atol=1e-12)


def test_kron_trace_multiplies(rng):
    a, b = random_hermitian(rng, 2), random_hermitian(rng, 4)
    assert np.trace(kron(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


@pytest.mark.parametrize(
    "matrix, expected",
    [(SZ, [-1, 1]), (SX, [-1, 1])],
    ids=["sigma_z", "sigma_x"],
)
def test_eigs_pauli(matrix, expected):
    np.testing.assert_allclose(hermitian_eigs(matrix).values, expected, atol=1e-14)


def test_eigs_singlet_projector():
    np.testing.assert_allclose(hermitian_eigs(projector_of("psi_minus")).values, [0, 0, 0, 1], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_eigs_reconstruction_and_orthonormality(rng, n):
    h = random_hermitian(rng, n)
    vals, vecs = hermitian_eigs(h)
    assert np.all(np.diff(vals) >= 0)
    assert np.max(np.abs(h - vecs @ np.diag(vals) @ vecs.conj().T)) <= 1e-10
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(n))) <= 1e-10
    # independent LAPACK oracle
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(h), atol=1e-10)


def test_eigs_degenerate_spectrum(rng):
    u = random_unitary(16, rng)
    h = u @ np.diag([1.0] * 8 + [-1.0] * 8) @ u.conj().T
    vals, vecs = hermitian_eigs(h)
    np.testing.assert_allclose(vals, [-1.0] * 8 + [1.0] * 8, atol=1e-10)
    assert np.max(np.abs(h - vecs @ np.diag(vals) @ vecs.conj().T)) <= 1e-10


def test_eigs_unitary_invariance(rng):
    h = random_hermitian(rng, 8)
    _, basis = hermitian_eigs(random_hermitian(rng, 8))
    np.testing.assert_allclose(hermitian_eigs(basis @ h @ basis.conj().T).values, hermitian_eigs(h).values, atol=1e-10)


def test_eigs_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigs(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eigs_hermitian_tolerance_is_tight():
    m = np.array([[1, 1e-11], [0, 1]], dtype=complex)
    with pytest.raises(NotHermitian):
        hermitian_eigs(m)
    hermitian_eigs(np.array([[1, 1e-13], [0, 1]], dtype=complex))


@pytest.mark.parametrize("impl", sorted(_backend.IMPLEMENTATIONS))
def test_each_backend_solves(rng, impl):
    h = random_hermitian(rng, 16)
    vals, vecs, sweeps = _backend.IMPLEMENTATIONS[impl].jacobi_hermitian(h, 1e-13, 100)
    assert 0 < sweeps < 100
    np.testing.assert_allclose(np.sort(vals), np.linalg.eigvalsh(h), atol=1e-10)


def test_trace_distance_examples():
    w = density_from_ket(named_state("four_particle_Psi"))
    up = density_from_ket(named_state("up"))
    down = density_from_ket(named_state("down"))
    assert trace_distance(w, w) == pytest.approx(0.0, abs=1e-14)
    assert trace_distance(up, down) == pytest.approx(1.0, abs=1e-14)
    assert trace_distance(up, maximally_mixed(1)) == pytest.approx(0.5, abs=1e-14)


def test_trace_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        trace_distance(maximally_mixed(1), maximally_mixed(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_trace_distance_symmetric_and_bounded(seed):
    from qcorr.states import random_density

    rng = np.random.default_rng(seed)
    a, b = random_density(2, rng), random_density(2, rng)
    d = trace_distance(a, b)
    assert d == pytest.approx(trace_distance(b, a), abs=1e-12)
    assert 0.0 <= d <= 1.0 + 1e-12


def test_fallback_matches_lapack(rng):
    h = random_hermitian(rng, 6)
    vals, _, _ = _fallback.jacobi_hermitian(h, 1e-13, 100)
    np.testing.assert_allclose(np.sort(vals), np.linalg.eigvalsh(h), atol=1e-10)
