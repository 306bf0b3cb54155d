import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_partial_trace
from qcorr.errors import (
    DimensionMismatch,
    IncompleteProjectorSet,
    InvalidSubsystem,
    NotADensityOperator,
    NotNormalized,
    UnknownPreset,
    WeightSumInvalid,
)
from qcorr.linalg import hermitian_eigs, random_unitary
from qcorr.states import (
    PRESET_NAMES,
    DensityOperator,
    MixtureSpec,
    StateVector,
    bell_projectors,
    density_from_ket,
    embed,
    maximally_mixed,
    mix,
    named_state,
    partial_trace,
    partial_transpose,
    product_ket,
    projective_measure,
    projector_of,
    random_density,
)

S2 = np.sqrt(2)


def P(*names):
    return density_from_ket(product_ket(*names))


def test_four_particle_state_amplitudes():
    amps = named_state("four_particle_Psi").amplitudes
    expected = np.zeros(16)
    expected[0b0101] = 1 / S2  # up down up down
    expected[0b1010] = -1 / S2
    np.testing.assert_allclose(amps, expected, atol=0)


def test_psi_minus_amplitudes():
    np.testing.assert_allclose(named_state("psi_minus").amplitudes, [0, 1 / S2, -1 / S2, 0])


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_normalized(name):
    a = named_state(name).amplitudes
    assert abs(np.vdot(a, a) - 1) <= 1e-12


def test_b_states_orthogonal_pairs():
    assert abs(np.vdot(named_state("b_plus").amplitudes, named_state("b_minus").amplitudes)) < 1e-15
    assert abs(np.vdot(named_state("bprime_plus").amplitudes, named_state("bprime_minus").amplitudes)) < 1e-15


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        named_state("singlet")


def test_state_vector_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        StateVector(1, [1.0, 1.0])


def test_density_from_ket_basis():
    np.testing.assert_array_equal(density_from_ket(named_state("up")).matrix, np.diag([1, 0]))


def test_density_from_singlet_matches_pauli_expansion():
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    expected = 0.25 * (np.eye(4) - np.kron(sz, sz) - np.kron(sx, sx) - np.kron(sy, sy))
    np.testing.assert_allclose(density_from_ket(named_state("psi_minus")).matrix, expected, atol=1e-15)


def test_four_particle_projector_rank_one():
    w = density_from_ket(named_state("four_particle_Psi"))
    assert w.matrix.shape == (16, 16)
    assert np.trace(w.matrix) == pytest.approx(1.0, abs=1e-15)
    assert np.max(np.abs(w.matrix @ w.matrix - w.matrix)) <= 1e-10


def test_density_operator_invariants_enforced():
    with pytest.raises(NotADensityOperator):
        DensityOperator(1, np.diag([0.6, 0.6]))
    with pytest.raises(NotADensityOperator):
        DensityOperator(1, np.diag([1.5, -0.5]))
    with pytest.raises(NotADensityOperator):
        DensityOperator(1, np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(DimensionMismatch):
        DensityOperator(2, np.eye(2) / 2)


def test_density_operator_is_immutable():
    w = maximally_mixed(1)
    with pytest.raises(ValueError):
        w.matrix[0, 0] = 1.0


def test_mix_singleton():
    w = random_density(2, np.random.default_rng(0))
    np.testing.assert_allclose(mix([(1.0, w)]).matrix, w.matrix)


def test_mix_psi_pair_is_classical_mixture():
    lhs = mix([(0.5, P("psi_plus")), (0.5, P("psi_minus"))])
    rhs = 0.5 * (P("up", "down").matrix + P("down", "up").matrix)
    np.testing.assert_allclose(lhs.matrix, rhs, atol=1e-15)


def test_mix_flow_state_matrix():
    w = mix([(0.5, P("up", "psi_minus")), (0.5, P("down", "psi_plus"))])
    expected = 0.5 * (np.kron(np.diag([1, 0]), projector_of("psi_minus")) + np.kron(np.diag([0, 1]), projector_of("psi_plus")))
    np.testing.assert_allclose(w.matrix, expected, atol=1e-15)
    assert np.trace(w.matrix) == pytest.approx(1.0)


def test_mix_errors():
    with pytest.raises(WeightSumInvalid):
        MixtureSpec(((0.5, maximally_mixed(1)), (0.4, maximally_mixed(1))))
    with pytest.raises(WeightSumInvalid):
        MixtureSpec(((1.5, maximally_mixed(1)), (-0.5, maximally_mixed(1))))
    with pytest.raises(DimensionMismatch):
        MixtureSpec(((0.5, maximally_mixed(1)), (0.5, maximally_mixed(2))))


def test_partial_trace_product():
    w = P("up", "down")
    np.testing.assert_allclose(partial_trace(w, {1}).matrix, np.diag([1, 0]))
    np.testing.assert_allclose(partial_trace(w, {2}).matrix, np.diag([0, 1]))


def test_partial_trace_singlet_is_maximally_mixed():
    np.testing.assert_allclose(partial_trace(P("psi_minus"), {1}).matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_four_particle_pair():
    w = density_from_ket(named_state("four_particle_Psi"))
    oracle = brute_partial_trace(w.matrix, 4, [1, 2])
    np.testing.assert_allclose(oracle, 0.5 * (P("up", "down").matrix + P("down", "up").matrix), atol=1e-15)
    np.testing.assert_allclose(partial_trace(w, {1, 2}).matrix, oracle, atol=1e-15)


@pytest.mark.parametrize("keep", [(1,), (2,), (3,), (1, 3), (2, 3), (1, 4), (1, 2, 4), (1, 2, 3)])
def test_partial_trace_matches_brute_force(rng, keep):
    n = max(keep[-1], 3) if keep[-1] < 4 else 4
    w = random_density(n, rng)
    np.testing.assert_allclose(partial_trace(w, keep).matrix, brute_partial_trace(w.matrix, n, keep), atol=1e-13)


def test_partial_trace_composes(rng):
    w = random_density(4, rng)
    stepwise = partial_trace(partial_trace(w, {1, 2}), {1})
    direct = partial_trace(w, {1})
    assert np.max(np.abs(stepwise.matrix - direct.matrix)) <= 1e-12


@pytest.mark.parametrize("keep", [set(), {0}, {3}])
def test_partial_trace_invalid(keep):
    with pytest.raises(InvalidSubsystem):
        partial_trace(P("up", "down"), keep)


def test_partial_transpose_singlet():
    pt = partial_transpose(P("psi_minus"), {2})
    assert np.min(np.linalg.eigvalsh(pt)) == pytest.approx(-0.5, abs=1e-12)


def test_partial_transpose_product_keeps_spectrum(rng):
    from qcorr.states import random_product_state

    w = random_product_state(2, rng)
    np.testing.assert_allclose(np.linalg.eigvalsh(partial_transpose(w, {2})), np.linalg.eigvalsh(w.matrix), atol=1e-12)


def test_partial_transpose_mixture_nonnegative():
    w = mix([(0.5, P("psi_plus")), (0.5, P("psi_minus"))])
    assert hermitian_eigs(partial_transpose(w, {2})).values[0] >= -1e-12


def test_partial_transpose_involution_and_trace(rng):
    w = random_density(3, rng)
    pt = partial_transpose(w, {1, 3})
    assert np.max(np.abs(pt - pt.conj().T)) <= 1e-12
    assert np.trace(pt) == pytest.approx(1.0)
    np.testing.assert_allclose(partial_transpose(pt, {1, 3}, qubit_count=3), w.matrix, atol=1e-15)


def test_partial_transpose_full_is_transpose(rng):
    w = random_density(2, rng)
    np.testing.assert_allclose(partial_transpose(w, {1, 2}), w.matrix.T)


def test_embed_matches_kron():
    op = projector_of("phi_plus")
    np.testing.assert_allclose(embed(op, (2, 3), 4), np.kron(np.kron(np.eye(2), op), np.eye(2)))


def test_embed_non_adjacent():
    sz = np.diag([1, -1])
    sx = np.array([[0, 1], [1, 0]])
    op = np.kron(sz, sx)
    expected = np.kron(np.kron(sz, np.eye(2)), sx)
    np.testing.assert_allclose(embed(op, (1, 3), 3), expected)
    # reversed label order swaps the factors
    np.testing.assert_allclose(embed(op, (3, 1), 3), np.kron(np.kron(sx, np.eye(2)), sz))


def test_measure_eigenstate():
    out = projective_measure(P("up"), [np.diag([1, 0]), np.diag([0, 1])])
    assert [o.probability for o in out] == [1.0, 0.0]
    assert out[0].reachable and not out[1].reachable


def test_measure_bell_basis_on_singlet():
    out = projective_measure(P("psi_minus"), bell_projectors())
    np.testing.assert_allclose([o.probability for o in out], [1, 0, 0, 0], atol=1e-15)


def test_measure_bell_on_middle_pair_of_two_singlets():
    ket = np.kron(named_state("psi_minus").amplitudes, named_state("psi_minus").amplitudes)
    t = ket.reshape(2, 2, 2, 2)
    for label, o in zip(["psi_minus", "psi_plus", "phi_plus", "phi_minus"],
                        projective_measure(density_from_ket(StateVector(4, ket)),
                                           [embed(p, (2, 3), 4) for p in bell_projectors()])):
        bell = named_state(label).amplitudes.reshape(2, 2)
        # contract qubits 2,3 with <bell| and take the norm of what is left on 1,4
        rest = np.einsum("bc,abcd->ad", bell.conj(), t)
        assert o.probability == pytest.approx(float(np.sum(np.abs(rest) ** 2)), abs=1e-12)
        assert o.probability == pytest.approx(0.25, abs=1e-12)


def test_measure_rejects_incomplete_set():
    with pytest.raises(IncompleteProjectorSet):
        projective_measure(P("up"), [np.diag([1, 0])])
    with pytest.raises(IncompleteProjectorSet):
        projective_measure(P("up"), [np.diag([1, 0]), np.diag([1, 1])])


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=3))
def test_measure_probabilities_sum_to_one(seed, n):
    rng = np.random.default_rng(seed)
    w = random_density(n, rng)
    u = random_unitary(1 << n, rng)
    _, basis = hermitian_eigs(u + u.conj().T)
    projs = [np.outer(basis[:, i], basis[:, i].conj()) for i in range(1 << n)]
    out = projective_measure(w, projs)
    assert abs(sum(o.probability for o in out) - 1.0) <= 1e-10
    assert all(o.probability >= 0 for o in out)
