import math
from math import comb, factorial

import numpy as np
import pytest
from scipy.linalg import expm

from morsim import (
    KetState,
    Mode,
    apply_two_mode_unitary,
    inner_product,
    make_basis_state,
    noncollinear_state,
    normally_ordered_moment,
    projection_probability,
    rotation_matrix,
    two_mode_unitary_subspace_matrix,
)

AH, AV, BH, BV = Mode.AH, Mode.AV, Mode.BH, Mode.BV


def lift_by_expansion(u, n):
    """Independent small-n lift: literal binomial expansion of the substituted
    creation-operator monomials with exact factorial normalization."""
    m = np.zeros((n + 1, n + 1), dtype=complex)
    for kin in range(n + 1):
        n1, n2 = n - kin, kin
        for k in range(n + 1):
            j = n - k
            coeff = 0j
            for a in range(n1 + 1):
                b = j - a
                if b < 0 or b > n2:
                    continue
                coeff += (
                    comb(n1, a) * u[0, 0] ** a * u[0, 1] ** (n1 - a)
                    * comb(n2, b) * u[1, 0] ** b * u[1, 1] ** (n2 - b)
                )
            m[k, kin] = coeff * math.sqrt(factorial(j) * factorial(n - j)) / math.sqrt(
                factorial(n1) * factorial(n2)
            )
    return m


def random_unitary(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, _ = np.linalg.qr(a)
    return q


def test_make_basis_state_examples():
    for occ in [(1, 1, 1, 1), (0, 0, 0, 0), (2, 0, 0, 0)]:
        state = make_basis_state(occ)
        assert state.amplitude(occ) == 1.0
        assert state.norm_squared() == 1.0
        assert state.truncation_tail == 0.0


def test_make_basis_state_rejects_negative():
    with pytest.raises(ValueError):
        make_basis_state((1, -1, 0, 0))


def test_inner_product_normalization_and_orthogonality():
    psi = noncollinear_state(0.7, n_max=12)
    norm = inner_product(psi, psi)
    assert abs(norm - psi.norm_squared()) < 1e-15
    assert abs(norm.imag) < 1e-15
    assert inner_product(make_basis_state((1, 0, 0, 0)), make_basis_state((0, 1, 0, 0))) == 0


def test_inner_product_conjugate_linear_in_bra():
    bra = KetState(amplitudes={(1, 0, 0, 0): 0.6 + 0.8j})
    ket = KetState(amplitudes={(1, 0, 0, 0): 1.0 + 0j})
    assert inner_product(bra, ket) == pytest.approx(0.6 - 0.8j)


def test_inner_product_noncollinear_four_photon_component():
    # |1111> sits in the n=2, m=1 term: amplitude -tanh^2 r / cosh^2 r
    amp = inner_product(make_basis_state((1, 1, 1, 1)), noncollinear_state(1.0, n_max=8))
    expected = math.tanh(1.0) ** 2 / math.cosh(1.0) ** 2
    assert abs(amp + expected) < 1e-15
    assert abs(abs(amp) ** 2 - math.tanh(1.0) ** 4 / math.cosh(1.0) ** 4) < 1e-15


def test_subspace_matrix_identity_lift():
    m = two_mode_unitary_subspace_matrix(np.eye(2), 3)
    assert np.max(np.abs(m - np.eye(4))) < 1e-14


def test_subspace_matrix_hong_ou_mandel():
    u = np.array([[1, 1], [-1, 1]], dtype=complex) / math.sqrt(2)
    col = two_mode_unitary_subspace_matrix(u, 2)[:, 1]  # image of |1,1>
    assert abs(col[0] + 1 / math.sqrt(2)) < 1e-14
    assert abs(col[1]) < 1e-14
    assert abs(col[2] - 1 / math.sqrt(2)) < 1e-14


def test_subspace_matrix_rotation_on_one_one_matches_closed_form():
    theta = 0.9
    col = two_mode_unitary_subspace_matrix(rotation_matrix(theta), 2)[:, 1]
    phase = col[1] / abs(col[1])
    col = col / phase
    assert abs(col[0] - math.sin(theta) / math.sqrt(2)) < 1e-13
    assert abs(col[1] - math.cos(theta)) < 1e-13
    assert abs(col[2] + math.sin(theta) / math.sqrt(2)) < 1e-13


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_subspace_matrix_matches_binomial_expansion(n):
    for seed in range(4):
        u = random_unitary(seed)
        got = two_mode_unitary_subspace_matrix(u, n)
        assert np.max(np.abs(got - lift_by_expansion(u, n))) < 1e-12


@pytest.mark.parametrize("n", [2, 4, 7, 40, 120])
def test_subspace_matrix_unitary(n):
    m = two_mode_unitary_subspace_matrix(rotation_matrix(1.1, 0.4), n)
    assert np.max(np.abs(m.conj().T @ m - np.eye(n + 1))) < 1e-12


def test_subspace_matrix_composition():
    # with the row-substitution convention the lift anti-composes:
    # applying u then v is the single matrix u @ v, so M(u v) = M(v) M(u)
    u, v = random_unitary(11), random_unitary(12)
    for n in (1, 3, 6):
        muv = two_mode_unitary_subspace_matrix(u @ v, n)
        assert np.max(np.abs(
            muv - two_mode_unitary_subspace_matrix(v, n) @ two_mode_unitary_subspace_matrix(u, n)
        )) < 1e-12
    # commuting pairs (two in-plane rotations) compose in either order
    r1, r2 = rotation_matrix(0.6), rotation_matrix(1.3)
    m12 = two_mode_unitary_subspace_matrix(r1 @ r2, 5)
    assert np.max(np.abs(
        m12 - two_mode_unitary_subspace_matrix(r1, 5) @ two_mode_unitary_subspace_matrix(r2, 5)
    )) < 1e-12


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_subspace_matrix_matches_generator_exponential(n):
    # brute force: u = expm(iG) lifts to expm(i sum (G^T)_{kl} a_k^dag a_l)
    g = np.array([[0.4, 0.3 - 0.6j], [0.3 + 0.6j, -0.2]])
    u = expm(1j * g)
    dim = n + 1
    ks = np.arange(dim)
    num = np.diag(g[0, 0] * (n - ks) + g[1, 1] * ks).astype(complex)
    hop = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        hop[k - 1, k] = g.T[0, 1] * math.sqrt((n - k + 1) * k)
        hop[k, k - 1] = g.T[1, 0] * math.sqrt((n - k + 1) * k)
    lifted_generator = num + hop
    assert np.max(np.abs(
        two_mode_unitary_subspace_matrix(u, n) - expm(1j * lifted_generator)
    )) < 1e-10


def test_subspace_matrix_rejects_non_unitary():
    with pytest.raises(ValueError):
        two_mode_unitary_subspace_matrix(np.array([[1.0, 0.1], [0.0, 1.0]]), 2)


def test_apply_unitary_identity_is_noop():
    psi = noncollinear_state(0.8, n_max=6)
    out = apply_two_mode_unitary(psi, (AH, AV), np.eye(2))
    assert set(out.amplitudes) == set(psi.amplitudes)
    for occ, amp in psi.amplitudes.items():
        assert abs(out.amplitudes[occ] - amp) < 1e-14


def test_apply_unitary_half_turn_swaps_modes():
    out = apply_two_mode_unitary(make_basis_state((1, 0, 0, 0)), (AH, AV),
                                 rotation_matrix(math.pi))
    assert len(out.amplitudes) == 1
    amp = out.amplitude((0, 1, 0, 0))
    assert abs(abs(amp) - 1.0) < 1e-14


def test_apply_unitary_rejects_identical_modes():
    with pytest.raises(ValueError):
        apply_two_mode_unitary(make_basis_state((1, 0, 0, 0)), (AH, AH), np.eye(2))


def test_apply_unitary_preserves_norm_and_other_modes():
    psi = noncollinear_state(0.9, n_max=8)
    out = apply_two_mode_unitary(psi, (AH, AV), rotation_matrix(0.7, 0.3))
    assert abs(out.norm_squared() - psi.norm_squared()) < 1e-12
    # photons in b modes unchanged per component
    def b_weight(state, nb):
        return sum(abs(a) ** 2 for occ, a in state.amplitudes.items()
                   if occ[2] + occ[3] == nb)
    for nb in range(9):
        assert abs(b_weight(out, nb) - b_weight(psi, nb)) < 1e-13


def test_apply_unitary_sequential_composition():
    u, v = random_unitary(5), random_unitary(6)
    psi = noncollinear_state(0.6, n_max=5)
    step = apply_two_mode_unitary(apply_two_mode_unitary(psi, (AH, AV), u), (AH, AV), v)
    once = apply_two_mode_unitary(psi, (AH, AV), u @ v)
    keys = set(step.amplitudes) | set(once.amplitudes)
    assert max(abs(step.amplitude(k) - once.amplitude(k)) for k in keys) < 1e-10


def test_moment_zeroth_power_is_norm():
    psi = noncollinear_state(1.1, n_max=10)
    assert abs(normally_ordered_moment(psi, (0, 0, 0, 0)) - psi.norm_squared()) < 1e-14


def test_moment_number_expectation():
    assert normally_ordered_moment(make_basis_state((2, 0, 0, 0)), (1, 0, 0, 0)) == 2.0


def test_moment_positive_on_random_states():
    rng = np.random.default_rng(3)
    occs = [(2, 1, 0, 0), (0, 3, 1, 0), (1, 1, 1, 1), (4, 0, 0, 2)]
    amps = {occ: complex(*rng.normal(size=2)) for occ in occs}
    state = KetState(amplitudes=amps)
    for powers in [(1, 0, 0, 0), (1, 1, 0, 0), (2, 2, 0, 0), (1, 1, 1, 1)]:
        assert normally_ordered_moment(state, powers) >= 0.0


def test_moment_rejects_negative_powers():
    with pytest.raises(ValueError):
        normally_ordered_moment(make_basis_state((1, 0, 0, 0)), (-1, 0, 0, 0))


def test_projection_probability_examples():
    vacuum = make_basis_state((0, 0, 0, 0))
    assert projection_probability(vacuum, (0, 0, 0, 0)) == 1.0
    assert projection_probability(vacuum, (1, 0, 0, 0)) == 0.0


def test_spectral_decomposition_inequality():
    # <a^dag2 b^dag2 a^2 b^2> >= 2! 2! P(|2,2>) on any state
    rng = np.random.default_rng(7)
    for trial in range(5):
        occs = [(2, 2, 0, 0), (3, 2, 0, 0), (2, 3, 1, 0), (4, 4, 0, 0), (0, 2, 0, 0)]
        amps = {occ: complex(*rng.normal(size=2)) for occ in occs}
        state = KetState(amplitudes=amps)
        moment = normally_ordered_moment(state, (2, 2, 0, 0))
        assert moment >= 4.0 * projection_probability(state, (2, 2, 0, 0)) - 1e-12


def test_mode_ordering_and_attributes():
    assert Mode.AH < Mode.AV < Mode.BH < Mode.BV
    assert Mode.AH.spatial == "a" and Mode.BV.spatial == "b"
    assert Mode.AH.polarization == "H" and Mode.BV.polarization == "V"
