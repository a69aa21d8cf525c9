import numpy as np
import pytest
import scipy.linalg

from conftest import random_hermitian
from hamsim.errors import CommutingPairError, ContractError
from hamsim.models import toy_commutator_norm_sq, toy_target, xxx_model, xxx_with_fields, xyz_model
from hamsim.pauli import PauliOperator, commutator, hs_norm, random_operator
from hamsim.shared import (
    SharedSubspace,
    always_degenerate_pairs,
    commutes,
    find_degeneracy_crossings,
    lemma1_bound,
    projected_connector,
    scan_coupling,
    shared_subspace,
    simulatable_sets,
    simultaneous_eigenbasis,
)


def _embedded_pair(rng, shared=3, rest=5):
    """Non-commuting pair with a hidden block of ``shared`` common eigenvectors."""
    dim = shared + rest
    A = np.zeros((dim, dim), complex)
    B = np.zeros((dim, dim), complex)
    A[:shared, :shared] = np.diag(rng.normal(size=shared))
    B[:shared, :shared] = np.diag(rng.normal(size=shared))
    A[shared:, shared:] = random_hermitian(rest, rng)
    B[shared:, shared:] = random_hermitian(rest, rng)
    Q = scipy.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))[0]
    return Q @ A @ Q.conj().T, Q @ B @ Q.conj().T


@pytest.mark.parametrize("convention", ["spin", "pauli"])
def test_toy_pair_commutes(convention):
    assert commutes(toy_target(1.3, -0.4, convention=convention), xxx_model(0.7, convention=convention))


def test_commutator_closed_form_spin_convention():
    for J3, hx, Jx, Jy, Jz in [(1, 1, 1, 0, 0), (0.5, 2, 0.3, -1, 0.7), (1, 1, 1, 1, 1)]:
        brute = hs_norm(commutator(toy_target(J3, hx), xyz_model(Jx, Jy, Jz))) ** 2
        assert brute == pytest.approx(toy_commutator_norm_sq(J3, hx, Jx, Jy, Jz), rel=1e-12)


def test_simultaneous_eigenbasis_diagonalizes_both():
    T, Q = toy_target(), xxx_model(0.8)
    sub = simultaneous_eigenbasis(T, Q)
    assert sub.n_theta == 16
    assert np.all(sub.exact_mask())
    W = sub.basis
    for M, e in ((T.dense(), sub.eigs_a), (Q.dense(), sub.eigs_b)):
        assert np.allclose(W.conj().T @ M @ W, np.diag(e), atol=1e-10)


def test_simultaneous_eigenbasis_rejects_non_commuting(rng):
    with pytest.raises(ContractError):
        simultaneous_eigenbasis(random_hermitian(4, rng), random_hermitian(4, rng))


def test_shared_subspace_rejects_commuting():
    with pytest.raises(CommutingPairError):
        shared_subspace(toy_target(), xxx_model())


def test_hidden_common_eigenvectors_are_found(rng):
    A, B = _embedded_pair(rng)
    kern = shared_subspace(A, B)
    C = A @ B - B @ A
    assert kern.n_theta == 8 - np.linalg.matrix_rank(C, tol=1e-9 * np.linalg.norm(C, 2))
    inv = shared_subspace(A, B, method="invariant")
    assert inv.n_theta == 3
    assert np.all(inv.exact_mask())
    assert lemma1_bound(A, B) >= inv.n_theta - 1e-9


def test_field_tuned_model_kernel_size():
    T, Q = toy_target(), xxx_with_fields(1.0, -4, 0, 1)
    kern = shared_subspace(T, Q)
    assert kern.n_theta == 12
    # the kernel of the commutator is larger than the common invariant part
    assert shared_subspace(T, Q, method="invariant").n_theta == int(kern.exact_mask().sum()) == 11
    assert lemma1_bound(T, Q) == pytest.approx(12.0)


def test_shared_subspace_serialization_roundtrip(rng):
    sub = shared_subspace(*_embedded_pair(rng), method="invariant")
    back = SharedSubspace.from_dict(sub.to_dict())
    assert np.allclose(back.basis, sub.basis)
    assert np.allclose(back.eigs_a, sub.eigs_a)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dimension_bound_saturation(n):
    x = PauliOperator.from_sites(n, {0: "X"})
    y = PauliOperator.from_sites(n, {0: "Y"})
    assert lemma1_bound(x, y) == 0.0


def test_dimension_bound_rejects_commuting():
    with pytest.raises(CommutingPairError):
        lemma1_bound(PauliOperator.from_string("XI"), PauliOperator.from_string("IX"))


def test_dimension_bound_is_upper_bound_on_random_pairs(rng):
    for _ in range(20):
        a, b = random_operator(3, 3, rng), random_operator(3, 2, rng)
        assert lemma1_bound(a, b) >= shared_subspace(a, b, method="invariant").n_theta - 1e-9


def test_projected_connector_is_hermitian(rng):
    A, B = _embedded_pair(rng)
    inv = shared_subspace(A, B, method="invariant")
    P = projected_connector(B - A, inv)
    assert np.allclose(P, P.conj().T)
    assert np.allclose(P, np.diag(inv.eigs_b - inv.eigs_a), atol=1e-9)


def test_crossings_hand_example():
    lam_t = [0.0, 1.0, 3.0]
    slope = [0.0, 1.0, 1.0]
    cr = find_degeneracy_crossings(lam_t, slope)
    # J*slope - lam_t coincide: (0,1) at J=1, (0,2) at J=3; (1,2) parallel
    assert [c.J for c in cr] == [1.0, 3.0]
    assert cr[0].pairs == ((0, 1),)
    assert always_degenerate_pairs([0.0, 0.0, 1.0], [2.0, 2.0, 0.0]) == [(0, 1)]


def test_coupling_scan_requires_commuting_pair(rng):
    with pytest.raises(ContractError):
        scan_coupling(random_operator(2, 2, rng), random_operator(2, 2, rng))


def test_simulatable_sets_give_exact_evolution(rng):
    T = toy_target()
    scan = scan_coupling(T, xxx_model(1.0))
    J = scan.crossings[len(scan.crossings) // 2].J
    Q = xxx_model(J)
    sets = simulatable_sets(T, Q)
    assert sets
    for s in sets:
        psi = s.random_state(rng)
        for t in (0.5, 3.0):
            overlap = np.vdot(psi, scipy.linalg.expm(1j * t * Q.dense()) @ scipy.linalg.expm(-1j * t * T.dense()) @ psi)
            assert abs(overlap) == pytest.approx(1.0, abs=1e-9)


def _brute_common_count(A, B, tol=1e-8):
    # count eigenvectors of A (inside each eigenspace) that B maps into the same line
    w, V = np.linalg.eigh(A)
    count = 0
    for val in np.unique(np.round(w, 8)):
        S = V[:, np.abs(w - val) < 1e-6]
        Bs = S.conj().T @ B @ S
        for u in np.linalg.eigh((Bs + Bs.conj().T) / 2)[1].T:
            v = S @ u
            lam = np.vdot(v, B @ v)
            count += np.linalg.norm(B @ v - lam * v) < tol
    return count


def test_perturbed_pair_matches_brute_force():
    a = PauliOperator.from_string("ZZ")
    b = a + PauliOperator.from_string("XI", 1e-3)
    sub = shared_subspace(a, b)
    assert sub.n_theta == _brute_common_count(a.dense(), b.dense()) == 0


def test_shared_subspace_is_symmetric(rng):
    A, B = _embedded_pair(rng, shared=4, rest=4)
    ab = shared_subspace(A, B, method="invariant").basis
    ba = shared_subspace(B, A, method="invariant").basis
    assert ab.shape == ba.shape
    angles = scipy.linalg.subspace_angles(ab, ba)
    assert np.max(angles) < 1e-8


def test_single_qubit_saturation_pair_has_no_shared_vectors():
    x, y = PauliOperator.from_string("X"), PauliOperator.from_string("Y")
    assert shared_subspace(x, y).n_theta == 0


def test_simultaneous_basis_special_cases(rng):
    A = np.diag([0.0, 1.0, 2.0]).astype(complex)
    sub = simultaneous_eigenbasis(A, A @ A)
    assert np.allclose(np.abs(sub.basis), np.eye(3))
    B = random_hermitian(3, rng)
    sub = simultaneous_eigenbasis(np.eye(3), B)
    assert np.allclose(sub.eigs_b, np.linalg.eigvalsh(B))


def test_simulatable_sets_trivial_cases():
    T = toy_target()
    sets = simulatable_sets(T, T)
    assert len(sets) == 1 and sets[0].dim == 16 and sets[0].connector_eigenvalue == pytest.approx(0)
    shifted = simulatable_sets(T, T + PauliOperator.identity(4, 0.3))
    assert shifted[0].dim == 16 and shifted[0].connector_eigenvalue == pytest.approx(0.3)


def test_projected_connector_empty():
    assert projected_connector(np.eye(4), np.zeros((4, 0))).shape == (0, 0)


def test_crossing_examples():
    cr = find_degeneracy_crossings([0, 1], [1, 2])
    assert [(c.J, c.pairs) for c in cr] == [(1.0, ((0, 1),))]
    assert find_degeneracy_crossings([0, 1], [1, 1]) == []


def test_every_crossing_is_degenerate():
    from hamsim.spectral import cluster_degeneracies

    T = toy_target()
    for c in scan_coupling(T, xxx_model(1.0)).crossings:
        w = np.linalg.eigvalsh((xxx_model(c.J) - T).dense())
        assert cluster_degeneracies(w).degenerate()
