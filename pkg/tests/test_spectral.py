import numpy as np
import pytest
import scipy.linalg

from conftest import random_hermitian
from hamsim.errors import CommutingPairError, ContractError, IntegrityError
from hamsim.pauli import PauliOperator, random_operator
from hamsim.spectral import (
    cluster_degeneracies,
    default_degeneracy_tol,
    eigensystem,
    evolve,
    kernel_basis,
    spectral_diameter,
)


def test_eigensystem_reconstructs(rng):
    H = random_hermitian(8, rng)
    es = eigensystem(H)
    assert np.all(np.diff(es.eigenvalues) >= 0)
    assert np.allclose(es.reconstruct(), H)
    assert np.allclose(es.eigenvectors.conj().T @ es.eigenvectors, np.eye(8))


def test_phase_convention_is_deterministic(rng):
    H = random_hermitian(6, rng)
    V1 = eigensystem(H).eigenvectors
    V2 = eigensystem(H.copy()).eigenvectors
    assert np.array_equal(V1, V2)
    for col in V1.T:
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(first.imag) < 1e-14 and first.real > 0


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("t", [0.0, 0.3, 2.7])
def test_evolve_matches_expm(rng, sign, t):
    op = random_operator(3, 2, rng)
    U = evolve(op, t, sign)
    assert np.allclose(U, scipy.linalg.expm(sign * 1j * t * op.dense()))


def test_evolve_rejects_bad_sign():
    with pytest.raises(ValueError):
        evolve(np.eye(2), 1.0, sign=2)


def test_non_hermitian_input_is_rejected():
    with pytest.raises(IntegrityError):
        eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))


def test_spectral_diameter(rng):
    H = random_hermitian(5, rng)
    w = np.linalg.eigvalsh(H)
    assert np.isclose(spectral_diameter(H), w[-1] - w[0])
    assert spectral_diameter(PauliOperator.identity(2, 3.0)) == pytest.approx(0.0)


def test_clusters_group_by_gap():
    vals = np.array([0.0, 1e-10, 1.0, 2.0, 2.0 + 5e-9, 2.0 + 1e-8])
    clusters = cluster_degeneracies(vals, tol=1e-8)
    assert clusters.clusters == ((0, 1), (2,), (3, 4, 5))
    assert [len(c) for c in clusters.degenerate()] == [2, 3]
    with pytest.raises(ValueError):
        cluster_degeneracies(vals, tol=0.0)


def test_default_tolerance_scales_with_spectrum():
    assert default_degeneracy_tol(np.array([0.1, 0.2])) == pytest.approx(1e-8)
    assert default_degeneracy_tol(np.array([-300.0, 2.0])) == pytest.approx(3e-6)


def test_kernel_basis_matches_rank(rng):
    A = random_hermitian(6, rng)
    P = np.diag([1, 1, 1, 0, 0, 0]).astype(complex)
    B = P @ random_hermitian(6, rng) @ P
    A[:3, 3:] = A[3:, :3] = 0
    C = A @ B - B @ A
    K = kernel_basis(C)
    assert K.shape[1] == 6 - np.linalg.matrix_rank(C, tol=1e-9 * np.linalg.norm(C, 2))
    assert np.allclose(C @ K, 0, atol=1e-9)
    assert np.allclose(K.conj().T @ K, np.eye(K.shape[1]))


def test_kernel_basis_contracts():
    with pytest.raises(ContractError):
        kernel_basis(np.eye(2))
    with pytest.raises(CommutingPairError):
        kernel_basis(np.zeros((2, 2)))


def test_eigensystem_examples():
    assert np.allclose(eigensystem(PauliOperator.from_string("Z")).eigenvalues, [-1, 1])
    assert np.allclose(eigensystem(PauliOperator.zero(2)).eigenvalues, 0)
    from hamsim.models import toy_target

    T = toy_target()
    assert np.allclose(eigensystem(T).reconstruct(), T.dense(), atol=1e-9)


def test_evolve_examples(rng):
    assert np.allclose(evolve(PauliOperator.from_string("Z"), 0.0), np.eye(2))
    t = 0.7
    assert np.allclose(evolve(PauliOperator.from_string("Z"), t), np.diag([np.exp(-1j * t), np.exp(1j * t)]))
    h = random_operator(3, 3, rng)
    for t in rng.uniform(0, 10, size=5):
        U = evolve(h, t)
        assert np.allclose(U.conj().T @ U, np.eye(8), atol=1e-9)
        assert np.allclose(U @ evolve(h, t, +1), np.eye(8), atol=1e-9)


def test_diameter_properties(rng):
    from scipy.optimize import minimize_scalar

    from hamsim.models import toy_target, xxx_model
    from hamsim.pauli import spectral_norm

    h = xxx_model(1.0) - toy_target()
    d = spectral_diameter(h)
    # Lanczos extremes as an independent route to the spectrum edges
    from scipy.sparse.linalg import eigsh

    M = h.dense()
    v0 = np.random.default_rng(3).normal(size=16).astype(complex)
    ext = [eigsh(M, k=1, which=w, v0=v0, tol=1e-12)[0][0] for w in ("LA", "SA")]
    assert d == pytest.approx(ext[0] - ext[1], rel=1e-6)
    g = random_operator(3, 2, rng)
    assert spectral_diameter(g + PauliOperator.identity(3, 3.7)) == pytest.approx(spectral_diameter(g), abs=1e-10)
    res = minimize_scalar(lambda c: spectral_norm(g + PauliOperator.identity(3, c)), bounds=(-50, 50), method="bounded",
                          options={"xatol": 1e-12})
    assert spectral_diameter(g) == pytest.approx(2 * res.fun, abs=1e-8)
    assert spectral_diameter(PauliOperator.zero(1)) == 0.0
    assert spectral_diameter(PauliOperator.from_string("Z")) == pytest.approx(2.0)


def test_cluster_examples():
    assert cluster_degeneracies(np.array([0.0, 0.0, 1.0]), tol=1e-9).clusters == ((0, 1), (2,))
    assert len(cluster_degeneracies(np.array([0.0, 1.0, 2.0, 3.0]))) == 4


def test_kernel_examples():
    xy = 2j * np.diag([1, -1])
    assert kernel_basis(xy).shape[1] == 0
    m = np.diag([0, 2j, -2j])
    K = kernel_basis(m)
    assert K.shape[1] == 1 and np.allclose(np.abs(K[:, 0]), [1, 0, 0])
