"""Shared eigenbases of Hamiltonian pairs and exactly simulatable state sets.

The connector of a (target, simulator) pair is ``h = H_qs - H_t``.  For
commuting pairs every degenerate eigenspace of ``h`` is simulated exactly.
For non-commuting pairs the same holds for degenerate eigenspaces of ``h``
compressed to the shared eigenvectors of the pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CommutingPairError, ContractError, DomainError
from .pauli import PauliOperator, commutator, hs_norm
from .spectral import (
    _fix_phases,
    as_dense,
    cluster_degeneracies,
    default_degeneracy_tol,
    kernel_basis,
)

__all__ = [
    "SharedSubspace",
    "SimulatableSet",
    "Crossing",
    "CouplingScan",
    "commutator_matrix",
    "commutes",
    "simultaneous_eigenbasis",
    "shared_subspace",
    "lemma1_bound",
    "projected_connector",
    "simulatable_sets",
    "find_degeneracy_crossings",
    "always_degenerate_pairs",
    "scan_coupling",
]

COMMUTE_TOL = 1e-10
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class SharedSubspace:
    """Orthonormal vectors (columns of ``basis``) diagonal for two operators.

    ``residual_a[i]`` is ``||A v_i - eigs_a[i] v_i||``; vectors whose residuals
    are small relative to ``norm_a``/``norm_b`` are exact common eigenvectors.
    """

    basis: np.ndarray
    eigs_a: np.ndarray
    eigs_b: np.ndarray
    residual_a: np.ndarray
    residual_b: np.ndarray
    norm_a: float = 1.0
    norm_b: float = 1.0

    @property
    def n_theta(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def exact_mask(self, rtol: float = RESIDUAL_RTOL) -> np.ndarray:
        return (self.residual_a <= rtol * max(1.0, self.norm_a)) & (
            self.residual_b <= rtol * max(1.0, self.norm_b)
        )

    def exact(self, rtol: float = RESIDUAL_RTOL) -> "SharedSubspace":
        m = self.exact_mask(rtol)
        return SharedSubspace(
            self.basis[:, m], self.eigs_a[m], self.eigs_b[m],
            self.residual_a[m], self.residual_b[m], self.norm_a, self.norm_b,
        )

    def to_dict(self) -> dict:
        vecs = []
        for v in self.basis.T:
            inter = np.empty(2 * len(v))
            inter[0::2], inter[1::2] = v.real, v.imag
            vecs.append(inter.tolist())
        return {
            "dimension": self.dim,
            "n_theta": self.n_theta,
            "basis": vecs,
            "eigs_a": self.eigs_a.tolist(),
            "eigs_b": self.eigs_b.tolist(),
            "residual_a": self.residual_a.tolist(),
            "residual_b": self.residual_b.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SharedSubspace":
        dim = int(data["dimension"])
        cols = [np.asarray(v[0::2]) + 1j * np.asarray(v[1::2]) for v in data["basis"]]
        basis = np.column_stack(cols) if cols else np.zeros((dim, 0), complex)
        n = basis.shape[1]
        return cls(
            basis,
            np.asarray(data["eigs_a"], float),
            np.asarray(data["eigs_b"], float),
            np.asarray(data.get("residual_a", [0.0] * n), float),
            np.asarray(data.get("residual_b", [0.0] * n), float),
        )


@dataclass(frozen=True)
class SimulatableSet:
    """A degenerate connector eigenspace of dimension at least two."""

    basis: np.ndarray
    connector_eigenvalue: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        z = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        psi = self.basis @ z
        return psi / np.linalg.norm(psi)


def _spec(mat: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(mat)))) if mat.size else 0.0


def commutator_matrix(h_a, h_b) -> np.ndarray:
    """Dense ``[h_a, h_b]``; exact Pauli arithmetic when both are PauliOperators."""
    if isinstance(h_a, PauliOperator) and isinstance(h_b, PauliOperator):
        return commutator(h_a, h_b).dense()
    A, B = as_dense(h_a), as_dense(h_b)
    if A.shape != B.shape:
        raise DomainError(f"shape mismatch {A.shape} vs {B.shape}")
    return A @ B - B @ A


def commutes(h_a, h_b, tol: float = COMMUTE_TOL) -> bool:
    """True when ``||[h_a, h_b]||_HS <= tol * max(1, ||h_a||_2 ||h_b||_2)``."""
    if isinstance(h_a, PauliOperator) and isinstance(h_b, PauliOperator):
        c = hs_norm(commutator(h_a, h_b))
    else:
        c = float(np.linalg.norm(commutator_matrix(h_a, h_b)))
    scale = _spec(as_dense(h_a)) * _spec(as_dense(h_b))
    return c <= tol * max(1.0, scale)


def _joint_rotate(W: np.ndarray, mats: list[np.ndarray], tols: list[float]) -> np.ndarray:
    """Rotate the columns of ``W`` so every compressed ``W^H M W`` is diagonal.

    Diagonalize the compression of the first matrix; inside each of its
    degenerate clusters diagonalize the next matrix, and so on.  This is the
    standard construction for commuting operators with degenerate spectra.
    """
    if not mats or W.shape[1] == 0:
        return W
    M = W.conj().T @ mats[0] @ W
    M = (M + M.conj().T) / 2
    w, U = np.linalg.eigh(M)
    W = W @ U
    if len(mats) > 1:
        for cluster in cluster_degeneracies(w, tols[0]).degenerate():
            idx = list(cluster)
            W[:, idx] = _joint_rotate(W[:, idx], mats[1:], tols[1:])
    return W


def _offdiag_norm(W: np.ndarray, M: np.ndarray) -> float:
    R = W.conj().T @ M @ W
    return float(np.linalg.norm(R - np.diag(np.diag(R))))


def _pack(W: np.ndarray, A: np.ndarray, B: np.ndarray) -> SharedSubspace:
    W = _fix_phases(W)
    AW, BW = A @ W, B @ W
    ea = np.einsum("ij,ij->j", W.conj(), AW).real
    eb = np.einsum("ij,ij->j", W.conj(), BW).real
    ra = np.linalg.norm(AW - W * ea, axis=0)
    rb = np.linalg.norm(BW - W * eb, axis=0)
    return SharedSubspace(W, ea, eb, ra, rb, _spec(A), _spec(B))


def simultaneous_eigenbasis(h_a, h_b, tol: float | None = None) -> SharedSubspace:
    """Common orthonormal eigenbasis of two commuting Hermitian operators.

    ``h_a`` is diagonalized first; every degenerate eigenspace of ``h_a`` is
    then re-rotated by the eigenvectors of ``h_b`` compressed to it.
    ``tol`` is the absolute degeneracy tolerance for ``h_a``'s spectrum.
    """
    if not commutes(h_a, h_b):
        raise ContractError("operators do not commute; use shared_subspace")
    A, B = as_dense(h_a), as_dense(h_b)
    tol_a = default_degeneracy_tol(A) if tol is None else tol
    W = _joint_rotate(np.eye(A.shape[0], dtype=complex), [A, B], [tol_a, default_degeneracy_tol(B)])
    return _pack(W, A, B)


def _largest_invariant(W: np.ndarray, mats: list[np.ndarray], atol: float) -> np.ndarray:
    """Largest subspace of span(W) mapped into itself by every matrix in ``mats``."""
    dim = W.shape[0]
    while W.shape[1]:
        P = np.eye(dim) - W @ W.conj().T
        leak = np.vstack([P @ M @ W for M in mats])
        _, s, vh = np.linalg.svd(leak)
        s = np.concatenate([s, np.zeros(max(0, W.shape[1] - len(s)))])
        keep = vh[s <= atol].conj().T
        if keep.shape[1] == W.shape[1]:
            return W
        W, _ = np.linalg.qr(W @ keep)
    return W


def shared_subspace(h_a, h_b, tol: float = 1e-9, method: str = "kernel") -> SharedSubspace:
    """Shared subspace of a non-commuting pair.

    ``method="kernel"`` returns the kernel of ``[h_a, h_b]`` re-rotated so that
    both compressed operators are diagonal; its size is the nullity of the
    commutator.  The kernel is not always invariant under the pair, so some of
    these vectors may fail to be eigenvectors of the full operators (see
    ``SharedSubspace.exact_mask``).  ``method="invariant"`` shrinks the kernel
    to its largest subspace invariant under both operators, whose rotated
    basis consists of exact common eigenvectors.
    """
    if method not in ("kernel", "invariant"):
        raise DomainError(f"unknown method {method!r}")
    A, B = as_dense(h_a), as_dense(h_b)
    if commutes(h_a, h_b):
        raise CommutingPairError("operators commute; use simultaneous_eigenbasis")
    K = kernel_basis(commutator_matrix(h_a, h_b), tol)
    if K.shape[1] == 0:
        return _pack(K, A, B)
    scale = max(1.0, _spec(A), _spec(B))
    if method == "invariant":
        K = _largest_invariant(K, [A, B], tol * scale)
    tols = [default_degeneracy_tol(A), default_degeneracy_tol(B)]
    if _offdiag_norm(K, A) > tols[0] or _offdiag_norm(K, B) > tols[1]:
        K = _joint_rotate(K, [A, B], tols)
    return _pack(K, A, B)


def lemma1_bound(h_a, h_b) -> float:
    """Upper bound ``N - (||C||_HS / ||C||_2)^2`` on the number of shared eigenstates.

    Raises :class:`CommutingPairError` when the commutator vanishes; every
    eigenstate is then shared and the bound is undefined.
    """
    C = commutator_matrix(h_a, h_b)
    # C is anti-Hermitian, so iC is Hermitian with the same singular values
    spec = float(np.max(np.abs(np.linalg.eigvalsh(1j * C)))) if C.size else 0.0
    if spec <= 1e-12:
        raise CommutingPairError("bound undefined for commuting operators; r = N")
    if isinstance(h_a, PauliOperator) and isinstance(h_b, PauliOperator):
        hs2 = C.shape[0] * sum(abs(c) ** 2 for _, c in commutator(h_a, h_b))
    else:
        hs2 = float(np.sum(np.abs(C) ** 2))
    return C.shape[0] - hs2 / spec ** 2


def projected_connector(h, theta: SharedSubspace | np.ndarray) -> np.ndarray:
    """Matrix elements ``<phi_i|h|phi_j>`` on the shared basis."""
    W = theta.basis if isinstance(theta, SharedSubspace) else np.asarray(theta)
    M = W.conj().T @ as_dense(h) @ W
    return (M + M.conj().T) / 2


def _degenerate_sets(hmat: np.ndarray, W: np.ndarray, tol: float | None) -> list[SimulatableSet]:
    if hmat.shape[0] == 0:
        return []
    w, U = np.linalg.eigh(hmat)
    tol = default_degeneracy_tol(w) if tol is None else tol
    out = []
    for cluster in cluster_degeneracies(w, tol).degenerate():
        idx = list(cluster)
        out.append(SimulatableSet(W @ U[:, idx], float(np.mean(w[idx]))))
    return out


def simulatable_sets(h_t, h_qs, tol: float | None = None) -> list[SimulatableSet]:
    """Degenerate connector eigenspaces on which ``h_qs`` reproduces ``h_t`` exactly.

    Commuting pairs use the full connector.  Non-commuting pairs use the
    connector compressed to the exact shared eigenvectors.  Only spaces of
    dimension >= 2 are returned.
    """
    T, Q = as_dense(h_t), as_dense(h_qs)
    if commutes(h_t, h_qs):
        return _degenerate_sets(Q - T, np.eye(T.shape[0], dtype=complex), tol)
    theta = shared_subspace(h_t, h_qs, method="invariant")
    return _degenerate_sets(projected_connector(Q - T, theta), theta.basis, tol)


@dataclass(frozen=True)
class Crossing:
    J: float
    pairs: tuple[tuple[int, int], ...]


def find_degeneracy_crossings(lam_t, lam_qs_unit, tol: float = 1e-9) -> list[Crossing]:
    """Couplings ``J`` at which ``J * lam_qs_unit - lam_t`` has coincident entries.

    Both lists must be indexed by the same common eigenvector.  Pairs with
    equal slopes never cross (see :func:`always_degenerate_pairs` for the
    ones that coincide for every ``J``).  Values within ``tol`` are merged.
    """
    lt = np.asarray(lam_t, dtype=float)
    lq = np.asarray(lam_qs_unit, dtype=float)
    if lt.shape != lq.shape:
        raise DomainError("eigenvalue lists must have equal length")
    found: list[tuple[float, tuple[int, int]]] = []
    n = len(lt)
    for i in range(n):
        for j in range(i + 1, n):
            dq = lq[i] - lq[j]
            if abs(dq) <= tol:
                continue
            found.append(((lt[i] - lt[j]) / dq, (i, j)))
    found.sort(key=lambda item: item[0])
    merged: list[list] = []
    for J, pair in found:
        J = 0.0 if abs(J) <= tol else J
        if merged and J - merged[-1][0] <= tol:
            merged[-1][1].append(pair)
        else:
            merged.append([J, [pair]])
    return [Crossing(float(J), tuple(pairs)) for J, pairs in merged]


def always_degenerate_pairs(lam_t, lam_qs_unit, tol: float = 1e-9) -> list[tuple[int, int]]:
    lt = np.asarray(lam_t, dtype=float)
    lq = np.asarray(lam_qs_unit, dtype=float)
    n = len(lt)
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if abs(lq[i] - lq[j]) <= tol and abs(lt[i] - lt[j]) <= tol
    ]


@dataclass(frozen=True)
class CouplingScan:
    """Crossings of the connector family ``J * h_unit + h_fixed - h_t``.

    ``lam_t`` holds the ``J``-independent part of ``-h`` (``h_t - h_fixed``)
    and ``lam_unit`` the slope, both on the common eigenvectors in ``basis``.
    """

    basis: np.ndarray
    lam_t: np.ndarray
    lam_unit: np.ndarray
    crossings: list[Crossing]
    always_degenerate: list[tuple[int, int]]
    commuting: bool
    n_kernel: int = field(default=0)


def scan_coupling(h_t, h_unit, h_fixed=None, tol: float = 1e-9) -> CouplingScan:
    """Locate couplings that make the connector ``J h_unit + h_fixed - h_t`` degenerate.

    Without ``h_fixed`` the pair ``(h_t, h_unit)`` must commute.  With it, the
    search runs on the exact shared eigenvectors of ``h_t`` and
    ``h_unit + h_fixed``, which must also be invariant under each part.
    """
    T, U = as_dense(h_t), as_dense(h_unit)
    F = np.zeros_like(T) if h_fixed is None else as_dense(h_fixed)
    mats = [T, U, F]
    tols = [default_degeneracy_tol(M) for M in mats]
    if h_fixed is None:
        if not commutes(T, U):
            raise ContractError("h_t and h_unit do not commute; supply h_fixed or use shared_subspace")
        W = np.eye(T.shape[0], dtype=complex)
        commuting, n_kernel = True, T.shape[0]
    else:
        qs = h_unit + h_fixed
        if commutes(h_t, qs):
            W = np.eye(T.shape[0], dtype=complex)
            commuting, n_kernel = True, T.shape[0]
        else:
            n_kernel = shared_subspace(h_t, qs, tol).n_theta
            W = shared_subspace(h_t, qs, tol, method="invariant").basis
            commuting = False
        scale = max(1.0, _spec(U), _spec(F))
        P = np.eye(T.shape[0]) - W @ W.conj().T
        if W.shape[1] and max(np.linalg.norm(P @ U @ W), np.linalg.norm(P @ F @ W)) > math.sqrt(tol) * scale:
            raise ContractError("shared subspace is not invariant under h_unit and h_fixed separately")
    W = _fix_phases(_joint_rotate(W, mats, tols))
    diag = lambda M: np.einsum("ij,ik,kj->j", W.conj(), M, W).real
    lam_t = diag(T) - diag(F)
    lam_unit = diag(U)
    return CouplingScan(
        W, lam_t, lam_unit,
        find_degeneracy_crossings(lam_t, lam_unit, tol),
        always_degenerate_pairs(lam_t, lam_unit, tol),
        commuting, n_kernel,
    )
