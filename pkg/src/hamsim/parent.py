"""Parent Hamiltonians of a state from its generator correlation matrix."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ContractError, DimensionError, DomainError
from .pauli import PauliOperator, PauliString, generate_interaction_basis

__all__ = [
    "CorrelationMatrix",
    "NecessaryConditionReport",
    "correlation_matrix",
    "parent_exists",
    "parent_hamiltonian",
    "det_sum_identity_check",
    "locality_blocks",
    "necessary_condition_check",
]

MINOR_CAP = 8


@dataclass(frozen=True)
class CorrelationMatrix:
    """Covariance ``M_ij = <{L_i, L_j}>/2 - <L_i><L_j>`` of a generator list.

    ``block_split`` separates the leading (higher-locality) block from the
    trailing (lower-locality) one when the matrix was built from blocks.
    """

    generators: tuple[PauliString, ...]
    entries: np.ndarray
    block_split: int = 0

    @property
    def m_kk(self) -> np.ndarray:
        s = self.block_split
        return self.entries[:s, :s]

    @property
    def m_kpkp(self) -> np.ndarray:
        s = self.block_split
        return self.entries[s:, s:]

    @property
    def m_kpk(self) -> np.ndarray:
        s = self.block_split
        return self.entries[s:, :s]

    @property
    def m_kkp(self) -> np.ndarray:
        s = self.block_split
        return self.entries[:s, s:]


def correlation_matrix(psi, generators, block_split: int = 0) -> CorrelationMatrix:
    gens = tuple(g if isinstance(g, PauliString) else PauliString(g) for g in generators)
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise DomainError("state must be normalized")
    for g in gens:
        if 2 ** g.n_sites != psi.shape[0]:
            raise DimensionError(f"generator {g} does not act on a {psi.shape[0]}-dimensional space")
    if not gens:
        return CorrelationMatrix(gens, np.zeros((0, 0)), 0)
    vecs = np.column_stack([PauliOperator(g.n_sites, {g: 1.0}).dense() @ psi for g in gens])
    means = (psi.conj() @ vecs).real
    # Hermitian generators: <{L_i, L_j}>/2 = Re <L_i psi | L_j psi>
    M = (vecs.conj().T @ vecs).real - np.outer(means, means)
    M = (M + M.T) / 2
    return CorrelationMatrix(gens, M, block_split)


def parent_exists(psi, generators, tol: float = 1e-8) -> tuple[bool, np.ndarray]:
    """Whether some real combination of ``generators`` has ``psi`` as an eigenstate.

    Returns the flag and the kernel vectors of the correlation matrix as
    columns; each column holds the coefficients of one parent Hamiltonian.
    """
    cm = correlation_matrix(psi, generators)
    if cm.entries.size == 0:
        return False, np.zeros((0, 0))
    w, V = np.linalg.eigh(cm.entries)
    kernel = V[:, w <= tol]
    return bool(kernel.shape[1] > 0), kernel


def parent_hamiltonian(generators, coefficients) -> PauliOperator:
    gens = [g if isinstance(g, PauliString) else PauliString(g) for g in generators]
    return PauliOperator(gens[0].n_sites, zip(gens, map(float, coefficients)))


def _sub_dets(M: np.ndarray, rows, cols) -> np.ndarray:
    if len(rows) == 0 or len(rows[0]) == 0:
        return np.ones(len(rows))
    r = np.asarray(rows)
    c = np.asarray(cols)
    return np.linalg.det(M[r[:, :, None], c[:, None, :]])


def det_sum_identity_check(A, B, max_dim: int = MINOR_CAP) -> tuple[float, float]:
    """Both sides of the mixed-minor expansion of ``det(A + B)``.

    ``lhs`` is ``sum_r sum_{alpha, beta} (-1)^(s(alpha)+s(beta)) det A[alpha|beta] det B(alpha|beta)``
    over strictly increasing 1-based index sequences of length ``r = 1..N-1``,
    where ``B(alpha|beta)`` deletes those rows and columns.  ``rhs`` is
    ``det(A+B) - det A - det B``; the two agree for any square ``A, B``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise DimensionError("A and B must be square matrices of equal size")
    N = A.shape[0]
    if N > max_dim:
        raise CapacityError(f"minor expansion of size {N} exceeds cap {max_dim}")
    lhs = 0.0
    idx = range(N)
    for r in range(1, N):
        subsets = list(itertools.combinations(idx, r))
        comps = [tuple(i for i in idx if i not in s) for s in subsets]
        signs = np.array([(-1) ** (sum(s) + r) for s in subsets])  # 1-based sums
        dA = _sub_dets(A, [a for a in subsets for _ in subsets], [b for _ in subsets for b in subsets])
        dB = _sub_dets(B, [a for a in comps for _ in comps], [b for _ in comps for b in comps])
        sign = np.outer(signs, signs).ravel()
        lhs += float(np.sum(sign * dA * dB).real)
    if N == 0:
        return 0.0, 0.0
    rhs = float((np.linalg.det(A + B) - np.linalg.det(A) - np.linalg.det(B)).real)
    return lhs, rhs


def locality_blocks(n: int, k: int, k_prime: int, geometry: str = "all_subsets"):
    """Generators split into the ``(k', k]``-body block and the ``<= k'``-body block."""
    if not 1 <= k_prime < k <= n:
        raise DomainError("need 1 <= k' < k <= n")
    high = [g for j in range(k_prime + 1, k + 1) for g in generate_interaction_basis(n, j, geometry)]
    low = [g for j in range(1, k_prime + 1) for g in generate_interaction_basis(n, j, geometry)]
    return high, low


@dataclass(frozen=True)
class NecessaryConditionReport:
    lhs: float
    rhs: float
    abs_diff: float
    condition_met: bool
    dim_kk: int
    dim_kpkp: int

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_diff": self.abs_diff,
            "condition_met": self.condition_met,
            "dim_kk": self.dim_kk,
            "dim_kpkp": self.dim_kpkp,
        }


def necessary_condition_check(
    psi,
    k: int | None = None,
    k_prime: int | None = None,
    tol: float = 1e-9,
    geometry: str = "all_subsets",
    blocks=None,
    singular_tol: float = 1e-10,
    max_dim: int = MINOR_CAP,
) -> NecessaryConditionReport:
    """Test the determinant condition for ``psi`` to be a joint eigenstate.

    With ``A`` the lower-locality block of the correlation matrix and ``B``
    minus the Schur-complement correction, a state that is an eigenstate of
    both a k-local and a k'-local Hamiltonian satisfies ``lhs == -det B``.
    Failure therefore certifies that no such pair exists.  ``blocks`` may
    supply explicit ``(high_block, low_block)`` generator lists in place of
    the full bases for ``k`` and ``k_prime``.
    """
    psi = np.asarray(psi, dtype=complex)
    if blocks is None:
        if k is None or k_prime is None:
            raise DomainError("give k and k_prime, or explicit blocks")
        if k_prime >= k:
            raise DomainError("the condition needs k_prime < k")
        n = int(round(np.log2(psi.shape[0])))
        high, low = locality_blocks(n, k, k_prime, geometry)
    else:
        high, low = (list(b) for b in blocks)
    if len(low) > max_dim:
        raise CapacityError(f"lower block has {len(low)} generators, cap is {max_dim}")
    cm = correlation_matrix(psi, list(high) + list(low), block_split=len(high))
    Mkk = cm.m_kk
    if Mkk.size == 0 or np.min(np.abs(np.linalg.eigvalsh(Mkk))) <= singular_tol:
        raise ContractError("the higher-locality block of the correlation matrix is singular")
    A = cm.m_kpkp
    B = -cm.m_kpk @ np.linalg.solve(Mkk, cm.m_kkp)
    lhs, _ = det_sum_identity_check(A, B, max_dim=max_dim)
    rhs = -float(np.linalg.det(B))
    diff = abs(lhs - rhs)
    return NecessaryConditionReport(lhs, rhs, diff, bool(diff <= tol), Mkk.shape[0], A.shape[0])
