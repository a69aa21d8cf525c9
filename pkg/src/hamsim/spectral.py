"""Dense Hermitian spectra, unitary propagators, degeneracy clusters and kernels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CommutingPairError, ContractError, IntegrityError
from .pauli import DENSE_CAP, PauliOperator

__all__ = [
    "EigenSystem",
    "DegeneracyClusters",
    "as_dense",
    "eigensystem",
    "evolve",
    "spectral_diameter",
    "cluster_degeneracies",
    "default_degeneracy_tol",
    "kernel_basis",
]

HERMITIAN_TOL = 1e-10


def as_dense(h, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense complex matrix for a PauliOperator or an array-like."""
    if isinstance(h, PauliOperator):
        return h.dense(cap=cap)
    return np.asarray(h, dtype=complex)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _fix_phases(V: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    # first component above tol made real and positive, column by column
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            z = col[idx[0]]
            V[:, k] = col * (abs(z) / z)
    return V


def eigensystem(h, cap: int = DENSE_CAP) -> EigenSystem:
    """Full spectral decomposition of a Hermitian operator.

    Eigenvector phases are fixed so that the first non-negligible component
    of every column is real and positive, which makes results reproducible.
    """
    mat = as_dense(h, cap)
    if mat.size and not np.allclose(mat, mat.conj().T, atol=HERMITIAN_TOL * max(1.0, np.abs(mat).max()), rtol=0):
        raise IntegrityError("matrix is not Hermitian")
    w, V = np.linalg.eigh(mat)
    return EigenSystem(w, _fix_phases(V))


def evolve(h, t: float, sign: int = -1, cap: int = DENSE_CAP, es: EigenSystem | None = None) -> np.ndarray:
    """The propagator ``exp(sign * i * t * h)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    es = eigensystem(h, cap) if es is None else es
    V = es.eigenvectors
    return (V * np.exp(sign * 1j * t * es.eigenvalues)) @ V.conj().T


def spectral_diameter(h, cap: int = DENSE_CAP) -> float:
    """``lambda_max - lambda_min`` of a Hermitian operator."""
    mat = as_dense(h, cap)
    if mat.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(mat)
    return float(w[-1] - w[0])


def default_degeneracy_tol(h_or_values) -> float:
    """``1e-8 * max(1, ||h||_2)``: connector spectra scale with the couplings."""
    if isinstance(h_or_values, EigenSystem):
        vals = h_or_values.eigenvalues
    elif isinstance(h_or_values, PauliOperator):
        vals = np.linalg.eigvalsh(h_or_values.dense())
    else:
        arr = np.asarray(h_or_values)
        vals = np.linalg.eigvalsh(arr) if arr.ndim == 2 else arr
    scale = float(np.max(np.abs(vals))) if len(vals) else 0.0
    return 1e-8 * max(1.0, scale)


@dataclass(frozen=True)
class DegeneracyClusters:
    clusters: tuple[tuple[int, ...], ...]
    tolerance: float

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    def degenerate(self, min_size: int = 2):
        return [c for c in self.clusters if len(c) >= min_size]


def cluster_degeneracies(es, tol: float | None = None) -> DegeneracyClusters:
    """Group ascending eigenvalues whose consecutive gaps are at most ``tol``."""
    vals = es.eigenvalues if isinstance(es, EigenSystem) else np.asarray(es, dtype=float)
    if tol is None:
        tol = default_degeneracy_tol(vals)
    if tol <= 0:
        raise ValueError("tol must be positive")
    order = np.argsort(vals, kind="stable")
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and vals[idx] - vals[clusters[-1][-1]] <= tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    return DegeneracyClusters(tuple(tuple(c) for c in clusters), float(tol))


def kernel_basis(m, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of an anti-Hermitian ``m``.

    Eigenvectors of ``i m`` with ``|eigenvalue| <= tol * ||m||_2`` are kept.
    A zero matrix raises :class:`CommutingPairError`: its kernel is the whole
    space and the commuting-pair machinery applies instead.
    """
    mat = as_dense(m)
    scale = max(1.0, float(np.abs(mat).max())) if mat.size else 1.0
    if not np.allclose(mat, -mat.conj().T, atol=HERMITIAN_TOL * scale, rtol=0):
        raise ContractError("kernel_basis expects an anti-Hermitian matrix")
    if not np.any(mat):
        raise CommutingPairError("zero commutator: the pair commutes; use simultaneous_eigenbasis")
    herm = 1j * mat
    herm = (herm + herm.conj().T) / 2
    w, V = np.linalg.eigh(herm)
    norm2 = float(np.max(np.abs(w)))
    keep = np.abs(w) <= tol * norm2
    return _fix_phases(V[:, keep])
