"""Simulation fidelity at a state, worst case over states, and time sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimensionError, DomainError
from .spectral import EigenSystem, as_dense, eigensystem, spectral_diameter

__all__ = [
    "FidelityCurve",
    "normalize_state",
    "state_preset",
    "PRESETS",
    "haar_state",
    "state_to_dict",
    "state_from_dict",
    "fidelity",
    "fidelity_sweep",
    "worst_case_fidelity_at_t",
    "worst_case_fidelity",
    "origin_distance_to_hull",
]

NORM_TOL = 1e-10
PRESETS = ("zero", "ghz", "w", "cosdit")


def normalize_state(psi, dim: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if dim is not None and psi.shape[0] != dim:
        raise DimensionError(f"state has dimension {psi.shape[0]}, expected {dim}")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise DomainError("state vector is not normalized")
    return psi


def state_preset(name: str, n_sites: int) -> np.ndarray:
    """Named states: ``zero`` (all sites 0), ``ghz``, ``w`` and the uniform ``cosdit``."""
    dim = 2 ** n_sites
    psi = np.zeros(dim, dtype=complex)
    if name == "zero":
        psi[0] = 1
    elif name == "ghz":
        psi[[0, dim - 1]] = 1 / math.sqrt(2)
    elif name == "w":
        psi[[1 << s for s in range(n_sites)]] = 1 / math.sqrt(n_sites)
    elif name == "cosdit":
        psi[:] = 1 / math.sqrt(dim)
    else:
        raise DomainError(f"unknown state preset {name!r}; expected one of {PRESETS}")
    return psi


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state from normalized complex Gaussians."""
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def state_to_dict(psi) -> dict:
    psi = np.asarray(psi, dtype=complex)
    inter = np.empty(2 * len(psi))
    inter[0::2], inter[1::2] = psi.real, psi.imag
    return {"dimension": len(psi), "amplitudes": inter.tolist()}


def state_from_dict(data: dict) -> np.ndarray:
    if "preset" in data:
        return state_preset(data["preset"], int(data["n_sites"]))
    a = np.asarray(data["amplitudes"], dtype=float)
    psi = a[0::2] + 1j * a[1::2]
    return normalize_state(psi, int(data["dimension"]))


def _es(h) -> EigenSystem:
    return h if isinstance(h, EigenSystem) else eigensystem(h)


def _overlaps(es_t: EigenSystem, es_qs: EigenSystem, psi: np.ndarray, times) -> np.ndarray:
    # <psi| e^{itQ} e^{-itT} |psi> = <e^{-itQ} psi | e^{-itT} psi>
    a_t = es_t.eigenvectors.conj().T @ psi
    a_q = es_qs.eigenvectors.conj().T @ psi
    out = np.empty(len(times))
    for k, t in enumerate(times):
        phi_t = es_t.eigenvectors @ (np.exp(-1j * t * es_t.eigenvalues) * a_t)
        phi_q = es_qs.eigenvectors @ (np.exp(-1j * t * es_qs.eigenvalues) * a_q)
        out[k] = abs(np.vdot(phi_q, phi_t))
    return out


def fidelity(h_t, h_qs, psi, t: float) -> float:
    """``|<psi| exp(i t H_qs) exp(-i t H_t) |psi>|``."""
    es_t, es_qs = _es(h_t), _es(h_qs)
    if es_t.dim != es_qs.dim:
        raise DimensionError("Hamiltonians act on different spaces")
    psi = normalize_state(psi, es_t.dim)
    return float(_overlaps(es_t, es_qs, psi, [t])[0])


@dataclass(frozen=True)
class FidelityCurve:
    times: np.ndarray
    fidelities: np.ndarray
    bound_curve: np.ndarray

    def rows(self):
        return zip(self.times.tolist(), self.fidelities.tolist(), self.bound_curve.tolist())


def fidelity_sweep(h_t, h_qs, psi, times) -> FidelityCurve:
    """Fidelity on a time grid alongside the guaranteed floor ``1 - eps*``."""
    times = np.asarray(times, dtype=float)
    if times.size and (np.any(times < 0) or np.any(np.diff(times) < 0)):
        raise DomainError("times must be non-negative and ascending")
    if times.size == 0:
        empty = np.zeros(0)
        return FidelityCurve(empty, empty.copy(), empty.copy())
    T, Q = as_dense(h_t), as_dense(h_qs)
    psi = normalize_state(psi, T.shape[0])
    fids = _overlaps(eigensystem(T), eigensystem(Q), psi, times)
    delta = spectral_diameter(Q - T)
    bound = 1 - np.minimum(1.0, times * delta / 2)
    return FidelityCurve(times, fids, bound)


def origin_distance_to_hull(phases) -> float:
    """Distance from 0 to the convex hull of ``exp(i * phases)``.

    The points sit on the unit circle, so the hull avoids the origin exactly
    when they fit inside an arc of span below pi; the nearest hull point then
    lies on the chord joining the arc's endpoints, at distance cos(span / 2).
    """
    th = np.sort(np.mod(np.asarray(phases, dtype=float), 2 * math.pi))
    if th.size == 0:
        raise DomainError("no phases")
    gaps = np.diff(np.concatenate([th, [th[0] + 2 * math.pi]]))
    span = 2 * math.pi - float(gaps.max())
    if span >= math.pi:
        return 0.0
    return math.cos(span / 2)


def _propagator(es_t: EigenSystem, es_qs: EigenSystem, t: float) -> np.ndarray:
    Vt, Vq = es_t.eigenvectors, es_qs.eigenvectors
    Uq = (Vq * np.exp(1j * t * es_qs.eigenvalues)) @ Vq.conj().T
    Ut = (Vt * np.exp(-1j * t * es_t.eigenvalues)) @ Vt.conj().T
    return Uq @ Ut


def worst_case_fidelity_at_t(h_t, h_qs, t: float) -> float:
    """``min_psi |<psi|U|psi>|`` with ``U = exp(i t H_qs) exp(-i t H_t)``.

    U is unitary, hence normal, so its numerical range is the convex hull of
    its eigenvalues and the minimum is that hull's distance from the origin.
    """
    U = _propagator(_es(h_t), _es(h_qs), t)
    return origin_distance_to_hull(np.angle(np.linalg.eigvals(U)))


def worst_case_fidelity(h_t, h_qs, t_max: float, grid: int = 400) -> tuple[float, float]:
    """Minimum over states and ``t in [0, t_max]``; returns ``(value, t_argmin)``.

    A uniform grid locates the best cell, refined by bounded scalar search.
    """
    es_t, es_qs = _es(h_t), _es(h_qs)
    f = lambda t: origin_distance_to_hull(np.angle(np.linalg.eigvals(_propagator(es_t, es_qs, t))))
    ts = np.linspace(0.0, t_max, grid)
    vals = np.array([f(t) for t in ts])
    k = int(np.argmin(vals))
    best_t, best = float(ts[k]), float(vals[k])
    if best > 0 and grid > 2:
        lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, grid - 1)]
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        if res.fun < best:
            best_t, best = float(res.x), float(res.fun)
    return best, best_t
