"""Worst-case simulation error bounds and the BCH convergence test."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .pauli import PauliOperator, hs_norm, spectral_norm
from .spectral import as_dense, spectral_diameter

__all__ = [
    "BoundReport",
    "CSV_COLUMNS",
    "connector",
    "epsilon_star",
    "weak_bounds",
    "bch_convergence_check",
    "bound_report",
    "bound_table",
]

CSV_COLUMNS = ("t", "delta_h", "eps_star", "b1", "b2", "bch_convergent")


@dataclass(frozen=True)
class BoundReport:
    t: float
    delta_h: float
    eps_star: float
    b1: float
    b2: float
    bch_convergent: bool

    def row(self) -> dict:
        return asdict(self)


def connector(h_t, h_qs):
    """``h_qs - h_t``, kept symbolic when both operands are PauliOperators."""
    if isinstance(h_t, PauliOperator) and isinstance(h_qs, PauliOperator):
        return h_qs - h_t
    return as_dense(h_qs) - as_dense(h_t)


def _hs(h) -> float:
    return hs_norm(h) if isinstance(h, PauliOperator) else float(np.linalg.norm(h))


def epsilon_star(h_t, h_qs, t: float, delta_h: float | None = None) -> float:
    """``min(1, t * Delta_h / 2)``: every state keeps fidelity at least ``1 - eps``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if delta_h is None:
        delta_h = spectral_diameter(connector(h_t, h_qs))
    return min(1.0, t * delta_h / 2)


def weak_bounds(h_t, h_qs, t: float) -> tuple[float, float]:
    """Unclamped ``b1 = (exp(t Delta_h) - 1) / 2`` and ``b2 = t ||h||_HS``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    h = connector(h_t, h_qs)
    return math.expm1(t * spectral_diameter(h)) / 2, t * _hs(h)


def bch_convergence_check(h_t, h_qs, t: float, norm_choice: str = "spectral") -> bool:
    """Whether ``||h_qs|| + ||h_t|| < pi / t`` for the chosen norm (spectral or HS)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return True
    if norm_choice == "spectral":
        total = spectral_norm(h_qs) + spectral_norm(h_t)
    elif norm_choice in ("hs", "HS"):
        total = _hs(h_qs) + _hs(h_t)
    else:
        raise ValueError(f"unknown norm_choice {norm_choice!r}")
    return total < math.pi / t


def bound_report(h_t, h_qs, t: float, norm_choice: str = "spectral") -> BoundReport:
    h = connector(h_t, h_qs)
    delta = spectral_diameter(h)
    return BoundReport(
        t=float(t),
        delta_h=delta,
        eps_star=min(1.0, t * delta / 2),
        b1=math.expm1(t * delta) / 2,
        b2=t * _hs(h),
        bch_convergent=bch_convergence_check(h_t, h_qs, t, norm_choice),
    )


def bound_table(h_t, h_qs, times, norm_choice: str = "spectral") -> list[BoundReport]:
    """Reports over a time grid, computing the connector spectrum only once."""
    h = connector(h_t, h_qs)
    delta = spectral_diameter(h)
    hs = _hs(h)
    norms = (
        spectral_norm(h_qs) + spectral_norm(h_t)
        if norm_choice == "spectral"
        else _hs(h_qs) + _hs(h_t)
    )
    out = []
    for t in times:
        t = float(t)
        out.append(BoundReport(
            t, delta, min(1.0, t * delta / 2), math.expm1(t * delta) / 2, t * hs,
            True if t == 0 else norms < math.pi / t,
        ))
    return out
