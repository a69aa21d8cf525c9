"""Spin-chain models used by the exact-simulation scenarios.

Two operator conventions are supported.  ``"spin"`` builds every single-site
factor as a spin-1/2 operator ``S = sigma / 2`` (so an m-body product carries
``2**-m``); ``"pauli"`` uses bare Pauli matrices.  The spin convention is the
default because it reproduces the published closed form of the commutator
norm and the 12-dimensional commutator kernel of the field-tuned XXX example.
"""
from __future__ import annotations

from .errors import DomainError
from .pauli import PauliOperator, PauliString

__all__ = [
    "CONVENTIONS",
    "toy_target",
    "xyz_model",
    "xxx_model",
    "uniform_field",
    "xxx_with_fields",
    "toy_commutator_norm_sq",
]

CONVENTIONS = ("spin", "pauli")


def _factor(convention: str, body: int) -> float:
    if convention == "spin":
        return 0.5 ** body
    if convention == "pauli":
        return 1.0
    raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def _ring_term(n: int, start: int, letters: str) -> PauliString:
    return PauliString.from_sites(n, {(start + m) % n: ch for m, ch in enumerate(letters)})


def toy_target(J3: float = 1.0, hx: float = 1.0, n: int = 4, convention: str = "spin") -> PauliOperator:
    """Periodic ZZZ chain with a transverse field, ``sum_j J3 ZZZ + hx X``."""
    if n < 3:
        raise DomainError("the three-body ring needs n >= 3")
    terms = []
    for j in range(n):
        terms.append((_ring_term(n, j, "ZZZ"), J3 * _factor(convention, 3)))
        terms.append((_ring_term(n, j, "X"), hx * _factor(convention, 1)))
    return PauliOperator(n, terms)


def xyz_model(Jx: float, Jy: float, Jz: float, n: int = 4, convention: str = "spin") -> PauliOperator:
    """Periodic nearest-neighbour Heisenberg XYZ chain."""
    f = _factor(convention, 2)
    terms = []
    for j in range(n):
        for letter, J in (("X", Jx), ("Y", Jy), ("Z", Jz)):
            terms.append((_ring_term(n, j, letter * 2), J * f))
    return PauliOperator(n, terms)


def xxx_model(J: float = 1.0, n: int = 4, convention: str = "spin") -> PauliOperator:
    return xyz_model(J, J, J, n=n, convention=convention)


def uniform_field(bx: float, by: float, bz: float, n: int = 4, convention: str = "spin") -> PauliOperator:
    f = _factor(convention, 1)
    terms = []
    for j in range(n):
        for letter, b in (("X", bx), ("Y", by), ("Z", bz)):
            terms.append((_ring_term(n, j, letter), b * f))
    return PauliOperator(n, terms)


def xxx_with_fields(J, bx, by, bz, n: int = 4, convention: str = "spin") -> PauliOperator:
    return xxx_model(J, n, convention) + uniform_field(bx, by, bz, n, convention)


def toy_commutator_norm_sq(J3, hx, Jx, Jy, Jz, convention: str = "spin") -> float:
    """Closed-form squared HS norm of ``[toy_target, xyz_model]`` on four sites.

    In the spin convention this is ``|J3 (Jx-Jy)|^2 / 2 + 8 |hx (Jy-Jz)|^2``.
    Bare Pauli operators rescale the three-body term by ``(2**3 * 2**2)**2``
    and the field term by ``(2 * 2**2)**2``.
    """
    a = abs(J3 * (Jx - Jy)) ** 2
    b = abs(hx * (Jy - Jz)) ** 2
    if convention == "spin":
        return a / 2 + 8 * b
    if convention == "pauli":
        return 512.0 * a + 512.0 * b
    raise DomainError(f"unknown convention {convention!r}")

