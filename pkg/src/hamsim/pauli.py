"""Pauli-string operator algebra with an exact dense realization.

Strings are written site 0 first (``"XIZ"`` acts with X on site 0).  The
dense realization uses the Kronecker ordering in which site 0 is the most
significant qubit, so basis index ``j`` has the bit of site ``s`` at
position ``n - 1 - s``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import CapacityError, DimensionError, DomainError

__all__ = [
    "GEOMETRIES",
    "PRUNE_TOL",
    "DENSE_CAP",
    "PauliString",
    "PauliOperator",
    "InteractionBasis",
    "pauli_product",
    "commutator",
    "hs_norm",
    "spectral_norm",
    "trace_inner_product",
    "generate_interaction_basis",
    "build_z_chain_target",
    "random_operator",
]

LETTERS = "IXYZ"
GEOMETRIES = ("all_subsets", "chain_open", "chain_periodic")
PRUNE_TOL = 1e-14
DENSE_CAP = 12

# single-site products a*b = phase * c
_SITE_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in LETTERS:
    _SITE_PRODUCT[("I", _a)] = (1, _a)
    _SITE_PRODUCT[(_a, "I")] = (1, _a)
    _SITE_PRODUCT[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _SITE_PRODUCT[(_a, _b)] = (1j, _c)
    _SITE_PRODUCT[(_b, _a)] = (-1j, _c)


@total_ordering
@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-site Paulis, e.g. ``PauliString("XIZ")``."""

    letters: str

    def __post_init__(self):
        if not isinstance(self.letters, str) or not self.letters:
            raise DomainError("a Pauli string needs at least one site")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise DomainError(f"invalid Pauli letters {sorted(bad)}; use I, X, Y, Z")

    @classmethod
    def from_sites(cls, n_sites: int, letters: Mapping[int, str]) -> "PauliString":
        chars = ["I"] * n_sites
        for site, letter in letters.items():
            if not 0 <= site < n_sites:
                raise DomainError(f"site {site} outside 0..{n_sites - 1}")
            chars[site] = letter
        return cls("".join(chars))

    @classmethod
    def identity(cls, n_sites: int) -> "PauliString":
        return cls("I" * n_sites)

    @property
    def n_sites(self) -> int:
        return len(self.letters)

    @property
    def locality(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, ch in enumerate(self.letters) if ch != "I")

    def masks(self) -> tuple[int, int, int]:
        """Return ``(x_mask, z_mask, n_y)`` of the bit-flip / phase action."""
        n = self.n_sites
        x_mask = z_mask = 0
        n_y = 0
        for site, ch in enumerate(self.letters):
            bit = 1 << (n - 1 - site)
            if ch in "XY":
                x_mask |= bit
            if ch in "YZ":
                z_mask |= bit
            n_y += ch == "Y"
        return x_mask, z_mask, n_y

    def dense(self, cap: int = DENSE_CAP) -> np.ndarray:
        return PauliOperator(self.n_sites, {self: 1.0}).dense(cap=cap)

    def commutes_with(self, other: "PauliString") -> bool:
        _check_sites(self, other)
        clashes = sum(
            a != "I" and b != "I" and a != b for a, b in zip(self.letters, other.letters)
        )
        return clashes % 2 == 0

    def __lt__(self, other: "PauliString") -> bool:
        # I < X < Y < Z coincides with ASCII order, so plain string order is
        # the lexicographic order over (site, letter).
        return (self.n_sites, self.letters) < (other.n_sites, other.letters)

    def __str__(self) -> str:
        return self.letters


def _as_string(s) -> PauliString:
    return s if isinstance(s, PauliString) else PauliString(s)


def _check_sites(a, b) -> None:
    if a.n_sites != b.n_sites:
        raise DimensionError(f"operands act on {a.n_sites} and {b.n_sites} sites")


def pauli_product(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings: ``a @ b == phase * result``.

    >>> pauli_product(PauliString("X"), PauliString("Y"))
    (1j, PauliString(letters='Z'))
    """
    a, b = _as_string(a), _as_string(b)
    _check_sites(a, b)
    phase: complex = 1
    out = []
    for x, y in zip(a.letters, b.letters):
        p, c = _SITE_PRODUCT[(x, y)]
        phase *= p
        out.append(c)
    return complex(phase), PauliString("".join(out))


class PauliOperator:
    """Weighted sum of Pauli strings on a fixed number of sites.

    Instances are immutable and canonical: duplicate strings are merged,
    coefficients with magnitude at most ``PRUNE_TOL`` are dropped and terms
    are kept in lexicographic string order.  Coefficients are real for
    Hermitian operators; complex weights appear only in results such as
    commutators.
    """

    __slots__ = ("_n", "_terms", "_dense_cache")

    def __init__(self, n_sites: int, terms: Mapping | Iterable = ()):
        if int(n_sites) < 1:
            raise DomainError("n_sites must be positive")
        self._n = int(n_sites)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[PauliString, complex] = {}
        for s, c in items:
            s = _as_string(s)
            if s.n_sites != self._n:
                raise DimensionError(
                    f"string {s.letters!r} has {s.n_sites} sites, expected {self._n}"
                )
            acc[s] = acc.get(s, 0) + complex(c)
        kept = {s: c for s, c in acc.items() if abs(c) > PRUNE_TOL}
        real = all(c.imag == 0 for c in kept.values())
        self._terms = {
            s: (kept[s].real if real else kept[s]) for s in sorted(kept)
        }
        self._dense_cache = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, n_sites: int) -> "PauliOperator":
        return cls(n_sites)

    @classmethod
    def identity(cls, n_sites: int, coeff: float = 1.0) -> "PauliOperator":
        return cls(n_sites, {PauliString.identity(n_sites): coeff})

    @classmethod
    def from_string(cls, letters: str, coeff: complex = 1.0) -> "PauliOperator":
        return cls(len(letters), {PauliString(letters): coeff})

    @classmethod
    def from_sites(cls, n_sites: int, letters: Mapping[int, str], coeff=1.0):
        return cls(n_sites, {PauliString.from_sites(n_sites, letters): coeff})

    # accessors ------------------------------------------------------------
    @property
    def n_sites(self) -> int:
        return self._n

    @property
    def dim(self) -> int:
        return 2 ** self._n

    @property
    def terms(self) -> dict[PauliString, complex]:
        return dict(self._terms)

    def coefficient(self, s) -> complex:
        return self._terms.get(_as_string(s), 0.0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_hermitian(self) -> bool:
        return all(isinstance(c, float) for c in self._terms.values())

    @property
    def locality(self) -> int:
        return max((s.locality for s in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, complex]]:
        return iter(self._terms.items())

    def __repr__(self) -> str:
        body = " ".join(f"{c:+.6g}*{s}" for s, c in list(self._terms.items())[:6])
        more = " ..." if len(self._terms) > 6 else ""
        return f"PauliOperator(n_sites={self._n}, {body or '0'}{more})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, tuple(self._terms.items())))

    def allclose(self, other: "PauliOperator", atol: float = 1e-10) -> bool:
        return (self - other).max_abs_coeff() <= atol

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "PauliOperator":
        if isinstance(other, PauliOperator):
            _check_sites(self, other)
            return other
        return PauliOperator.identity(self._n, other)

    def __add__(self, other):
        other = self._coerce(other)
        return PauliOperator(self._n, itertools.chain(self, other))

    __radd__ = __add__

    def __neg__(self):
        return PauliOperator(self._n, ((s, -c) for s, c in self))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PauliOperator):
            _check_sites(self, other)
            out = []
            for sa, ca in self:
                for sb, cb in other:
                    phase, s = pauli_product(sa, sb)
                    out.append((s, phase * ca * cb))
            return PauliOperator(self._n, out)
        return PauliOperator(self._n, ((s, c * other) for s, c in self))

    def __rmul__(self, other):
        return PauliOperator(self._n, ((s, other * c) for s, c in self))

    def __truediv__(self, other):
        return self * (1.0 / other)

    # dense realization ----------------------------------------------------
    def dense(self, cap: int = DENSE_CAP) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix (a fresh copy on every call)."""
        if self._n > cap:
            raise CapacityError(f"{self._n} sites exceeds the dense cap of {cap}")
        if self._dense_cache is None:
            dim = self.dim
            mat = np.zeros((dim, dim), dtype=complex)
            cols = np.arange(dim)
            for s, c in self:
                x_mask, z_mask, n_y = s.masks()
                parity = _popcount(cols & z_mask) & 1
                phase = (1j ** n_y) * (1 - 2 * parity)
                mat[cols ^ x_mask, cols] += c * phase
            self._dense_cache = mat
        return self._dense_cache.copy()

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if not self.is_hermitian:
            raise DomainError("only real-coefficient operators serialize to the operator format")
        return {
            "n_sites": self._n,
            "terms": [{"coeff": float(c), "string": s.letters} for s, c in self],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PauliOperator":
        n = int(data["n_sites"])
        return cls(n, [(t["string"], float(t["coeff"])) for t in data["terms"]])


def _popcount(arr: np.ndarray) -> np.ndarray:
    arr = arr.astype(np.int64)
    count = np.zeros_like(arr)
    while np.any(arr):
        count += arr & 1
        arr = arr >> 1
    return count


def commutator(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Symbolic ``[a, b] = ab - ba``.

    Only anticommuting string pairs contribute, each as ``2 * a_s * b_t * s t``;
    for Hermitian inputs every weight is purely imaginary.
    """
    _check_sites(a, b)
    out = []
    for sa, ca in a:
        for sb, cb in b:
            if not sa.commutes_with(sb):
                phase, s = pauli_product(sa, sb)
                out.append((s, 2 * phase * ca * cb))
    return PauliOperator(a.n_sites, out)


def hs_norm(a: PauliOperator) -> float:
    """Hilbert-Schmidt (Frobenius) norm from Pauli orthogonality."""
    total = sum(abs(c) ** 2 for _, c in a)
    return math.sqrt(a.dim * total)


def spectral_norm(a, cap: int = DENSE_CAP) -> float:
    """Largest singular value of ``a`` (a PauliOperator or dense matrix)."""
    mat = a.dense(cap=cap) if isinstance(a, PauliOperator) else np.asarray(a)
    if mat.size == 0 or not np.any(mat):
        return 0.0
    if np.allclose(mat, mat.conj().T, atol=0, rtol=0):
        return float(np.max(np.abs(np.linalg.eigvalsh(mat))))
    if np.array_equal(mat, -mat.conj().T):
        return float(np.max(np.abs(np.linalg.eigvalsh(1j * mat))))
    return float(np.linalg.norm(mat, 2))


def trace_inner_product(a, b) -> complex:
    """``Tr[a b]`` for PauliOperators or PauliStrings, without densifying."""
    if isinstance(a, PauliString):
        a = PauliOperator(a.n_sites, {a: 1.0})
    if isinstance(b, PauliString):
        b = PauliOperator(b.n_sites, {b: 1.0})
    _check_sites(a, b)
    total = sum(c * b.coefficient(s) for s, c in a)
    total = a.dim * total
    return total.real if isinstance(total, complex) and total.imag == 0 else total


@dataclass(frozen=True)
class InteractionBasis:
    n_sites: int
    locality_j: int
    geometry: str
    generators: tuple[PauliString, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _site_sets(n: int, j: int, geometry: str) -> list[tuple[int, ...]]:
    if geometry == "all_subsets":
        return list(itertools.combinations(range(n), j))
    if geometry == "chain_open":
        return [tuple(range(s, s + j)) for s in range(n - j + 1)]
    if geometry == "chain_periodic":
        seen = {tuple(sorted((s + m) % n for m in range(j))): None for s in range(n)}
        return list(seen)
    raise DomainError(f"unknown geometry {geometry!r}; expected one of {GEOMETRIES}")


def generate_interaction_basis(n: int, j: int, geometry: str = "all_subsets") -> InteractionBasis:
    """All Pauli strings acting with non-identity letters on exactly ``j`` sites.

    ``chain_*`` geometries restrict the support to ``j`` consecutive sites,
    wrapping around only for ``chain_periodic``.
    """
    if not 1 <= j <= n:
        raise DomainError(f"locality {j} must satisfy 1 <= j <= n = {n}")
    gens = []
    for sites in _site_sets(n, j, geometry):
        for letters in itertools.product("XYZ", repeat=j):
            gens.append(PauliString.from_sites(n, dict(zip(sites, letters))))
    return InteractionBasis(n, j, geometry, tuple(sorted(set(gens))))


def build_z_chain_target(
    n: int, k: int, periodic: bool = True, normalization: float | None = None
) -> PauliOperator:
    """Sum of consecutive ``Z...Z`` windows of length ``k``.

    By default the result is scaled to unit Hilbert-Schmidt norm; pass
    ``normalization`` to use an explicit prefactor instead.
    """
    if not 1 <= k <= n:
        raise DomainError(f"locality {k} must satisfy 1 <= k <= n = {n}")
    starts = range(n) if periodic else range(n - k + 1)
    terms = [
        (PauliString.from_sites(n, {(s + m) % n: "Z" for m in range(k)}), 1.0)
        for s in starts
    ]
    op = PauliOperator(n, terms)
    if normalization is None:
        return op / hs_norm(op)
    return op * normalization


def random_operator(
    n: int,
    max_locality: int,
    rng: np.random.Generator,
    geometry: str = "all_subsets",
    min_locality: int = 1,
    scale: float = 1.0,
) -> PauliOperator:
    """Operator with i.i.d. normal coefficients on every allowed generator."""
    terms = []
    for j in range(min_locality, max_locality + 1):
        for s in generate_interaction_basis(n, j, geometry):
            terms.append((s, scale * rng.normal()))
    return PauliOperator(n, terms)
