"""Search for the k'-local simulator that best reproduces a target.

``minimize_diameter`` minimizes the spectral diameter of the connector over
simulator coefficients, a convex non-smooth problem solved by projected
subgradient descent with Polyak steps and independent restarts.
``short_time_best_simulator`` solves the short-time problem, which reduces to
real linear least squares.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError
from .pauli import GEOMETRIES, PauliOperator, PauliString, generate_interaction_basis
from .spectral import as_dense

__all__ = [
    "SimulatorAnsatz",
    "OptimizationResult",
    "DiameterOptions",
    "ansatz_generators",
    "diameter_objective",
    "minimize_diameter",
    "short_time_best_simulator",
    "short_time_distance_curve",
]


def ansatz_generators(n: int, k_prime: int, geometry: str, include_identity: bool = False) -> list[PauliString]:
    gens = [PauliString.identity(n)] if include_identity else []
    for j in range(1, k_prime + 1):
        gens.extend(generate_interaction_basis(n, j, geometry).generators)
    return gens


@dataclass(frozen=True)
class SimulatorAnsatz:
    """Decision-variable basis of the simulator and its strength floor.

    ``beta`` bounds the coefficients listed in ``floor_set`` from below.  With
    ``beta_convention="trace"`` the floor applies to ``Tr[H_qs Lambda_i]``,
    i.e. to ``2**n * c_i``; with ``"coefficient"`` it applies to ``c_i``.
    """

    n_sites: int
    k_prime: int
    geometry: str
    generators: tuple[PauliString, ...]
    beta: float = 0.0
    floor_set: tuple[int, ...] = ()
    beta_convention: str = "coefficient"

    def __post_init__(self):
        if self.beta < 0:
            raise DomainError("beta must be non-negative")
        if self.beta_convention not in ("coefficient", "trace"):
            raise DomainError(f"unknown beta convention {self.beta_convention!r}")
        for g in self.generators:
            if g.n_sites != self.n_sites or g.locality > self.k_prime:
                raise DomainError(f"generator {g} not allowed in a {self.k_prime}-local ansatz")
        for i in self.floor_set:
            if self.generators[i].locality != self.k_prime:
                raise DomainError("floor_set generators must have locality exactly k_prime")

    @classmethod
    def build(
        cls,
        n_sites: int,
        k_prime: int,
        geometry: str = "chain_periodic",
        beta: float = 0.0,
        floor: str = "all_kprime",
        beta_convention: str = "coefficient",
        include_identity: bool = False,
    ) -> "SimulatorAnsatz":
        if geometry not in GEOMETRIES:
            raise DomainError(f"unknown geometry {geometry!r}")
        if not 1 <= k_prime <= n_sites:
            raise DomainError("k_prime must satisfy 1 <= k_prime <= n_sites")
        gens = ansatz_generators(n_sites, k_prime, geometry, include_identity)
        if floor == "all_kprime":
            fs = tuple(i for i, g in enumerate(gens) if g.locality == k_prime)
        elif floor == "none":
            fs = ()
        else:
            raise DomainError(f"unknown floor mode {floor!r}")
        return cls(n_sites, k_prime, geometry, tuple(gens), beta, fs, beta_convention)

    @classmethod
    def from_dict(cls, data: dict) -> "SimulatorAnsatz":
        return cls.build(
            int(data["n_sites"]), int(data["k_prime"]), data.get("geometry", "chain_periodic"),
            float(data.get("beta", 0.0)), data.get("floor", "all_kprime"),
            data.get("beta_convention", "coefficient"), bool(data.get("include_identity", False)),
        )

    @property
    def coefficient_floor(self) -> float:
        if self.beta_convention == "trace":
            return self.beta / 2 ** self.n_sites
        return self.beta

    def lower_bounds(self) -> np.ndarray:
        lo = np.full(len(self.generators), -np.inf)
        lo[list(self.floor_set)] = self.coefficient_floor
        return lo

    def operator(self, coefficients) -> PauliOperator:
        return PauliOperator(self.n_sites, zip(self.generators, map(float, coefficients)))


@dataclass
class OptimizationResult:
    coefficients: np.ndarray
    objective: float
    iterations: int
    converged: bool
    restarts_agree: bool = True
    restart_objectives: list[float] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def simulator(self, ansatz: SimulatorAnsatz) -> PauliOperator:
        return ansatz.operator(self.coefficients)

    def to_dict(self, ansatz: SimulatorAnsatz) -> dict:
        return {
            "coefficients": {g.letters: float(c) for g, c in zip(ansatz.generators, self.coefficients)},
            "objective": float(self.objective),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "restarts_agree": bool(self.restarts_agree),
            "restart_objectives": [float(x) for x in self.restart_objectives],
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class DiameterOptions:
    restarts: int = 5
    max_iter: int = 5000
    refresh: int = 50
    stall_window: int = 200
    stall_tol: float = 1e-4
    agree_tol: float = 1e-3
    init_scale: float | None = None
    seed: int = 0
    threads: int = 1


def _generator_stack(ansatz: SimulatorAnsatz) -> np.ndarray:
    return np.array([PauliOperator(ansatz.n_sites, {g: 1.0}).dense() for g in ansatz.generators])


def diameter_objective(coefficients, generators: np.ndarray, target: np.ndarray) -> float:
    """``lambda_max - lambda_min`` of ``sum_i c_i Lambda_i - H_t`` (dense inputs)."""
    w = np.linalg.eigvalsh(np.tensordot(coefficients, generators, 1) - target)
    return float(w[-1] - w[0])


def _value_and_subgradient(c, G, T):
    w, V = np.linalg.eigh(np.tensordot(c, G, 1) - T)
    tol = 1e-8 * max(1.0, abs(w[0]), abs(w[-1]))
    # extreme eigenspaces are averaged when degenerate
    vmax = V[:, w >= w[-1] - tol]
    vmin = V[:, w <= w[0] + tol]
    gmax = np.einsum("ia,kij,ja->k", vmax.conj(), G, vmax).real / vmax.shape[1]
    gmin = np.einsum("ia,kij,ja->k", vmin.conj(), G, vmin).real / vmin.shape[1]
    return float(w[-1] - w[0]), gmax - gmin


def _subgradient_run(G, T, lo, c0, opts: DiameterOptions):
    c = np.maximum(c0, lo)
    f, g = _value_and_subgradient(c, G, T)
    best, best_c = f, c.copy()
    delta = 0.1 * max(f, 1e-3)
    history = [best]
    window_start = best
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        gp = g.copy()
        gp[(c <= lo) & (g > 0)] = 0.0
        gg = float(gp @ gp)
        if gg == 0.0:
            converged = True
            break
        # Polyak step towards the current estimate of the optimum
        step = (f - (best - delta)) / gg
        c = np.maximum(c - step * gp, lo)
        f, g = _value_and_subgradient(c, G, T)
        if f < best:
            best, best_c = f, c.copy()
        history.append(best)
        if it % opts.refresh == 0:
            delta = delta / 2 if window_start - best < delta / 2 else delta * 1.5
            window_start = best
        if (
            it > opts.stall_window
            and history[-opts.stall_window - 1] - best < opts.stall_tol
            and delta < opts.stall_tol
        ):
            converged = True
            break
    return best_c, best, it, converged


def minimize_diameter(target, ansatz: SimulatorAnsatz, opts: DiameterOptions | None = None) -> OptimizationResult:
    """Minimize the connector's spectral diameter over the ansatz coefficients.

    Restarts start from independent random points and may run concurrently;
    the best feasible objective wins, ties going to the lowest restart index.
    ``restarts_agree`` certifies that all restarts reached the same value
    within ``opts.agree_tol``, as convexity requires.
    """
    opts = opts or DiameterOptions()
    if not ansatz.generators:
        raise DomainError("the ansatz has no generators")
    T = as_dense(target)
    G = _generator_stack(ansatz)
    lo = ansatz.lower_bounds()
    m = len(ansatz.generators)
    scale = opts.init_scale
    if scale is None:
        scale = float(np.linalg.norm(T)) / math.sqrt(T.shape[0] * max(m, 1))
    seeds = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    starts = [np.random.default_rng(s).normal(scale=scale, size=m) for s in seeds]

    def run(c0):
        return _subgradient_run(G, T, lo, c0, opts)

    if opts.threads > 1 and opts.restarts > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            runs = list(pool.map(run, starts))
    else:
        runs = [run(c0) for c0 in starts]
    objectives = [r[1] for r in runs]
    k = int(np.argmin(objectives))
    c, f, iters, conv = runs[k]
    return OptimizationResult(
        coefficients=c,
        objective=f,
        iterations=int(sum(r[2] for r in runs)),
        converged=all(r[3] for r in runs),
        restarts_agree=bool(max(objectives) - min(objectives) <= opts.agree_tol),
        restart_objectives=objectives,
        metadata={
            "beta": ansatz.beta,
            "beta_convention": ansatz.beta_convention,
            "coefficient_floor": ansatz.coefficient_floor,
            "floor_size": len(ansatz.floor_set),
            "best_restart": k,
            "seed": opts.seed,
        },
    )


def short_time_best_simulator(target, psi0, ansatz: SimulatorAnsatz) -> OptimizationResult:
    """Real coefficients minimizing ``||(H_t - sum_i c_i Lambda_i) psi0||``.

    The columns ``Lambda_i psi0`` are split into real and imaginary parts and
    the system is solved with an SVD-based least-squares routine, giving the
    minimum-norm solution when the design matrix is rank deficient.  The
    distance between the short-time evolved states is ``t`` times the
    returned objective.
    """
    T = as_dense(target)
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise DomainError("psi0 must be normalized")
    if not ansatz.generators:
        return OptimizationResult(np.zeros(0), float(np.linalg.norm(T @ psi0)), 0, True)
    cols = np.column_stack([
        PauliOperator(ansatz.n_sites, {g: 1.0}).dense() @ psi0 for g in ansatz.generators
    ])
    rhs = T @ psi0
    A = np.vstack([cols.real, cols.imag])
    b = np.concatenate([rhs.real, rhs.imag])
    c, _, rank, sv = scipy.linalg.lstsq(A, b, lapack_driver="gelsd")
    resid = rhs - cols @ c
    return OptimizationResult(
        coefficients=c,
        objective=float(np.linalg.norm(resid)),
        iterations=1,
        converged=True,
        metadata={"rank": int(rank), "n_columns": int(A.shape[1]), "n_rows": int(A.shape[0])},
    )


def short_time_distance_curve(result: OptimizationResult, times) -> np.ndarray:
    """Rows ``(t, t * residual)``."""
    times = np.asarray(times, dtype=float)
    return np.column_stack([times, times * result.objective])
