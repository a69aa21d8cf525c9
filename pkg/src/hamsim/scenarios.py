"""Scenario files: schema, validation and execution.

A scenario is a JSON object::

    {"kind": "exact_commuting", "seed": 7,
     "parameters": {"n": 4, "J3": 1.0},
     "output_dir": "out/exact"}

Missing parameters take the defaults in ``KINDS[kind].defaults``.  Time grids
are either explicit lists or ``{"start": a, "stop": b, "num": m}``.  Each run
writes its CSV/JSON outputs plus ``manifest.json`` into the output directory.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .bounds import CSV_COLUMNS, bound_table
from .connector_opt import (
    DiameterOptions,
    SimulatorAnsatz,
    minimize_diameter,
    short_time_best_simulator,
    short_time_distance_curve,
)
from .dynamics import PRESETS, fidelity_sweep, haar_state, state_preset, worst_case_fidelity_at_t
from .errors import ContractError, HamsimError
from .io import load_operator, save_operator, write_csv, write_json
from .models import CONVENTIONS, toy_target, uniform_field, xxx_model, xxx_with_fields
from .parent import necessary_condition_check, parent_exists, parent_hamiltonian
from .pauli import (
    DENSE_CAP,
    GEOMETRIES,
    PauliOperator,
    PauliString,
    build_z_chain_target,
    generate_interaction_basis,
    random_operator,
)
from .shared import (
    commutes,
    lemma1_bound,
    scan_coupling,
    shared_subspace,
    simulatable_sets,
)

__all__ = ["KINDS", "TOL_PROFILES", "RunContext", "RunResult", "validate_scenario", "run_scenario", "resolve_times"]

TOL_PROFILES = {
    "default": {"kernel": 1e-9, "fidelity": 1e-8, "parent": 1e-8, "condition": 1e-9, "agree": 1e-3},
    "strict": {"kernel": 1e-11, "fidelity": 1e-10, "parent": 1e-10, "condition": 1e-11, "agree": 1e-4},
}


@dataclass
class RunContext:
    out: Path
    seed: int | None
    threads: int = 1
    tol: dict = field(default_factory=lambda: dict(TOL_PROFILES["default"]))

    def map(self, fn, items):
        items = list(items)
        if self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                return list(pool.map(fn, items))
        return [fn(x) for x in items]


@dataclass
class RunResult:
    report: dict
    outputs: list[str]
    converged: bool = True


@dataclass(frozen=True)
class Kind:
    defaults: dict
    randomized: bool
    runner: Callable


# ---------------------------------------------------------------- helpers

def resolve_times(spec) -> np.ndarray:
    if isinstance(spec, dict):
        return np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"]))
    return np.asarray(spec, dtype=float)


def _operator(spec, n: int, rng: np.random.Generator | None) -> PauliOperator:
    kind = spec.get("type", "random")
    if kind == "random":
        op = random_operator(
            n, int(spec["locality"]), rng, spec.get("geometry", "all_subsets"),
            int(spec.get("min_locality", 1)), float(spec.get("scale", 1.0)),
        )
    elif kind == "z_chain":
        op = build_z_chain_target(n, int(spec["k"]), bool(spec.get("periodic", True)), spec.get("normalization"))
    elif kind == "file":
        op = load_operator(spec["path"])
    elif kind == "terms":
        op = PauliOperator(n, {PauliString(s): c for s, c in spec["terms"].items()})
    else:
        raise ContractError(f"unknown operator type {kind!r}")
    if op.n_sites != n:
        raise ContractError(f"operator acts on {op.n_sites} sites, scenario has n = {n}")
    return op


def _state(spec, n: int, rng: np.random.Generator | None) -> np.ndarray:
    if spec == "haar":
        return haar_state(2 ** n, rng)
    return state_preset(spec, n)


def _rng(ctx: RunContext) -> np.random.Generator:
    return np.random.default_rng(ctx.seed)


def _dims(sets) -> str:
    return ";".join(str(s.dim) for s in sets)


def _fidelity_rows(h_t, h_qs, sets, times, rng, per_set, prefix):
    rows, worst = [], 1.0
    for si, s in enumerate(sets):
        for k in range(per_set):
            curve = fidelity_sweep(h_t, h_qs, s.random_state(rng), times)
            worst = min(worst, float(curve.fidelities.min()))
            rows.extend([*prefix, si, k, t, f] for t, f, _ in curve.rows())
    return rows, worst


# ---------------------------------------------------------------- runners

def _run_exact_commuting(p, ctx: RunContext) -> RunResult:
    n, conv = p["n"], p["convention"]
    T = toy_target(p["J3"], p["hx"], n, conv)
    scan = scan_coupling(T, xxx_model(1.0, n, conv), tol=ctx.tol["kernel"])
    times = resolve_times(p["times"])
    rng = _rng(ctx)
    crossing_rows, sweep_rows, worst = [], [], 1.0
    for ci, c in enumerate(scan.crossings):
        sets = simulatable_sets(T, xxx_model(c.J, n, conv))
        rows, w = _fidelity_rows(T, xxx_model(c.J, n, conv), sets, times, rng, p["states_per_set"], (ci, c.J))
        sweep_rows += rows
        worst = min(worst, w)
        crossing_rows.append((ci, c.J, len(c.pairs), len(sets), _dims(sets), w))
    write_csv(ctx.out / "crossings.csv", ("crossing", "J", "n_pairs", "n_sets", "set_dims", "min_fidelity"), crossing_rows)
    write_csv(ctx.out / "fidelity_sweeps.csv", ("crossing", "J", "set", "state", "t", "fidelity"), sweep_rows)
    report = {
        "n_crossings": len(scan.crossings),
        "crossings": [c.J for c in scan.crossings],
        "n_always_degenerate_pairs": len(scan.always_degenerate),
        "min_fidelity": worst,
        "fidelity_within_tolerance": bool(1 - worst <= ctx.tol["fidelity"]),
    }
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["crossings.csv", "fidelity_sweeps.csv", "report.json"])


def _run_exact_noncommuting(p, ctx: RunContext) -> RunResult:
    n, conv = p["n"], p["convention"]
    T = toy_target(p["J3"], p["hx"], n, conv)
    outputs = []
    field_vec = (p["bx"], p["by"], p["bz"])
    grid = p["field_grid"]
    if grid:
        rows = []
        for b in itertools.product(grid["bx"], grid["by"], grid["bz"]):
            Q = xxx_with_fields(p["J_probe"], *b, n=n, convention=conv)
            if commutes(T, Q):
                rows.append((*b, 2 ** n, 2 ** n))
                continue
            rows.append((*b, shared_subspace(T, Q, ctx.tol["kernel"]).n_theta,
                         shared_subspace(T, Q, ctx.tol["kernel"], method="invariant").n_theta))
        write_csv(ctx.out / "nullity_grid.csv", ("bx", "by", "bz", "n_theta", "n_exact"), rows)
        outputs.append("nullity_grid.csv")
        if any(v is None for v in field_vec):
            best = max(rows, key=lambda r: (r[3] if r[3] < 2 ** n else -1, r[4]))
            field_vec = best[:3]
    Q_probe = xxx_with_fields(p["J_probe"], *field_vec, n=n, convention=conv)
    theta = shared_subspace(T, Q_probe, ctx.tol["kernel"])
    write_json(ctx.out / "shared_subspace.json", theta.to_dict())
    bound = lemma1_bound(T, Q_probe)
    F = uniform_field(*field_vec, n=n, convention=conv)
    scan = scan_coupling(T, xxx_model(1.0, n, conv), F, tol=ctx.tol["kernel"])
    times = resolve_times(p["times"])
    rng = _rng(ctx)
    crossing_rows, sweep_rows, worst = [], [], 1.0
    for ci, c in enumerate(scan.crossings):
        Q = xxx_with_fields(c.J, *field_vec, n=n, convention=conv)
        sets = simulatable_sets(T, Q)
        rows, w = _fidelity_rows(T, Q, sets, times, rng, p["states_per_set"], (ci, c.J))
        sweep_rows += rows
        worst = min(worst, w)
        crossing_rows.append((ci, c.J, len(c.pairs), len(sets), _dims(sets), w))
    write_csv(ctx.out / "crossings.csv", ("crossing", "J", "n_pairs", "n_sets", "set_dims", "min_fidelity"), crossing_rows)
    write_csv(ctx.out / "fidelity_sweeps.csv", ("crossing", "J", "set", "state", "t", "fidelity"), sweep_rows)
    report = {
        "field": list(field_vec),
        "J_probe": p["J_probe"],
        "n_theta": theta.n_theta,
        "n_exact_shared": int(theta.exact_mask().sum()),
        "lemma1_bound": bound,
        "n_crossings": len(scan.crossings),
        "crossings": [c.J for c in scan.crossings],
        "n_degenerate_clusters": sum(r[3] for r in crossing_rows),
        "min_fidelity": worst,
        "fidelity_within_tolerance": bool(1 - worst <= ctx.tol["fidelity"]),
    }
    write_json(ctx.out / "report.json", report)
    return RunResult(report, outputs + ["shared_subspace.json", "crossings.csv", "fidelity_sweeps.csv", "report.json"])


def _run_shared_bound(p, ctx: RunContext) -> RunResult:
    n = p["n"]
    rng = _rng(ctx)
    pairs = []
    while len(pairs) < p["pairs"]:
        a = random_operator(n, p["target_locality"], rng, p["geometry"])
        b = random_operator(n, p["simulator_locality"], rng, p["geometry"])
        if not commutes(a, b):
            pairs.append((a, b))

    def one(ab):
        a, b = ab
        theta = shared_subspace(a, b, ctx.tol["kernel"])
        return lemma1_bound(a, b), theta.n_theta, int(theta.exact_mask().sum())

    results = ctx.map(one, pairs)
    rows = [(i, bnd, nt, ne, bool(bnd < nt - 1e-9)) for i, (bnd, nt, ne) in enumerate(results)]
    write_csv(ctx.out / "bound.csv", ("pair", "bound", "n_theta", "n_exact", "violation"), rows)
    sat = []
    for m in range(1, p["saturation_max_n"] + 1):
        sat.append((m, lemma1_bound(PauliOperator.from_sites(m, {m - 1: "X"}), PauliOperator.from_sites(m, {m - 1: "Y"}))))
    write_csv(ctx.out / "saturation.csv", ("n", "bound"), sat)
    report = {
        "pairs": len(rows),
        "violations": sum(r[4] for r in rows),
        "saturation_bounds": [b for _, b in sat],
    }
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["bound.csv", "saturation.csv", "report.json"])


def _run_diameter_min(p, ctx: RunContext) -> RunResult:
    n = p["n"]
    ansatz = SimulatorAnsatz.build(
        n, p["k_prime"], p["geometry"], p["beta"], p["floor"], p["beta_convention"], p["include_identity"],
    )
    rows, converged, results = [], True, {}
    for k in p["k_values"]:
        target = build_z_chain_target(n, k, p["periodic_target"])
        opts = DiameterOptions(
            restarts=p["restarts"], max_iter=p["max_iter"], agree_tol=ctx.tol["agree"],
            seed=int(np.random.SeedSequence([ctx.seed, k]).generate_state(1)[0]), threads=ctx.threads,
        )
        res = minimize_diameter(target, ansatz, opts)
        ok = res.converged and res.restarts_agree
        converged &= ok
        rows.append((k, res.objective, res.restarts_agree, res.converged, res.iterations))
        results[str(k)] = res.to_dict(ansatz)
    write_csv(ctx.out / "diameter.csv", ("k", "objective", "restarts_agree", "converged", "iterations"), rows)
    objs = [r[1] for r in rows]
    report = {
        "objectives": dict(zip(map(str, p["k_values"]), objs)),
        "monotone_nonincreasing": all(a >= b - ctx.tol["agree"] for a, b in zip(objs, objs[1:])),
        "converged": converged,
        "results": results,
    }
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["diameter.csv", "report.json"], converged)


def _run_short_time(p, ctx: RunContext) -> RunResult:
    n = p["n"]
    rng = _rng(ctx)
    target = _operator(p["target"], n, rng)
    save_operator(ctx.out / "target.json", target)
    ansatz = SimulatorAnsatz.build(
        n, p["k_prime"], p["geometry"], 0.0, "none", include_identity=p["include_identity"],
    )
    times = resolve_times(p["times"])
    curves, fits = [], {}
    for name in p["states"]:
        res = short_time_best_simulator(target, _state(name, n, rng), ansatz)
        curves.append(short_time_distance_curve(res, times)[:, 1])
        fits[name] = res.to_dict(ansatz)
    write_csv(ctx.out / "short_time.csv", ("t", *p["states"]), zip(times.tolist(), *(c.tolist() for c in curves)))
    report = {"residuals": {k: v["objective"] for k, v in fits.items()}, "fits": fits}
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["target.json", "short_time.csv", "report.json"])


def _run_bounds_compare(p, ctx: RunContext) -> RunResult:
    n = p["n"]
    rng = _rng(ctx)
    h_t = _operator(p["target"], n, rng)
    h_qs = _operator(p["simulator"], n, rng)
    table = bound_table(h_t, h_qs, resolve_times(p["times"]), p["norm_choice"])
    write_csv(ctx.out / "bounds.csv", CSV_COLUMNS, ([getattr(r, c) for c in CSV_COLUMNS] for r in table))
    sign = [np.sign(r.b1 - r.b2) for r in table]
    flips = [table[i + 1].t for i in range(len(table) - 1) if sign[i] * sign[i + 1] < 0]
    report = {
        "b1_below_b2": sum(r.b1 < r.b2 for r in table),
        "b1_above_b2": sum(r.b1 > r.b2 for r in table),
        "first_crossing_t": flips[0] if flips else None,
        "floor_tighter_everywhere": all(r.t * r.delta_h / 2 <= min(r.b1, r.b2) + 1e-12 for r in table),
    }
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["bounds.csv", "report.json"])


def _run_fidelity_sweep(p, ctx: RunContext) -> RunResult:
    n = p["n"]
    rng = _rng(ctx)
    h_t = _operator(p["target"], n, rng)
    h_qs = _operator(p["simulator"], n, rng)
    psi = _state(p["state"], n, rng)
    times = resolve_times(p["times"])
    curve = fidelity_sweep(h_t, h_qs, psi, times)
    write_csv(ctx.out / "fidelity.csv", ("t", "fidelity", "bound"), curve.rows())
    outputs = ["fidelity.csv"]
    report = {"min_fidelity": float(curve.fidelities.min()) if len(times) else None}
    if p["worst_case"]:
        worst = ctx.map(lambda t: worst_case_fidelity_at_t(h_t, h_qs, t), times.tolist())
        write_csv(ctx.out / "worst_case.csv", ("t", "worst_case", "bound"), zip(times.tolist(), worst, curve.bound_curve.tolist()))
        outputs.append("worst_case.csv")
        report["bound_respected"] = bool(all(w >= b - 1e-9 for w, b in zip(worst, curve.bound_curve)))
    write_json(ctx.out / "report.json", report)
    return RunResult(report, outputs + ["report.json"])


def _run_parent_check(p, ctx: RunContext) -> RunResult:
    n, k = p["n"], p["k"]
    rng = _rng(ctx)
    psi = _state(p["state"], n, rng)
    gens = [g for j in range(1, k + 1) for g in generate_interaction_basis(n, j, p["geometry"]).generators]
    flag, kernel = parent_exists(psi, gens, ctx.tol["parent"])
    rows = []
    for col in range(kernel.shape[1]):
        H = parent_hamiltonian(gens, kernel[:, col]).dense()
        Hpsi = H @ psi
        energy = np.vdot(psi, Hpsi).real
        rows.append((col, energy, float(np.linalg.norm(Hpsi - energy * psi))))
    write_csv(ctx.out / "parents.csv", ("parent", "energy", "eigen_residual"), rows)
    report = {"n_generators": len(gens), "parent_exists": flag, "kernel_dim": int(kernel.shape[1])}
    if p["k_prime"] is not None:
        try:
            cond = necessary_condition_check(psi, k, p["k_prime"], ctx.tol["condition"], p["geometry"])
            report["necessary_condition"] = cond.to_dict()
        except HamsimError as exc:
            report["necessary_condition"] = {"skipped": str(exc)}
    write_json(ctx.out / "report.json", report)
    return RunResult(report, ["parents.csv", "report.json"])


_TIMES_EXACT = {"start": 0.0, "stop": 10.0, "num": 50}
_RANDOM_T = {"type": "random", "locality": 3}
_RANDOM_S = {"type": "random", "locality": 2}

KINDS: dict[str, Kind] = {
    "exact_commuting": Kind(
        {"n": 4, "J3": 1.0, "hx": 1.0, "convention": "spin", "times": _TIMES_EXACT, "states_per_set": 3},
        True, _run_exact_commuting,
    ),
    "exact_noncommuting": Kind(
        {"n": 4, "J3": 1.0, "hx": 1.0, "bx": -4.0, "by": 0.0, "bz": 1.0, "J_probe": 1.0,
         "convention": "spin", "times": _TIMES_EXACT, "states_per_set": 3, "field_grid": None},
        True, _run_exact_noncommuting,
    ),
    "shared_bound": Kind(
        {"n": 3, "pairs": 200, "target_locality": 3, "simulator_locality": 2,
         "geometry": "all_subsets", "saturation_max_n": 5},
        True, _run_shared_bound,
    ),
    "diameter_min": Kind(
        {"n": 5, "k_prime": 2, "k_values": [3, 4, 5], "geometry": "chain_periodic", "beta": 0.01,
         "beta_convention": "coefficient", "floor": "all_kprime", "include_identity": False,
         "periodic_target": True, "restarts": 5, "max_iter": 5000},
        True, _run_diameter_min,
    ),
    "short_time": Kind(
        {"n": 3, "k_prime": 2, "geometry": "chain_open", "include_identity": True, "target": _RANDOM_T,
         "states": ["cosdit", "zero", "ghz", "w"], "times": {"start": 0.0, "stop": 0.1, "num": 11}},
        True, _run_short_time,
    ),
    "bounds_compare": Kind(
        {"n": 3, "target": _RANDOM_T, "simulator": _RANDOM_S, "norm_choice": "spectral",
         "times": {"start": 0.0, "stop": 0.2, "num": 41}},
        True, _run_bounds_compare,
    ),
    "fidelity_sweep": Kind(
        {"n": 3, "target": _RANDOM_T, "simulator": _RANDOM_S, "state": "haar", "worst_case": True,
         "times": {"start": 0.0, "stop": 1.0, "num": 21}},
        True, _run_fidelity_sweep,
    ),
    "parent_check": Kind(
        {"n": 3, "k": 2, "k_prime": None, "geometry": "all_subsets", "state": "haar"},
        True, _run_parent_check,
    ),
}


# ---------------------------------------------------------------- validation

def _check_times(spec, where: str, diags: list[str]) -> None:
    try:
        t = resolve_times(spec)
    except (TypeError, ValueError, KeyError):
        diags.append(f"{where}: malformed time grid")
        return
    if t.ndim != 1 or not np.all(np.isfinite(t)):
        diags.append(f"{where}: malformed time grid")
    elif np.any(t < 0):
        diags.append(f"{where}: negative time in grid")
    elif np.any(np.diff(t) < 0):
        diags.append(f"{where}: time grid is not ascending")


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_operator(spec, name: str, n, diags: list[str]) -> None:
    if not isinstance(spec, dict):
        diags.append(f"{name}: operator spec must be an object")
        return
    kind = spec.get("type", "random")
    if kind == "random":
        loc = spec.get("locality")
        if not _is_int(loc) or loc < 1:
            diags.append(f"{name}: locality must be a positive integer")
        elif _is_int(n) and loc > n:
            diags.append(f"{name}: locality exceeds system size")
        if spec.get("geometry", "all_subsets") not in GEOMETRIES:
            diags.append(f"{name}: unknown geometry")
    elif kind == "z_chain":
        k = spec.get("k")
        if not _is_int(k) or k < 1:
            diags.append(f"{name}: k must be a positive integer")
        elif _is_int(n) and k > n:
            diags.append(f"{name}: locality exceeds system size")
    elif kind == "file":
        if not Path(str(spec.get("path", ""))).is_file():
            diags.append(f"{name}: operator file not found")
    elif kind == "terms":
        terms = spec.get("terms")
        if not isinstance(terms, dict) or any(not isinstance(s, str) or len(s) != n for s in terms):
            diags.append(f"{name}: terms must map length-n Pauli strings to coefficients")
    else:
        diags.append(f"{name}: unknown operator type {kind!r}")


def _check_params(kind: str, p: dict, diags: list[str]) -> None:
    n = p.get("n")
    if not _is_int(n) or n < 1:
        diags.append("n must be a positive integer")
        n = None
    elif n > DENSE_CAP:
        diags.append(f"n = {n} exceeds the dense capacity {DENSE_CAP}")
    for key in ("k", "k_prime", "target_locality", "simulator_locality"):
        v = p.get(key)
        if v is None:
            continue
        if not _is_int(v) or v < 1:
            diags.append(f"{key} must be a positive integer")
        elif n is not None and v > n:
            diags.append(f"{key}: locality exceeds system size")
    for k in p.get("k_values", []) or []:
        if not _is_int(k) or k < 1:
            diags.append("k_values must hold positive integers")
        elif n is not None and k > n:
            diags.append(f"k_values: locality exceeds system size")
    if "beta" in p and (not isinstance(p["beta"], (int, float)) or p["beta"] < 0):
        diags.append("beta must be non-negative")
    if p.get("geometry", "all_subsets") not in GEOMETRIES:
        diags.append(f"unknown geometry {p.get('geometry')!r}; expected one of {GEOMETRIES}")
    if p.get("convention", "spin") not in CONVENTIONS:
        diags.append(f"unknown convention {p.get('convention')!r}")
    if "times" in p:
        _check_times(p["times"], "times", diags)
    for key in ("target", "simulator"):
        if key in p:
            _check_operator(p[key], key, n, diags)
    states = list(p.get("states", [])) + ([p["state"]] if "state" in p else [])
    for s in states:
        if s not in PRESETS + ("haar",):
            diags.append(f"unknown state {s!r}; expected one of {PRESETS + ('haar',)}")
    for key in ("pairs", "restarts", "max_iter", "states_per_set", "saturation_max_n"):
        if key in p and (not _is_int(p[key]) or p[key] < 1):
            diags.append(f"{key} must be a positive integer")
    if kind == "exact_commuting" or kind == "exact_noncommuting":
        if n is not None and n < 3:
            diags.append("the three-body ring needs n >= 3")
    if kind == "exact_noncommuting":
        field_vec = [p.get(c) for c in ("bx", "by", "bz")]
        grid = p.get("field_grid")
        if any(v is None for v in field_vec) and not grid:
            diags.append("field components may be null only when field_grid is given")
        if grid is not None and (not isinstance(grid, dict) or any(
                not isinstance(grid.get(c), list) or not grid.get(c) for c in ("bx", "by", "bz"))):
            diags.append("field_grid must give non-empty bx, by and bz lists")
    if kind == "diameter_min":
        if p.get("beta_convention") not in ("coefficient", "trace"):
            diags.append("beta_convention must be 'coefficient' or 'trace'")
        if p.get("floor") not in ("all_kprime", "none"):
            diags.append("floor must be 'all_kprime' or 'none'")
    if kind == "parent_check" and p.get("k_prime") is not None and _is_int(p.get("k")):
        if p["k_prime"] >= p["k"]:
            diags.append("k_prime must be smaller than k")
    if p.get("norm_choice", "spectral") not in ("spectral", "hs"):
        diags.append("norm_choice must be 'spectral' or 'hs'")


def validate_scenario(data, seed_override: int | None = None) -> list[str]:
    """Schema and physics diagnostics; an empty list means the scenario is runnable."""
    if not isinstance(data, dict):
        return ["scenario must be a JSON object"]
    diags: list[str] = []
    kind = data.get("kind")
    if kind not in KINDS:
        return [f"unknown kind {kind!r}; valid kinds: {', '.join(KINDS)}"]
    extra = set(data) - {"kind", "parameters", "seed", "output_dir"}
    if extra:
        diags.append(f"unknown top-level keys: {', '.join(sorted(extra))}")
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        return diags + ["parameters must be an object"]
    unknown = set(params) - set(KINDS[kind].defaults)
    if unknown:
        diags.append(f"unknown parameters for {kind}: {', '.join(sorted(unknown))}")
    seed = data.get("seed") if seed_override is None else seed_override
    if KINDS[kind].randomized and seed is None:
        diags.append("seed is required for this scenario kind")
    elif seed is not None and (not _is_int(seed) or seed < 0):
        diags.append("seed must be a non-negative integer")
    if "output_dir" in data and not isinstance(data["output_dir"], str):
        diags.append("output_dir must be a string")
    _check_params(kind, {**KINDS[kind].defaults, **params}, diags)
    return diags


def run_scenario(data: dict, ctx: RunContext) -> RunResult:
    """Execute a validated scenario and write its manifest."""
    kind = KINDS[data["kind"]]
    params = {**kind.defaults, **data.get("parameters", {})}
    ctx.out.mkdir(parents=True, exist_ok=True)
    result = kind.runner(params, ctx)
    write_json(ctx.out / "manifest.json", {
        "kind": data["kind"],
        "parameters": params,
        "seed": ctx.seed,
        "version": __version__,
        "tolerances": ctx.tol,
        "outputs": sorted(result.outputs),
        "converged": result.converged,
    })
    return result
