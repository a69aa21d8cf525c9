"""
How far can an approximate simulator drift?
===========================================

The connector h = H_QS - H_T controls the error.  Its spectral diameter gives
a state-independent fidelity floor; two weaker bounds are shown alongside.
"""
import numpy as np

from hamsim.bounds import bound_table
from hamsim.dynamics import fidelity_sweep, haar_state, worst_case_fidelity, worst_case_fidelity_at_t
from hamsim.pauli import random_operator

rng = np.random.default_rng(7)
H_T = random_operator(3, 3, rng, scale=0.1)
H_QS = random_operator(3, 2, rng, scale=0.1)

times = np.linspace(0, 1.0, 6)
print(f"{'t':>5} {'eps*':>8} {'b1':>8} {'b2':>8} {'worst F':>8} {'1-eps*':>8}")
for r in bound_table(H_T, H_QS, times):
    wc = worst_case_fidelity_at_t(H_T, H_QS, r.t)
    print(f"{r.t:5.2f} {r.eps_star:8.4f} {r.b1:8.4f} {r.b2:8.4f} {wc:8.4f} {1 - r.eps_star:8.4f}")

psi = haar_state(8, rng)
curve = fidelity_sweep(H_T, H_QS, psi, times)
print("random state stays above the floor:", bool(np.all(curve.fidelities >= curve.bound_curve)))

value, t_star = worst_case_fidelity(H_T, H_QS, t_max=1.0)
print(f"worst fidelity over states and t <= 1: {value:.6f} at t = {t_star:.4f}")
