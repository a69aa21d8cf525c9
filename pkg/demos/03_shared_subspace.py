"""
Shared eigenvectors of a non-commuting pair
===========================================

Adding a uniform field to the Heisenberg ring breaks commutation with the
target, but a large set of eigenvectors can survive.
"""
import numpy as np

from hamsim.models import toy_target, uniform_field, xxx_model, xxx_with_fields
from hamsim.shared import lemma1_bound, scan_coupling, shared_subspace, simulatable_sets
from hamsim.dynamics import fidelity

H_T = toy_target()
H_QS = xxx_with_fields(1.0, -4.0, 0.0, 1.0)

kernel = shared_subspace(H_T, H_QS)
exact = shared_subspace(H_T, H_QS, method="invariant")
print("dimension of the commutator kernel:", kernel.n_theta)
print("exact common eigenvectors:        ", exact.n_theta)
print("upper bound from the norm ratio:  ", lemma1_bound(H_T, H_QS))

# the kernel vector that is not an eigenvector
print("residuals ||H_T v - e v||:", np.round(kernel.residual_a, 12))

# scan the coupling with the field held fixed
scan = scan_coupling(H_T, xxx_model(1.0), uniform_field(-4.0, 0.0, 1.0))
print("degeneracy couplings:", np.round([c.J for c in scan.crossings], 4))

J = scan.crossings[1].J
Q = xxx_with_fields(J, -4.0, 0.0, 1.0)
rng = np.random.default_rng(0)
for s in simulatable_sets(H_T, Q):
    psi = s.random_state(rng)
    print(f"  set of dim {s.dim}: fidelity at t = 7 is {fidelity(H_T, Q, psi, 7.0):.15f}")
