"""
Parent Hamiltonians
===================

A state is an eigenstate of sum_i c_i L_i exactly when c lies in the kernel
of the generator covariance matrix.
"""
import numpy as np

from hamsim.parent import det_sum_identity_check, necessary_condition_check, parent_exists, parent_hamiltonian
from hamsim.pauli import generate_interaction_basis

flag, kernel = parent_exists([1, 0], ["X", "Y", "Z"])
print("parent of |0> among X, Y, Z:", kernel.ravel().round(6))

ghz = np.zeros(8)
ghz[[0, 7]] = 1 / np.sqrt(2)
gens = [g for j in (1, 2) for g in generate_interaction_basis(3, j)]
flag, kernel = parent_exists(ghz, gens)
print(f"GHZ has {kernel.shape[1]} independent two-body parents")
H = parent_hamiltonian(gens, kernel[:, 0])
print("one of them:", H)

# mixed-minor expansion of det(A + B)
rng = np.random.default_rng(0)
A, B = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
print("minor expansion vs direct:", det_sum_identity_check(A, B))

# the determinant test separates a product state from a generic one
phi = np.array([0.6, 0.8j])
blocks = (["ZX", "ZY"], ["IX", "IZ", "ZI"])
print("product state:", necessary_condition_check(np.kron([1, 0], phi), blocks=blocks).condition_met)
psi = rng.normal(size=4) + 1j * rng.normal(size=4)
print("generic state:", necessary_condition_check(psi / np.linalg.norm(psi), blocks=blocks).condition_met)
