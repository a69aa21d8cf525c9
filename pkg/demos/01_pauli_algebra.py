"""
Pauli strings and operators
===========================

Building Hamiltonians symbolically and checking them against dense matrices.
"""
import numpy as np

from hamsim.pauli import PauliOperator, PauliString, commutator, generate_interaction_basis, hs_norm, pauli_product

# X on site 0 times Y on site 0 gives i Z
phase, s = pauli_product(PauliString("XI"), PauliString("YI"))
print("XI * YI =", phase, s)

# a two-site Heisenberg bond plus a field
bond = PauliOperator(2, {"XX": 1.0, "YY": 1.0, "ZZ": 1.0})
field = PauliOperator(2, {"ZI": 0.5, "IZ": 0.5})
H = bond + field
print(H)
print("eigenvalues:", np.round(np.linalg.eigvalsh(H.dense()), 6))

# the bond commutes with the total-Z field; a transverse field does not
print("||[bond, Z field]||_HS =", hs_norm(commutator(bond, field)))
print("||[bond, XI]||_HS      =", hs_norm(commutator(bond, PauliOperator.from_string("XI"))))

for geometry in ("all_subsets", "chain_open", "chain_periodic"):
    basis = generate_interaction_basis(4, 2, geometry)
    print(f"two-body generators on 4 sites, {geometry}: {len(basis)}")
