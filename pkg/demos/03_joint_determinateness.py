# When do several observables have definite values at once?  Exactly on
# the classical subspace com(A, B, ...), and a joint probability
# distribution for them exists in a state exactly when the state lies in
# that subspace.

import numpy as np

from qreal import (
    Observable,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    basis_state,
    jointly_determinate,
    jpd_exists,
    nowhere_commuting,
)

x = Observable(PAULI_X, name="X")
y = Observable(PAULI_Y, name="Y")
z = Observable(PAULI_Z, name="Z")

# Pauli observables are as incompatible as possible: no state at all
# gives any pair of them simultaneous values.
print("X, Y nowhere commuting:", nowhere_commuting(x, y))

flag, proj = jointly_determinate([x, y], basis_state(2, 0))
print("X, Y determinate at |0>:", flag, " classical subspace rank:", proj.rank)

exists, table = jpd_exists(x, y, basis_state(2, 0))
print("joint distribution exists:", exists)

# Contrast with a partially compatible pair on two qubits: a block where
# they disagree and a block where they are both diagonal.
a = Observable(np.diag([1.0, 2.0, 4.0, 5.0]) + 0j, name="A")
b_matrix = np.zeros((4, 4), dtype=complex)
b_matrix[:2, :2] = PAULI_X
b_matrix[2:, 2:] = np.diag([6.0, 7.0])
b = Observable(b_matrix, name="B")

print("\nA, B nowhere commuting:", nowhere_commuting(a, b))

# Inside the commuting block the pair is determinate and the joint
# distribution is the familiar classical one.
inside = (basis_state(4, 2) + basis_state(4, 3)) / np.sqrt(2)
flag, proj = jointly_determinate([a, b], inside)
print("determinate inside the block:", flag, " subspace rank:", proj.rank)

exists, table = jpd_exists(a, b, inside)
print("joint distribution inside:", exists)
for (lam, mu), weight in sorted(table.items()):
    if weight > 1e-12:
        print(f"  P(A={lam}, B={mu}) = {weight:.3f}")

# Outside that block, no amount of marginal statistics can be stitched
# into a joint distribution.
outside = (basis_state(4, 0) + basis_state(4, 2)) / np.sqrt(2)
flag, _ = jointly_determinate([a, b], outside)
exists, _ = jpd_exists(a, b, outside)
print("determinate straddling the blocks:", flag, " joint distribution:", exists)
