# Propositions about a quantum system are projections, and they form a
# lattice that is orthomodular but not distributive.  This script builds
# small projections and walks through the operations the package provides.

import numpy as np

from qreal import (
    KET_PLUS,
    Projection,
    basis_state,
    com_pair,
    complement,
    join,
    meet,
    sasaki,
)
from qreal.numlin import op_norm

# Three rank-one propositions on a qubit: "spin up", "spin right",
# "spin left".  Each is the projection onto a single state.
up = Projection.rank1(basis_state(2, 0))
right = Projection.rank1(KET_PLUS)
left = Projection.rank1(np.array([1.0, -1.0]) / np.sqrt(2))

print("meet(up, right)  rank:", meet(up, right).rank)
print("join(right, left) rank:", join(right, left).rank)

# The lattice keeps the usual bounds and order.
print("up <= join(up, right):", up.leq(join(up, right)))
print("meet(up, right) <= up:", meet(up, right).leq(up))

# Orthomodularity: whenever p <= q, the part of q outside p restores q.
p = up
q = join(up, right)
restored = join(p, meet(complement(p), q))
print("orthomodular residual:", op_norm(restored.matrix - q.matrix))

# Distributivity fails, and the failure is as large as it can be.
# "right or left" is everything, so the left side is all of "up", while
# both meets on the right side are zero.
lhs = meet(up, join(right, left))
rhs = join(meet(up, right), meet(up, left))
print("distributive gap:", op_norm(lhs.matrix - rhs.matrix))

# The Sasaki hook is the lattice replacement for implication.  For
# commuting propositions it reduces to the classical conditional.
print("sasaki(up, right) rank:", sasaki(up, right).rank)

# com_pair collects the states where two propositions behave classically:
# its range is exactly the kernel of the commutator.
both = com_pair(up, right)
print("classical subspace of (up, right):", both.rank, "dimensional")
print("classical subspace of (up, up):   ", com_pair(up, up).rank, "dimensional")
