# Formulas about observable values are written in a small language and
# evaluated against a state: a formula holds exactly when the state sits
# inside the projection the formula denotes.

import numpy as np

from qreal import (
    Environment,
    KET_PLUS,
    Observable,
    PAULI_X,
    PAULI_Z,
    ParseError,
    basis_state,
    holds_in,
    parse,
    truth_projection,
    unparse,
)

# Parsing produces a small syntax tree.  Value sets are canonicalized:
# sorted, deduplicated, negative zero normalized away.
formula = parse("Z in {1.0, 1, -0.0}")
print("canonical form:", unparse(formula))

# Operator precedence is ~ then & then | then -> then <->, so this parses
# without any parentheses.  Unparsing inserts only the brackets it needs.
chain = parse("~Z in {1} & X in {1} | Z in {-1} -> X in {-1} <-> Z in {1}")
print("round trip:", unparse(chain))

# Errors carry the byte offset and what the parser wanted versus found.
try:
    parse("Z in {1} X in {1}")
except ParseError as err:
    print("parse error:", err)

# Evaluation needs an environment binding names to observables.
env = Environment({"Z": Observable(PAULI_Z, name="Z"), "X": Observable(PAULI_X, name="X")})

up = basis_state(2, 0)
report = holds_in(parse("Z in {1}"), env, up)
print("Z in {1} at |0>:", report.holds, " probability", round(report.probability, 6))

# "X in {1}" neither holds nor fails with certainty at |0>: the state is
# not inside the projection, and the probability shows the Born weight.
report = holds_in(parse("X in {1}"), env, up)
print("X in {1} at |0>:", report.holds, " probability", round(report.probability, 6))

# [Z = X] asks whether the two observables agree as values in the state.
# For a qubit they never commute, yet the equality projection is still a
# perfectly good proposition; here it is the zero projection.
proj = truth_projection(parse("[Z = X]"), env)
print("[Z = X] projection rank:", proj.rank)

# com(Z, X) denotes the subspace where the listed observables all behave
# classically together.
proj = truth_projection(parse("com(Z, X)"), env)
print("com(Z, X) projection rank:", proj.rank)

# At |+> the conditional "if X is 1 then Z is in {-1, 1}" holds trivially.
report = holds_in(parse("X in {1} -> Z in {-1, 1}"), env, KET_PLUS)
print("conditional at |+>:", report.holds)
