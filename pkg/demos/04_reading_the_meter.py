# A measurement is modeled concretely: couple the system to a probe with
# a unitary, then read a pointer observable on the probe.  The package
# checks whether that procedure really measures a given observable, and
# what it costs when it does not.

import numpy as np

from qreal import (
    CNOT,
    KET_PLUS,
    MeasurementModel,
    Observable,
    PAULI_X,
    PAULI_Z,
    basis_state,
    measures_in_state,
    output_distribution,
    povm,
    rms_disturbance,
    rms_noise,
    uncertainty_report,
)

# The textbook example: CNOT copies the computational basis onto the
# probe, and the pointer is Z on the probe.
model = MeasurementModel(
    sys_dim=2,
    probe_dim=2,
    probe_state=basis_state(2, 0),
    unitary=CNOT,
    meter=Observable(PAULI_Z, name="M"),
    label_maps={"f": {1.0: 1.0, -1.0: -1.0}},
)

z = Observable(PAULI_Z, name="Z")
x = Observable(PAULI_X, name="X")
f = model.label_maps["f"]

# The induced POVM on the system is sharp here: the effects are the
# spectral projections of Z.
print("POVM effects:")
for outcome, effect in povm(model):
    print(f"  outcome {outcome}: diag {np.real(np.diag(effect)).round(6)}")

# Pointer statistics in a concrete state.
psi = np.array([0.6, 0.8])
print("pointer distribution at 0.6|0> + 0.8|1>:",
      {m: round(p, 4) for m, p in output_distribution(model, psi).items()})

# The certificate: after the interaction, the mapped pointer value and
# the target observable agree on the final state, value by value.
cert = measures_in_state(model, z, f, psi)
print("measures Z here:", cert.passed, " defect", f"{cert.defect:.2e}")

# The same apparatus does not measure X.  The certificate fails and the
# root mean square noise quantifies by how much.
cert = measures_in_state(model, x, f, KET_PLUS)
print("measures X at |+>:", cert.passed, " defect", f"{cert.defect:.4f}")
print("rms noise for X at |+>:", f"{rms_noise(model, x, f, KET_PLUS):.4f}")

# Measuring in the basis necessarily disturbs the conjugate observable.
print("rms disturbance of X:", f"{rms_disturbance(model, x, KET_PLUS):.4f}")
print("rms disturbance of Z:", f"{rms_disturbance(model, z, KET_PLUS):.2e}")

# Noise on Z and disturbance on X obey the trade-off inequality.
report = uncertainty_report(model, z, f, x, KET_PLUS)
print("noise(Z)*dist(X) + noise*sigma + sigma*dist =",
      f"{report.lhs:.4f}", ">= bound", f"{report.bound:.4f}",
      "->", "satisfied" if report.satisfied else "violated")
