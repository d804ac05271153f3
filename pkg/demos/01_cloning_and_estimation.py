"""Clone a qubit, then estimate it from the two extra output qubits.

The 1->2 universal cloner turns one unknown qubit into a three-qubit
state whose first two marginals are equally good 5/6-fidelity copies.
Measuring the second qubit in the |+>/|-> basis and the third in the
computational basis gives one bit about the phase and one bit about the
populations.
"""

import numpy as np

from clonerestore import (
    Outcome,
    fidelity,
    make_pure,
    outcome_probability,
    reduce_qubit,
    uqcm_output,
)

psi = make_pure(0.7, 1.2)
print(f"input state: alpha^2 = {psi.alpha2:.3f}, phi = {psi.phi:.3f}")

cloned = uqcm_output(psi)
print("\nclone fidelities (5/6 for every input):")
for qubit in (1, 2):
    print(f"  qubit {qubit}: {fidelity(psi, reduce_qubit(cloned, qubit)):.12f}")
print(f"  ancilla (qubit 3): {fidelity(psi, reduce_qubit(cloned, 3)):.12f}")

print("\njoint outcome probabilities:")
for outcome in Outcome:
    print(f"  p({outcome.label}) = {outcome_probability(psi, outcome):.6f}")

p_plus = sum(outcome_probability(psi, o) for o in Outcome if o.sign == "+")
p_zero = sum(outcome_probability(psi, o) for o in Outcome if o.bit == 0)
print(f"\nsign marginal p(+) = {p_plus:.6f}"
      f"  (formula: {0.5 * (1 + 4 / 3 * psi.alpha * psi.beta * np.cos(psi.phi)):.6f})")
print(f"bit marginal  p(0) = {p_zero:.6f}  (formula: {(1 + psi.alpha2) / 3:.6f})")
print("\np(+) > 1/2 signals cos(phi) > 0; p(0) > 1/2 signals alpha > beta.")
