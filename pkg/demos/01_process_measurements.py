#!/usr/bin/env python3
"""Measuring a quantum channel with test states and POVMs.

Any experiment that probes a channel -- prepare a (possibly entangled)
test state, send one part through, measure -- is summarized by a set of
process effects on two copies of the system.  Their pairing with a
channel's Choi operator gives the outcome probabilities, and they sum to
rho^T (x) I instead of the identity.
"""

import numpy as np

from ppovm import (
    build_ppovm,
    choi_of_channel,
    depolarizing_channel,
    hs_inner,
    merge_couples,
    outcome_probabilities,
    process_effect,
)
from ppovm.channels import apply_second
from ppovm.rand import random_channel, random_density, random_effect
from ppovm.schemes import pauli_probe_couple, six_state_couples

np.set_printoptions(precision=4, suppress=True)

# -- the entangled-probe experiment -----------------------------------------
couple = pauli_probe_couple()
pp = build_ppovm([couple], 2)
print("entangled-probe scheme:", len(pp), "effects")
print("each effect is half the measured POVM element:",
      max(np.abs(m - f / 2).max() for m, f in zip(pp.matrices, couple.povm.effects)))
print("effect sum (should be I/2 (x) I):")
print(sum(pp.matrices).real)

# -- probabilities come from the Choi pairing --------------------------------
ch = depolarizing_channel(0.5, 2)
probs = outcome_probabilities(pp, ch)
print("\ndepolarizing(0.5) outcome probabilities: sum =", probs.sum())
print("first six:", probs[:6])

# -- the pairing reproduces the raw Born rule --------------------------------
rng = np.random.default_rng(1)
state = random_density(4, rng)          # test state on ancilla (x) qubit
effect = random_effect(4, rng)          # one POVM element on the output
ch = random_channel(2, rng)
born = hs_inner(effect, apply_second(ch, state, 2)).real
m = process_effect(state, effect, 2, 2)
paired = hs_inner(m, choi_of_channel(ch)).real
print("\nBorn rule vs effect pairing:", born, "vs", paired)

# -- six prepare-and-measure probes, merged to one test state ----------------
couples = six_state_couples()
pp_six = build_ppovm(couples, 2)
merged = merge_couples(couples)
pp_merged = build_ppovm([merged], 2)
print("\nsix-state scheme merged into a single flagged test state:")
print("ancilla dimension:", merged.anc_dim)
print("max effect difference:",
      max(np.abs(a - b).max() for a, b in zip(pp_six.matrices, pp_merged.matrices)))
print("normalization state (I/2):")
print(pp_six.norm_state.real)
