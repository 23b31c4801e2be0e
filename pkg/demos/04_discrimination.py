#!/usr/bin/env python3
"""Telling two channels apart in a single run, with zero error.

Orthogonal supports of the Choi operators are sufficient but not
necessary: completing the effects with the inconclusive outcome
(I - rho^T) (x) I turns the task into unambiguous state discrimination.
For unitary pairs the feasibility test is geometric -- zero in the convex
hull of the relative eigenphases -- and parallel copies add phases until
the hull closes.
"""

import numpy as np

from ppovm import (
    build_plan,
    choi_of_channel,
    contraction_channel,
    extra_effect,
    hs_inner,
    identity_channel,
    ket,
    min_copies,
    overlap,
    support_orthogonal,
    unitary_channel,
    verify_plan,
)
from ppovm.discrimination import NotPerfectlyDiscriminableError
from ppovm.rand import random_channel, random_unitary
from ppovm.schemes import identity_vs_contraction_ppovm

np.set_printoptions(precision=4, suppress=True)

# -- identity vs contraction: non-orthogonal supports, still perfect ----------
omega_id = choi_of_channel(identity_channel(2))
omega_contr = choi_of_channel(contraction_channel(ket(0, 2)))
print("supports orthogonal?", support_orthogonal(omega_id, omega_contr))
pp = identity_vs_contraction_ppovm()
print("identification rates:",
      hs_inner(pp.matrices[0], omega_id).real,
      hs_inner(pp.matrices[1], omega_contr).real)
print("misidentification rates:",
      hs_inner(pp.matrices[1], omega_id).real,
      hs_inner(pp.matrices[0], omega_contr).real)

# the inconclusive completion fires at rate d-1 on every channel
rng = np.random.default_rng(3)
rates = [hs_inner(extra_effect(pp), choi_of_channel(random_channel(2, rng))).real
         for _ in range(5)]
print("inconclusive rate on random channels (d-1 = 1):", np.round(rates, 12))

# -- unitary pairs -----------------------------------------------------------
z = np.diag([1.0, -1.0])
plan = build_plan(np.eye(2), z)
print("\nidentity vs sigma_z: overlap =", overlap(np.eye(2), z))
print("probe:", plan.probe)
print("error rates:", verify_plan(identity_channel(2), unitary_channel(z), plan))

almost = np.diag([1.0, np.exp(1j * 0.1)])
try:
    build_plan(np.eye(2), almost)
except NotPerfectlyDiscriminableError as exc:
    print("identity vs small phase:", exc)

# a qutrit pair with trine relative phases is feasible despite overlap 0 < |Tr| <= d-1
w = np.diag(np.exp(1j * np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])))
u = random_unitary(3, rng)
plan3 = build_plan(u, u @ w)
print("\nqutrit trine phases: error rates =", plan3.error_rates)

# -- parallel copies close the hull -------------------------------------------
print("\nphase gap -> copies needed:")
for k in (2, 3, 5, 7):
    gap = np.pi / k
    v = np.diag([1.0, np.exp(1j * gap)])
    print(f"  pi/{k}: {min_copies(np.eye(2), v, 20)} (expect {int(np.ceil((np.pi - 1e-9) / gap))})")
