"""
Bloch states are minimum-uncertainty states
===========================================

A Bloch state |N; r, phi> saturates the Heisenberg bound for the two
angular-momentum components orthogonal to its mean spin. A balanced Fock
state does not, which makes it a useful negative control.
"""

import math

import numpy as np

from twomode import BlochState, bloch_overlap, uncertainty_product

rng = np.random.default_rng(7)
for _ in range(4):
    s = BlochState(12, rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi))
    lhs, rhs = uncertainty_product(s)
    print(f"r = {s.r:.3f}, phi = {s.phi:+.3f}: product = {lhs:.6f}, bound = {rhs:.6f}")

###########################################################################
# Negative control: the balanced Fock state |6, 6>, read in the r = 0 frame.

fock = np.zeros(13, dtype=complex)
fock[6] = 1.0
lhs, rhs = uncertainty_product(BlochState(12, 0.0, 0.0), fock)
print(f"balanced Fock: product = {lhs:.3f}, bound = {rhs:.3f}")

###########################################################################
# The overlap of two Bloch states is the single-atom overlap to the power N.

a, b = BlochState(12, 1.0, 0.2), BlochState(12, 1.3, -0.4)
one = bloch_overlap(BlochState(1, 1.0, 0.2), BlochState(1, 1.3, -0.4))
print("overlap:", bloch_overlap(a, b), " single^N:", one ** 12)
