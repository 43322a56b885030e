"""
Detuned coupling and the large-eta limit
========================================

With a constant Rabi frequency g0 and a detuning varpi the conserved
quantity is C = eta P - x with eta = 2 g0 / varpi. As eta grows the motion
approaches the resonant one, but the geometric phase keeps a residual tilt
that shrinks only like 1/eta.
"""

import math

import numpy as np

from twomode import HarmonicSchedule, Regime, ScheduleSet, compute_phases, solve

g0 = 625 * math.pi


def phase_at_end(regime):
    ss = ScheduleSet(HarmonicSchedule(g0 / 10), HarmonicSchedule(g0 / 20),
                     HarmonicSchedule(g0), regime)
    traj = solve(math.pi / 3, 0.0, ss, 0.0, 3 * math.pi / g0, 601)
    return compute_phases(traj, 1).phi_G[-1]


###########################################################################
# Compare against the resonant result for growing eta.

ref = phase_at_end(Regime.on_resonant())
print(f"resonant phi_G at the end: {ref:.6f}")
for eta in (40, 80, 160, 320):
    gap = phase_at_end(Regime.off_resonant(2 * g0 / eta)) - ref
    print(f"eta = {eta:4d}: gap = {gap:+.5f}   eta * gap = {eta * gap:+.4f}")
