"""
Geometric phase of an uncoupled condensate
==========================================

With the Rabi coupling switched off the polar angle r stays fixed and only
the azimuth precesses at the trap detuning. On the equator the geometric
phase sits on plateaus and gains pi each time the overlap with the initial
state passes through zero, so |phi_G| = n pi after the n-th jump.
"""

import math

import numpy as np

from twomode import HarmonicSchedule, Regime, ScheduleSet, run_trajectory

###########################################################################
# Traps at omega_a = 62.5 pi rad/s and omega_b = omega_a / 2, no coupling.

wa = 62.5 * math.pi
ss = ScheduleSet(HarmonicSchedule(wa), HarmonicSchedule(wa / 2), HarmonicSchedule(0.0),
                 Regime.constant_r())
res = run_trajectory(math.pi / 2, 0.0, ss, 0.0, 8 * math.pi / wa, 801, tau_scale=wa)
tau = wa * res.trajectory.t
rec = res.phases

###########################################################################
# The phase is undefined on the two samples where the overlap vanishes;
# elsewhere it is a plateau at a multiple of pi.

for lo, hi in [(0, 2), (2, 6), (6, 8)]:
    win = (tau > lo * math.pi + 1e-3) & (tau < hi * math.pi - 1e-3) & rec.defined
    print(f"tau in ({lo} pi, {hi} pi): |phi_G| = {np.abs(rec.phi_G[win]).mean():.6f}")
print("undefined samples at tau / pi =", np.round(tau[~rec.defined] / math.pi, 3))
print("winding at the end:", int(rec.winding[-1]))
