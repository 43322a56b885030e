"""
Resonant Rabi coupling: closed form against the integrator
===========================================================

On resonance the projection P = sin r cos chi is conserved. The closed-form
solution and the numerical integrator are run side by side, and the phase
decomposition phi_T = phi_G + phi_D is checked along the way.
"""

import math

import numpy as np

from twomode import HarmonicSchedule, Regime, ScheduleSet, compute_phases, solve

###########################################################################
# A Rabi frequency g0 = 625 pi rad/s, modulated by 30 percent.

g0 = 625 * math.pi
ss = ScheduleSet(HarmonicSchedule(g0 / 10), HarmonicSchedule(g0 / 20),
                 HarmonicSchedule(g0, 0.3 * g0, 2 * g0), Regime.on_resonant())
args = (math.pi / 3, 0.4, ss, 0.0, 6 * math.pi / g0, 601)
closed = solve(*args)
numeric = solve(*args, method="numeric")

print("max |cos r gap|     :", np.abs(np.cos(closed.r) - np.cos(numeric.r)).max())
print("max Bloch vector gap:", np.abs(closed.bloch_vector - numeric.bloch_vector).max())
print("drift of P (numeric):", numeric.constant_drift().max())

###########################################################################
# Phases for N = 10 atoms.

rec = compute_phases(closed, 10)
ok = rec.defined
gap = np.angle(np.exp(1j * (rec.phi_T[ok] - rec.phi_G[ok] - rec.phi_D[ok])))
print("max |phi_T - phi_G - phi_D| (mod 2 pi):", np.abs(gap).max())
print("phi_G at the end:", rec.phi_G[-1])
