"""
Checking the Bloch picture against the exact propagator
=======================================================

The coherent-state ansatz is exact when the collision terms only shift the
energy uniformly, for instance gamma_a = gamma_b with no inelastic part. The
full N-atom Schroedinger equation is solved in the Fock basis and compared
with the state rebuilt from the characteristic solution. Unequal rates break
the ansatz and the fidelity drops.
"""

import math

from twomode import HarmonicSchedule, Regime, ScheduleSet, compare_with_oracle, solve

g0 = 625 * math.pi


def report(label, **rates):
    ss = ScheduleSet(HarmonicSchedule(g0 / 10), HarmonicSchedule(g0 / 20), HarmonicSchedule(g0),
                     Regime.on_resonant(), **rates)
    rep = compare_with_oracle(solve(math.pi / 3, 0.2, ss, 0.0, 2 * math.pi / g0, 41), 8)
    print(f"{label:10s} 1 - fidelity = {1 - rep['min_fidelity']:.2e}   "
          f"global phase gap = {rep['max_global_phase_gap']:.2e}")


report("exact", gamma_a=g0 / 20, gamma_b=g0 / 20, gamma_ab=g0 / 10)
report("not exact", gamma_a=g0 / 5, gamma_b=g0 / 20, gamma_ab=0.0)
