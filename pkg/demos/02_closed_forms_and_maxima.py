"""
Antibunching, bunching and the Mollow ceiling
=============================================

Closed-form g2 curves for two-level emitters and equal-rate cascades,
together with their first maxima.
"""

import numpy as np

from photonliquid import MollowParams, find_first_max, g2_erlang_cascade, g2_heitler, g2_mollow
from photonliquid.analytic import g2_short_time, mollow_first_max

np.set_printoptions(precision=6, suppress=True)

# Every cascade starts at exactly zero and ends at one.
tau = np.array([0.0, 0.5, 1.0, 2.0, 5.0, 10.0])
for n in (2, 3, 6):
    print(f"N={n}:", np.round(g2_erlang_cascade(n, 1.0, tau), 6))
print("Heitler:", np.round(g2_heitler(1.0, tau), 6))

# The N = 3 cascade overshoots by a tiny amount at tau = 2 pi / sqrt(3).
peak = find_first_max(lambda t: g2_erlang_cascade(3, 1.0, t), (0.1, 10.0))
print(f"\nN=3 first maximum at tau={peak.tau:.6f}, g2={peak.value:.9f}")
print(f"expected                 {2 * np.pi / np.sqrt(3):.6f}      {1 + np.exp(-np.sqrt(3) * np.pi):.9f}")

# Near zero delay the curve hugs (N**2/N!) (gamma tau)**(N-1): one power per
# cascade step, so a long cascade stays flat for a long time.
small = 1e-3
for n in (2, 3, 4, 6):
    ratio = g2_erlang_cascade(n, 1.0, small) / g2_short_time(n, 1.0, small)
    print(f"N={n}: g2 / short-time law at tau=1e-3 -> {ratio:.5f}")

# A strongly driven two-level atom oscillates; the first maximum
# 1 + exp(-3 pi gamma / Omega_M) creeps towards 2 but never reaches it.
print()
for omega in (1, 2, 10, 100, 1000):
    p = MollowParams(1.0, omega)
    tau_m, g_m = mollow_first_max(p)
    numeric = find_first_max(lambda t: g2_mollow(p, t), (1e-3 / omega, 10 / omega), n_scan=20001)
    print(f"Omega={omega:5d}: tau_M={tau_m:.6f}  g_M={g_m:.9f}  (numerical {numeric.value:.9f})")
