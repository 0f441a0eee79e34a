"""
g2 from the poles of the renewal transform
==========================================

For any renewal stream the transform of g2 is w(s) / (r (1 - w(s))).  Its
poles are the roots of prod(s + rate) - prod(rate), and the residues give g2
as a finite sum of exponentials.  Equal rates put the poles on a circle.
"""

import numpy as np

from photonliquid import find_poles, g2_erlang_cascade, g2_from_renewal

for n in (3, 6):
    ps = find_poles([1.0] * n)
    order = np.argsort(np.angle(ps.poles + 1))
    print(f"N={n} poles (shifted by +1, i.e. roots of unity):")
    print("   ", np.round(ps.poles[order] + 1, 12))
    print("    residue sum:", np.round(ps.residues.sum(), 14))

# Unequal rates: nothing special happens, the same machinery applies.
rates = [0.5, 1.0, 4.0, 4.0]
ps = find_poles(rates)
print("\nrates", rates)
for p, a in zip(ps.poles, ps.residues):
    print(f"  pole {p:.6f}  residue {a:.6f}")

# The pole expansion agrees with the roots-of-unity sum to rounding error,
# even for a 64-stage cascade.
tau = np.linspace(0, 200, 2001)
diff = np.max(np.abs(g2_from_renewal([1.0] * 64, tau).values - g2_erlang_cascade(64, 1.0, tau)))
print(f"\nN=64 renewal vs roots of unity: max |diff| = {diff:.2e}")
