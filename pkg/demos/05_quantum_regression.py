"""
The same curves from a master equation
======================================

A ladder of levels with incoherent pumping and cascaded decay, solved as a
Lindblad master equation.  The quantum regression theorem gives g2 of the
lowest transition, which coincides with the classical renewal result.
"""

import numpy as np

from photonliquid import CascadeModel, g2_erlang_cascade, g2_from_renewal, g2_qrt, steady_state

model = CascadeModel.from_rates([1.0, 2.0, 3.0])
print("steady state populations:", np.round(np.diag(steady_state(model)).real * 11, 12), "/ 11")

tau = np.linspace(0, 10, 201)
for n in (2, 3, 4, 5):
    q = g2_qrt(CascadeModel.from_rates([1.0] * n), tau).values
    print(f"N={n}: max |quantum - classical| = {np.max(np.abs(q - g2_erlang_cascade(n, 1.0, tau))):.2e}")

# Level energies only add phases to coherences, which never get populated.
rates = [0.7, 2.0, 1.1, 3.5]
plain = g2_qrt(CascadeModel.from_rates(rates), tau).values
shifted = g2_qrt(CascadeModel.from_rates(rates, energies=[0, 13, 29, 41]), tau).values
print(f"\nenergy dependence: {np.max(np.abs(plain - shifted)):.1e}")
print(f"unequal rates vs renewal poles: {np.max(np.abs(plain - g2_from_renewal(rates, tau).values)):.1e}")
