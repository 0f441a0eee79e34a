"""
Waiting times of a photon cascade
=================================

A photon leaves the emitter only after the pump and every cascade step have
fired.  The waiting time between photons is a sum of exponentials, which
narrows as stages are added.
"""

import numpy as np

from photonliquid import StageRates, laplace, mean_rate, pdf, sample_intervals

# Erlang densities for one, three and twenty-five equal stages, with the
# total mean interval held at N / gamma.
tau = np.linspace(0, 40, 9)
for n in (1, 3, 25):
    rates = StageRates.erlang(n, 1.0)
    print(f"N={n:2d}  mean interval {rates.mean_interval:5.1f}  pdf:", np.round(pdf(rates, tau), 4))

# Unequal rates give a hypoexponential density; the Laplace transform is
# the product of the stage transforms and equals 1 at s = 0.
rates = [1.0, 2.0, 3.0]
print("\nrates", rates, "-> emission rate", round(mean_rate(rates), 6), "(6/11)")
print("laplace at s=0:", laplace(rates, 0.0), " at s=1:", laplace(rates, 1.0))

# Samples drawn stage by stage reproduce the mean and the variance sum(1/rate**2).
x = sample_intervals(rates, 200_000, seed=1)
print(f"sample mean {x.mean():.4f} (exact {sum(1 / r for r in rates):.4f})")
print(f"sample var  {x.var():.4f} (exact {sum(1 / r**2 for r in rates):.4f})")
