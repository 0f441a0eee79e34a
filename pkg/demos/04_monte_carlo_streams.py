"""
Counting coincidences in simulated streams
==========================================

Simulate a million photons from a three-stage cascade, build the
coincidence histogram and compare it with the closed form.  Independent
shards merge into one estimate without loss.
"""

import numpy as np

from photonliquid import estimate_g2, g2_erlang_cascade, merge_histograms, simulate_stream

stream = simulate_stream([1.0, 1.0, 1.0], 3e6, seed=2)
print(f"{len(stream)} photons, measured rate {stream.rate:.5f} (expected 1/3)")

curve = estimate_g2(stream, bin_width=0.02, tau_max=10.0)
exact = g2_erlang_cascade(3, 1.0, curve.tau)
for k in (0, 10, 50, 100, 180, 300, 499):
    print(f"  tau={curve.tau[k]:6.2f}  estimate {curve.values[k]:.4f} +- {curve.errors[k]:.4f}   exact {exact[k]:.4f}")

# Eight short shards pooled together behave like one long run.
shards = [estimate_g2(simulate_stream([1.0] * 3, 3e5, seed=100 + k), 0.05, 6.0) for k in range(8)]
pooled = merge_histograms(shards)
print(f"\npooled {pooled.meta['n_events']} events from {pooled.meta['n_streams']} shards")
print("  first bins:", np.round(pooled.values[:6], 4))
print("  exact     :", np.round(g2_erlang_cascade(3, 1.0, pooled.tau[:6]), 4))

# A 25-stage cascade is a temporal liquid: a flat hole, then a peak near
# the mean spacing of 25 / gamma.
liquid = estimate_g2(simulate_stream([1.0] * 25, 2.5e7, seed=25), 0.25, 60.0)
k = np.argmax(liquid.values)
print(f"\nN=25 peak near tau={liquid.tau[k]:.2f} with g2={liquid.values[k]:.3f}")
