# # Time evolution and modulational growth
#
# The evolution equations are stepped with RK4 in a frame moving with the
# wave.  A traveling wave should come back to itself after one period, and
# a seeded Floquet perturbation should grow at the rate the spectrum
# predicts.

import numpy as np

from fdsw import evolve as ev
from fdsw import hill
from fdsw.stokes import build_wave, refine_wave

w = refine_wave(build_wave(1.0, 0.05))
s = ev.wave_to_state(w, 1, 256)
period = 2 * np.pi / (w.kappa * w.c)
steps = int(np.ceil(period / ev.cfl_dt(s)))
out = ev.run(s, period / steps, steps)
print(f"shape error after one period: {np.abs(out.eta - s.eta).max():.2e}")
print(f"E_2 before {ev.energy(s, 2).value:.8f}, after {ev.energy(out, 2).value:.8f}")

# # Growth of a sideband
#
# A larger wave widens the unstable band, so a short domain of 16 periods
# (xi = 1/16) is enough for a quick run.

k, a, xi = 2.0, 0.1, 1 / 16
rate, _ = hill.max_growth(k, a, 0.0, [xi])
g = ev.mi_growth_experiment(k, a, xi, P=16, G=256)
print(f"\nHill rate {rate:.4e}, simulated {g.rate_per_kappa:.4e}, R^2 {g.r2:.6f}")

# # The constant state
#
# Small constant states are stable; the alternative second-order model is
# not, once b < 0.

n = np.arange(1, 201)
lp, lm = ev.constant_state_eigs(0.01, -0.02, 1.0, n, 0.1)
print(f"\nmax Re over n <= 200: {max(np.abs(lp.real).max(), np.abs(lm.real).max())}")
_, lm, bad = ev.bw1_constant_eigs(-0.01, 1.0, n, 0.0)
print(f"alternative model unstable: {bad}, first unstable n = {n[np.argmax(lm.real > 0)]}")
