# # Phase speed and periodic wave trains
#
# The model carries the exact finite-depth phase speed c(k) as a Fourier
# multiplier.  Here we look at c and its jets, then build a small periodic
# wave train from the amplitude expansion and polish it with Newton.

import numpy as np

from fdsw.dispersion import group_velocity_jet, phase_speed, speed_jet
from fdsw.stokes import build_wave, refine_wave

k = np.array([0.1, 0.5, 1.0, 2.0, 5.0])
print("kappa   c(kappa)   (kappa c)'")
for kk, c, g in zip(k, phase_speed(k), group_velocity_jet(k)[0]):
    print(f"{kk:5.2f}  {c:9.6f}  {g:9.6f}")

# With surface tension the speed has a minimum; T = 0.1 shows it.
j = speed_jet(np.linspace(0.5, 20, 5), 0.1)
print("\nc with T=0.1:", np.round(j.c, 4))

# # A wave train
#
# The expansion is accurate to second order in the amplitude; refinement
# drives the residual of the traveling-wave equations to round-off.

w0 = build_wave(1.0, 0.05)
w = refine_wave(w0)
print(f"\nexpansion speed {w0.c:.10f}, refined speed {w.c:.10f}")
print(f"refined residual {w.residual:.1e}, harmonics kept {len(w.eta_cos)}")
print("first eta coefficients:", np.round(w.eta_cos[:4], 8))

# The wave is even and 2 pi periodic in z = kappa x.
z = np.linspace(0, 2 * np.pi, 9)
print("eta(z):", np.round(w.eta(z), 5))
