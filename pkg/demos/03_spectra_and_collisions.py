# # Spectra of the linearized problem
#
# The Hill truncation gives the whole spectrum at a Floquet exponent xi.
# Near the origin a 4 x 4 pencil predicts the four small eigenvalues; away
# from it, eigenvalues of the flat state collide and the Krein signature
# decides whether a collision can destabilize.

import numpy as np

from fdsw import collisions as co
from fdsw import hill
from fdsw import spectrum_origin as so
from fdsw.stokes import build_wave, refine_wave

k, a, xi = 2.0, 0.01, 0.003
w = refine_wave(build_wave(k, a))
v = hill.spectrum(hill.assemble(w, xi, 64))
near = v[np.argsort(np.abs(v))[:4]]
print("Hill, four smallest:", np.round(np.sort_complex(near), 9))
r = so.near_origin_eigenvalues(xi, a, k)
print("pencil roots:       ", np.round(np.sort_complex(r), 9))

q = so.quartic_coefficients(so.assemble_pencil(xi, a, k))
print("root class:", q.root_class)

# Instability sits in a thin band of small xi.
rate, best = hill.max_growth(k, a, 0.0, np.linspace(0.0005, 0.02, 40))
print(f"max growth {rate:.3e} at xi={best:.4f}")

# # Collisions at kappa = 1

print("\n n1  n2      xi       omega0  signatures")
for rec in co.find_collisions(1.0, 0.0, 40):
    print(f"{rec.n1:3d} {rec.n2:3d}  {rec.xi:.5f}  {rec.omega0:9.5f}   {rec.sig1:+d} {rec.sig2:+d}")

# The leading pair (2, 0) stays on the imaginary axis to second order.
rec = next(r for r in co.find_collisions(1.0, 0.0, 16) if (r.n1, r.n2) == (2, 0))
lam = co.away_origin_pencil(rec, 0.0, 0.01, "Second").eigenvalues
print("\nsecond-order pencil at a=0.01:", lam)
