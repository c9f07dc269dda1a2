# # The modulational instability index
#
# Small waves are modulationally unstable where the index delta is
# negative.  Pure gravity waves cross over at a single wave number; surface
# tension adds three more resonance curves in the (kappa, kappa sqrt(T))
# plane.

import os

import numpy as np

from fdsw import modindex as mi

for k in (0.5, 1.0, 1.5, 2.0, 3.0):
    b = mi.indices(k)
    print(f"kappa={k:3.1f}  i1={b.i1:+.4f} i2={b.i2:+.4f} i3={b.i3:+.4f} "
          f"i4={b.i4:+.4e} delta={b.delta:+.4e}")

print(f"\ncritical wave number without tension: {mi.critical_wavenumber(0.0):.6f}")

# For strong tension the crossover moves like 1/sqrt(T).
for T in (1e2, 1e4):
    print(f"T={T:g}: sqrt(T) kappa_c = {np.sqrt(T) * mi.critical_wavenumber(T):.5f}")

# Weak tension (T < 1/3) brings all four index zeros in.
print("\nroots at T=0.2:", [(n, round(k, 4)) for n, k in mi.critical_wavenumber(0.2)])

# # Stability diagram
#
# 64 x 64 cells take a few seconds.  Cells near the second-harmonic
# resonance are left Indeterminate.

os.makedirs("demo_output", exist_ok=True)
d = mi.stability_diagram((0.05, 4.0), (0.0, 2.0), 64)
with open("demo_output/diagram.csv", "w") as f:
    f.write(mi.diagram_csv(d))
with open("demo_output/diagram.svg", "w") as f:
    f.write(mi.diagram_svg(d))
counts = {c: sum(cell.classification == c for cell in d.cells) for c in mi.CLASSES}
print("\ncell classes:", counts)
