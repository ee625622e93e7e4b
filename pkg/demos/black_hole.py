"""Bell-state entanglement of two observers hovering above a black hole.

Distances are in units of the Schwarzschild radius.  The fermion state
keeps its infinite-acceleration negativity at the horizon while the
Phi-type boson state dies at a finite distance d*.

    python demos/black_hole.py
"""

import math

import numpy as np

from unruh_bell.blackhole import (
    frequency_for_vanishing_distance,
    negativity_vs_distance,
    vanishing_distance,
)

omega_g = 4 * math.pi  # R_S = 1, omega = 1
d = np.geomspace(1e-5, 10.0, 13)
scans = {k: negativity_vs_distance(k, d, omega_g) for k in ("Phi_BB", "Phi_BF", "Psi_BF", "Psi_FF")}

print("d/R_S       a R_S        " + "  ".join(f"{k:<10}" for k in scans))
for i, x in enumerate(d):
    a = scans["Psi_FF"].rows[i].a_times_rs
    print(f"{x:.3e}   {a:.3e}   " + "  ".join(f"{s.rows[i].negativity:.4e}" for s in scans.values()))

print(f"\nd*/R_S at omega_g = 4 pi: Phi_BB {vanishing_distance('Phi_BB', omega_g):.4e}, "
      f"Phi_BF {vanishing_distance('Phi_BF', omega_g):.4e}")
wg = frequency_for_vanishing_distance("Phi_BB", 0.01)
print(f"omega_g = {wg:.4f} puts the Phi_BB vanishing distance at 0.01 R_S")
