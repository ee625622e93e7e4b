"""Fermion Bell states under growing acceleration.

Prints the negativity of Phi_FF and Psi_FF on both evaluation paths, the
four-sector breakdown of Phi_FF, and the infinite-acceleration constants.

    python demos/fermion_states.py
"""

import math

import numpy as np

from unruh_bell import analytic
from unruh_bell.entanglement import family_correlations, family_negativity

print("r_f      N_Phi(analytic)  N_Phi(numeric)  N_Psi(analytic)  N_Psi(numeric)  MI_Psi(bits)")
for r in np.linspace(0.0, math.pi / 4, 6):
    phi_n = family_negativity("Phi_FF", (r, r)).total
    psi_n = family_negativity("Psi_FF", (r, r)).total
    mi = family_correlations("Psi_FF", (r, r)).mutual_information_bits
    print(f"{r:.4f}   {analytic.neg_ff_r('Phi', r, r):.12f}   {phi_n:.12f}  "
          f"{analytic.neg_ff_r('Psi', r, r):.12f}   {psi_n:.12f}  {mi:.6f}")

print("\nPhi_FF sectors at r_f = pi/6 (ratios 1 : tan^2 : tan^2 : tan^4)")
rep = family_negativity("Phi_FF", (math.pi / 6, math.pi / 6))
for label, v in rep.sectors:
    print(f"  {label:<22} {v:.10f}")
print(f"  total                  {rep.total:.10f}")

print("\nInfinite-acceleration constants")
for k, v in analytic.asymptotic_limits().items():
    print(f"  {k:<9} {v:.10f}")
