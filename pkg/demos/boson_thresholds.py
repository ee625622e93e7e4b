"""Sudden death of the Phi-type states and survival of the Psi-type states.

Phi_BB vanishes in the closed form once both modes reach n_B = 1, i.e.
a = 2 pi omega / ln 2; Phi_BF vanishes at n_B n_F = 1.  The brute-force
numeric negativity of Phi_BB does not vanish there: with both observers
accelerated the partial transpose couples occupation sectors into longer
chains that the 2x2 closed form leaves out.  This script prints both.

    python demos/boson_thresholds.py
"""

import math

from unruh_bell import analytic
from unruh_bell.entanglement import family_negativity
from unruh_bell.thermo import Statistics, accel_param

B, F = Statistics.BOSON, Statistics.FERMION
A_BB = 2 * math.pi / math.log(2)
A_BF = 4 * math.pi / math.log(2)


def rows(kind, stats, a_star):
    print(f"\n{kind}: closed-form threshold a* = {a_star:.4f}")
    print("  a/a*   analytic         numeric")
    for f in (0.5, 0.9, 1.0, 1.5, 3.0):
        a = f * a_star
        r = (accel_param(stats[0], 1.0, a), accel_param(stats[1], 1.0, a))
        ana = analytic.family_negativity_r(kind, *r).total
        num = family_negativity(kind, r).total
        print(f"  {f:4.1f}   {ana:.10f}   {num:.10f}")


rows("Phi_BB", (B, B), A_BB)
rows("Phi_BF", (B, F), A_BF)

print("\nPsi-type states at a = 50 (numeric)")
for kind, stats in [("Psi_BB", (B, B)), ("Psi_BF", (B, F)), ("X1", (B, F)), ("X2", (B, F))]:
    r = (accel_param(stats[0], 1.0, 50.0), accel_param(stats[1], 1.0, 50.0))
    print(f"  {kind:<7} {family_negativity(kind, r).total:.6e}")
