"""Variational lower bounds on the minimal gap along the transfer path.

A two-component trial state (the |m_y = 0> target and the polarized product
state) gives variational energies for N, N-2 and N-4 spins.  Temple's
inequality and the particle-number interlacing E1(N) >= E0(N-2) then bound
the gap from below without ever diagonalizing the large system, and the
iterated form bounds the ratio gap / (<H>_{N-2} - <H>_N) by
(1 + sqrt(1 - 4A))/2 whenever the variance ratio A satisfies 4A < 1.
"""

import numpy as np

from lmg.gapbounds import beta_estimate, interlacing_check, iterated_gap_bound
from lmg.model import LMGParams

print("Iterated gap bound (xi = 1, lam = 5, chi1/chi2 = 0.75):")
print("  N    A        bound    exact ratio   valid")
for n in (6, 8, 10, 12, 16, 20):
    p = LMGParams(1.0, 5.0, 0.0, 0.75, 1.0, n / 2.0)
    res = iterated_gap_bound(p)
    print(f"{n:4d}  {res.A:7.4f}  {res.iterated_bound:7.4f}  {res.exact_ratio:10.4f}"
          f"     {res.valid}")

print("\nInterlacing margin E1(N) - E0(N-2):")
for n in (6, 10, 14, 20):
    p = LMGParams(1.0, 5.0, 0.0, 0.75, 1.0, n / 2.0)
    holds, margin = interlacing_check(p)
    print(f"  N={n:3d}: holds={holds}, margin={margin:.4f}")

print("\nScaled minimal path gap beta(N) = min-gap / (lam xi chi2^2):")
rows = beta_estimate(1.0, 1.0, 1.0, [4, 8, 16, 32], grid=101)
for r in rows:
    print(f"  N={r['N']:3d}: beta = {r['beta']:.6f}  (min at chi1/chi2 = {r['argmin_ratio']:.3f})")
print("\nbeta stays of order unity and nearly independent of N: the")
print("adiabatic time scale does not blow up with the system size.")
