"""
Energy-matched codewords
========================

Build the n = 2 squeezed Fock code and the four squeezed cat codes, all at
a mean photon number of 3.83, and look at their photon statistics.
"""

import math

import numpy as np

from sfqec import states

# S(r)|2> and S(-r)|2> are orthogonal at r* = arccosh(5)/4
r_star = states.solve_sf_codeword_r()
print(f"r* = {r_star:.6f}  (arccosh(5)/4 = {math.acosh(5) / 4:.6f})")

codes = states.benchmark_codes()
for label, code in codes.items():
    p = np.abs(code.zero) ** 2
    n = np.arange(code.dim)
    spread = math.sqrt(np.sum(p * n**2) - np.sum(p * n) ** 2)
    print(f"{label:<15} <n> = {states.mean_photon(code.zero):.4f}  sd(n) = {spread:6.3f}  "
          f"|<0_L|1_L>| = {abs(states.overlap(code.zero, code.one)):.1e}")

# the two parallel-branch cats are nearly the same state
a, b = codes["alpha_par_0.5"], codes["alpha_par_1.0"]
print("overlap of the parallel-branch |0_L>:", round(abs(states.overlap(a.zero, b.zero)), 6))
