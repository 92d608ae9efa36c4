"""
Petz recovery
=============

Channel fidelity of the Petz (transpose) map for each code, and the interval
it implies for the best achievable recovery.
"""

import numpy as np

from sfqec import petz, states, sweep

codes = states.benchmark_codes()
for family, g in (("loss", 1e-3), ("dephasing", 1e-4)):
    print(f"{family}, gamma = {g:g}")
    for label, code in codes.items():
        res = petz.petz_fidelity(code, sweep.kraus_set(family, g, code.dim))
        lo, hi = res.bounds
        print(f"  {label:<15} 1 - F = {res.infidelity:9.2e}   F_opt in [{lo:.9f}, {hi:.9f}]")

# slopes of the infidelity in the loss window
grid = np.logspace(-7, -2, 11)
for label in ("alpha_perp_0.5", "alpha_par_0.5"):
    code = codes[label]
    inf = [petz.petz_fidelity(code, sweep.kraus_set("loss", g, code.dim)).infidelity for g in grid]
    print(label, "log-log slope:", round(np.polyfit(np.log10(grid), np.log10(inf), 1)[0], 3))
