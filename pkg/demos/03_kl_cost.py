"""
Knill-Laflamme cost across the rate window
==========================================

Smaller cost means the code is closer to satisfying the error-correction
conditions for the given noise.
"""

import numpy as np

from sfqec import kl, states, sweep

codes = states.benchmark_codes()

# a code that corrects single loss exactly
binomial = states.custom_code(states.fock(0, 12) + states.fock(4, 12), states.fock(2, 12), "binomial")
print("binomial code, {I, a}:", kl.kl_cost_elementary(binomial, kl.elementary_error_set(1, 0, 12)))

for family, hi in (("loss", 1e-2), ("dephasing", 1e-3)):
    grid = np.logspace(-7, np.log10(hi), 6)
    print(f"\n{family}: gamma = " + " ".join(f"{g:8.1e}" for g in grid))
    for label, code in codes.items():
        cost = [kl.kl_cost_kraus(code, sweep.kraus_set(family, g, code.dim)) for g in grid]
        print(f"{label:>15}   " + " ".join(f"{c:8.1e}" for c in cost))
