"""
Loss and dephasing in Kraus form
================================

The full Kraus series of each channel, its first-order truncation, and the
fact that the two channels commute.
"""

import numpy as np

from sfqec import channels, hilbert, states

dim = 40
alpha, g = 1.2, 0.3

# loss sends a coherent state to a weaker coherent state
coh = states.squeezed_coherent(alpha, 0.0, dim)
out = channels.apply_channel(channels.full_kraus_set("loss", g, 30, dim), np.outer(coh, coh.conj()))
target = states.squeezed_coherent(alpha * np.sqrt(1 - g), 0.0, dim)
print("loss output vs |alpha sqrt(1-g)>:", np.abs(out - np.outer(target, target.conj())).max())

# the two-operator sets miss trace preservation at second order
sf = states.sf_code(dim=120)
for family in ("loss", "dephasing"):
    res = [channels.tp_residual(channels.first_order_set(family, x, 120), sf.zero) for x in (1e-6, 1e-5, 1e-4)]
    print(family, "TP residual on |0_L>:", ", ".join(f"{v:.2e}" for v in res))

rho = hilbert.random_density_matrix(dim, np.random.default_rng(0))
print("loss/dephasing commutator:", channels.commutation_distance(1e-3, 1e-3, rho, J=20))
