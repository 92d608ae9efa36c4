"""Squeezed Fock and squeezed cat bosonic qubit codes under loss and dephasing.

Truncated Fock-space states, Kraus channels, Knill-Laflamme costs, Petz
recovery and SDP-optimal recovery, all on dense numpy arrays.
"""

__version__ = "0.1.0"

from . import channels, hilbert, kl, optimal, petz, states  # noqa: E402
from .channels import KrausSet, first_order_set, full_kraus_set  # noqa: E402
from .kl import kl_cost_elementary, kl_cost_kraus  # noqa: E402
from .optimal import optimal_recovery  # noqa: E402
from .petz import petz_fidelity  # noqa: E402
from .states import CodePair, benchmark_codes, sf_code, ssc_code  # noqa: E402

__all__ = [
    "__version__",
    "channels",
    "hilbert",
    "kl",
    "optimal",
    "petz",
    "states",
    "KrausSet",
    "first_order_set",
    "full_kraus_set",
    "kl_cost_elementary",
    "kl_cost_kraus",
    "optimal_recovery",
    "petz_fidelity",
    "CodePair",
    "benchmark_codes",
    "sf_code",
    "ssc_code",
]
