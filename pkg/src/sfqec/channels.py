"""Particle-loss and dephasing channels in Kraus form."""

from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Literal, Sequence

import numpy as np

from . import hilbert
from .errors import DimensionMismatchError, ParameterRangeError

Family = Literal["loss", "dephasing", "composite", "custom"]

DEFAULT_J = 30
LOSS_VALIDITY = 1e-2
DEPHASING_VALIDITY = 1e-3


class FirstOrderValidityWarning(UserWarning):
    """Rate outside the window where the two-operator expansion is adequate."""


@dataclasses.dataclass(frozen=True)
class KrausSet:
    ops: tuple[np.ndarray, ...]
    family: Family = "custom"
    gamma: float = 0.0
    order: str = "custom"

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(k.shape != shape for k in ops):
            raise DimensionMismatchError("Kraus operators must be square and share one dimension")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def completeness(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.ops)


def gamma_from_rate(kappa: float, t: float, family: str) -> float:
    """Dimensionless rate for a physical rate ``kappa`` over time ``t``."""
    if kappa < 0 or t < 0:
        raise ParameterRangeError("rate and time must be non-negative")
    if family == "loss":
        return -math.expm1(-kappa * t)
    if family == "dephasing":
        return kappa * t
    raise ParameterRangeError(f"unknown error family {family!r}")


def loss_kraus(gamma1: float, j: int, dim: int) -> np.ndarray:
    """``sqrt(gamma^j / j!) (1 - gamma)^(n/2) a^j``."""
    if not 0 <= gamma1 < 1:
        raise ParameterRangeError(f"loss rate must lie in [0, 1), got {gamma1}")
    if j < 0:
        raise ParameterRangeError("j must be non-negative")
    dim = hilbert._check_dim(dim)
    n = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    if j >= dim:
        return out
    # <m| K_j |m+j> = sqrt(gamma^j/j!) (1-gamma)^(m/2) sqrt((m+j)!/m!)
    m = n[: dim - j]
    log_falling = np.array([math.lgamma(k + j + 1) - math.lgamma(k + 1) for k in m])
    if gamma1 == 0.0:
        if j == 0:
            return np.eye(dim, dtype=complex)
        return out
    log_amp = 0.5 * (j * math.log(gamma1) - math.lgamma(j + 1) + log_falling) + 0.5 * m * math.log1p(-gamma1)
    out[m, m + j] = np.exp(log_amp)
    return out


def dephasing_kraus(gamma2: float, j: int, dim: int) -> np.ndarray:
    """``sqrt(gamma^j / j!) exp(-gamma n^2 / 2) n^j`` (diagonal)."""
    if gamma2 < 0:
        raise ParameterRangeError(f"dephasing rate must be non-negative, got {gamma2}")
    if j < 0:
        raise ParameterRangeError("j must be non-negative")
    dim = hilbert._check_dim(dim)
    n = np.arange(dim, dtype=float)
    pref = math.sqrt(gamma2**j / math.factorial(j))
    return np.diag(pref * np.exp(-0.5 * gamma2 * n**2) * n**j).astype(complex)


def full_kraus_set(family: str, gamma: float, J: int = DEFAULT_J, dim: int = hilbert.DEFAULT_DIM) -> KrausSet:
    """Kraus operators ``K_0 .. K_J`` of the exact channel series."""
    if J < 0:
        raise ParameterRangeError("J must be non-negative")
    if family == "loss":
        ops = [loss_kraus(gamma, j, dim) for j in range(J + 1)]
    elif family == "dephasing":
        ops = [dephasing_kraus(gamma, j, dim) for j in range(J + 1)]
    else:
        raise ParameterRangeError(f"unknown error family {family!r}")
    return KrausSet(tuple(ops), family, gamma, f"full(J={J})")


def first_order_set(family: str, gamma: float, dim: int = hilbert.DEFAULT_DIM) -> KrausSet:
    """Two-operator expansion, trace-preserving up to ``O(gamma^2)``.

    loss: ``{I - (gamma/2) n, sqrt(gamma) a}``;
    dephasing: ``{I - (gamma/2) n^2, sqrt(gamma) n}``.
    """
    if gamma < 0:
        raise ParameterRangeError("rate must be non-negative")
    eye = hilbert.identity(dim)
    n = hilbert.number(dim)
    if family == "loss":
        limit = LOSS_VALIDITY
        ops = (eye - 0.5 * gamma * n, math.sqrt(gamma) * hilbert.annihilation(dim))
    elif family == "dephasing":
        limit = DEPHASING_VALIDITY
        ops = (eye - 0.5 * gamma * (n @ n), math.sqrt(gamma) * n)
    else:
        raise ParameterRangeError(f"unknown error family {family!r}")
    if gamma > limit:
        warnings.warn(
            f"{family} rate {gamma:g} exceeds {limit:g}; the two-operator set is not adequate there",
            FirstOrderValidityWarning,
            stacklevel=2,
        )
    return KrausSet(ops, family, gamma, "first_order")


def compose(outer: KrausSet, inner: KrausSet) -> KrausSet:
    """Kraus set of ``outer o inner``."""
    if outer.dim != inner.dim:
        raise DimensionMismatchError("Kraus sets act on different dimensions")
    ops = tuple(b @ a for b in outer.ops for a in inner.ops)
    return KrausSet(ops, "composite", max(outer.gamma, inner.gamma), f"{outer.order}*{inner.order}")


def apply_channel(K: KrausSet | Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """``sum_j K_j rho K_j^dagger``; no renormalization."""
    ops = K.ops if isinstance(K, KrausSet) else tuple(K)
    if rho.shape != ops[0].shape:
        raise DimensionMismatchError(f"rho has shape {rho.shape}, channel acts on {ops[0].shape}")
    out = sum(k @ rho @ k.conj().T for k in ops)
    return 0.5 * (out + out.conj().T)


def tp_residual(K: KrausSet, s: np.ndarray) -> float:
    """Signed ``<s| sum K^dagger K |s> - 1``."""
    return float(sum(np.vdot(k @ s, k @ s).real for k in K.ops) - 1.0)


def commutation_distance(
    gamma1: float,
    gamma2: float,
    rho: np.ndarray,
    J: int = 20,
) -> float:
    """Frobenius distance between loss-then-dephasing and dephasing-then-loss."""
    dim = rho.shape[0]
    loss = full_kraus_set("loss", gamma1, J, dim)
    deph = full_kraus_set("dephasing", gamma2, J, dim)
    a = apply_channel(loss, apply_channel(deph, rho))
    b = apply_channel(deph, apply_channel(loss, rho))
    return float(np.linalg.norm(a - b))
