"""Petz recovery map and its channel fidelity.

Composite indices ``[mu, l]`` (codeword ``mu``, Kraus operator ``l``) are laid
out with ``mu`` outer: flat index ``mu * r + l``.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import hilbert
from .channels import KrausSet
from .errors import DimensionMismatchError, IllConditionedCodeError
from .states import CodePair


@dataclasses.dataclass(frozen=True)
class PetzResult:
    """Petz fidelity of a code under a channel.

    ``raw_fidelity`` is the closed-form value for the Kraus set exactly as
    given. ``fidelity`` divides it by ``trace_factor``, the mean output trace
    ``(1/2) sum_mu <mu| sum_j K_j^dagger K_j |mu>``, which is 1 for a
    trace-preserving channel and ``1 + O(gamma^2)`` for the first-order sets.
    The divided value never exceeds 1, so infidelities stay meaningful when
    the Kraus set slightly overshoots trace preservation.
    """

    fidelity: float
    raw_fidelity: float
    trace_factor: float
    m_matrix: np.ndarray
    M: np.ndarray
    asymmetry: float
    kraus: tuple[np.ndarray, ...] | None = None

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity

    @property
    def bounds(self) -> tuple[float, float]:
        """Interval that contains the optimal recovery fidelity."""
        return self.fidelity, 0.5 * (1.0 + self.fidelity)


def _check(code: CodePair, K: KrausSet) -> None:
    if K.dim != code.dim:
        raise DimensionMismatchError(f"channel dim {K.dim} != code dim {code.dim}")


def petz_m_matrix(code: CodePair, K: KrausSet) -> np.ndarray:
    """``M[[mu, l], [nu, n]] = <mu_L| K_l^dagger K_n |nu_L>``, shape (2r, 2r)."""
    _check(code, K)
    cols = _images(code, K)
    return cols.conj().T @ cols


def _images(code: CodePair, K: KrausSet) -> np.ndarray:
    """Columns ``K_l |mu_L>`` ordered mu-outer, l-inner."""
    v = code.encoder
    return np.column_stack([k @ v[:, mu] for mu in range(2) for k in K.ops])


def _sqrt_terms(code: CodePair, K: KrausSet):
    """Square root of ``A = (m^-1 x I_r) M`` and related pieces.

    With ``S = m^(-1/2) x I_r`` and images ``G`` (so ``M = G^dagger G``),
    ``A = S (S M S) S^-1``. The root of ``S M S = (G S)^dagger (G S)`` is taken
    from the singular values of ``G S``, which avoids square roots of
    round-off sized eigenvalues when the images are linearly dependent.
    """
    m = code.gram()
    if abs(np.linalg.det(m)) < 1e-12:
        raise IllConditionedCodeError("codeword Gram matrix is singular")
    r = len(K)
    g = _images(code, K)
    big_m = g.conj().T @ g
    a = np.kron(np.linalg.inv(m), np.eye(r)) @ big_m
    asym = float(np.linalg.norm(a - a.conj().T))
    m_isqrt = hilbert.hermitian_pinv_sqrt(m)
    s = np.kron(m_isqrt, np.eye(r))
    s_inv = np.kron(hilbert.hermitian_sqrt(m), np.eye(r))
    _, sv, vh = np.linalg.svd(g @ s, full_matrices=False)
    root_b = (vh.conj().T * sv) @ vh
    root_a = s @ root_b @ s_inv
    tau = 0.5 * float(np.sum(sv**2))
    return m, big_m, root_a, tau, asym


def petz_fidelity(code: CodePair, K: KrausSet, with_kraus: bool = False) -> PetzResult:
    """Petz-map channel fidelity ``(1/4) || Tr_L sqrt((m^-1 x I_r) M) ||_F^2``."""
    _check(code, K)
    m, big_m, root_a, tau, asym = _sqrt_terms(code, K)
    reduced = hilbert.partial_trace_outer(root_a, 2)
    raw = 0.25 * float(np.linalg.norm(reduced) ** 2)
    fid = raw / tau if tau > 0 else 0.0
    fid = min(max(fid, 0.0), 1.0 + 1e-9)
    return PetzResult(
        fidelity=fid,
        raw_fidelity=raw,
        trace_factor=tau,
        m_matrix=m,
        M=big_m,
        asymmetry=asym,
        kraus=tuple(petz_kraus(code, K)) if with_kraus else None,
    )


def channel_output_of_code(code: CodePair, K: KrausSet) -> np.ndarray:
    """``N(P_L) = sum_{m, mu} K_m |mu_L><mu_L| K_m^dagger``."""
    _check(code, K)
    v = code.encoder
    imgs = np.column_stack([k @ v for k in K.ops])
    return imgs @ imgs.conj().T


def petz_kraus(code: CodePair, K: KrausSet, rel_tol: float = 1e-12) -> list[np.ndarray]:
    """Recovery operators ``P_L K_r^dagger N(P_L)^{-1/2}``, one per noise operator."""
    root = hilbert.hermitian_pinv_sqrt(channel_output_of_code(code, K), rel_tol)
    proj = code.projector
    return [proj @ k.conj().T @ root for k in K.ops]
