"""Optimal recovery by semidefinite programming.

Recovery operators are expanded as ``R_r = sum_I x_{r,I} B_I`` over a basis
built from the orthonormalized error subspaces. The Choi matrix is
``X[I, J] = sum_r x_{r,I} conj(x_{r,J})``; in that convention

    fidelity   = (1/4) sum_{I,J} X[I, J] W[I, J]
    sum_r R_r^dagger R_r = sum_{I,J} X[I, J] B_J^dagger B_I

with ``W[I, J] = sum_l Tr(B_I K_l) conj(Tr(B_J K_l))``. Trace preservation
is imposed on the span of the error subspaces only; the rest of the
truncated space is never reached by the encoded, noisy state.

Composite index ``I = (j, m)`` is j-major. A full pair ``(psi_j^+, psi_j^-)``
gives four operators following the Pauli pattern ``I, X, Y, Z``; a block
where Gram-Schmidt kept only one vector ``psi`` gives two operators
``|0_L><psi|`` and ``|1_L><psi|``.
"""

from __future__ import annotations

import dataclasses
import logging
import warnings
from typing import Sequence

import cvxpy as cp
import numpy as np

from . import hilbert
from .channels import KrausSet
from .errors import DegenerateChannelError, DimensionMismatchError, InvalidCodeError, SolverFailureError
from .states import CodePair

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ErrorSubspaces:
    """Orthonormalized images ``K_j|0_L>``, ``K_j|1_L>``.

    ``blocks`` holds one ``(j, psi_plus, psi_minus)`` per Kraus operator with
    at least one surviving vector (a dropped vector is ``None``).
    """

    blocks: tuple[tuple[int, np.ndarray | None, np.ndarray | None], ...]
    dropped: tuple[tuple[int, str], ...]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [v for _, p, m in self.blocks for v in (p, m) if v is not None]

    @property
    def span(self) -> np.ndarray:
        """Orthonormal basis of the error space as columns."""
        return np.column_stack(self.vectors)

    def b_labels(self) -> list[tuple[int, int]]:
        labels = []
        for j, p, m in self.blocks:
            count = 4 if (p is not None and m is not None) else 2
            labels.extend((j, k) for k in range(1, count + 1))
        return labels


@dataclasses.dataclass(frozen=True)
class RecoveryChoi:
    X: np.ndarray
    objective: float
    duality_gap: float
    tp_residual: float
    span: np.ndarray
    status: str

    @property
    def fidelity(self) -> float:
        return self.objective


@dataclasses.dataclass(frozen=True)
class OptimalResult:
    """SDP recovery for one (code, channel) pair.

    ``fidelity`` is divided by the same mean output trace used for the Petz
    fidelity, so the two are directly comparable.
    """

    choi: RecoveryChoi
    kraus: tuple[np.ndarray, ...]
    raw_fidelity: float
    trace_factor: float

    @property
    def fidelity(self) -> float:
        return self.raw_fidelity / self.trace_factor

    @property
    def duality_gap(self) -> float:
        return self.choi.duality_gap


def _require_orthonormal(code: CodePair, tol: float = 1e-8) -> None:
    if np.abs(code.gram() - np.eye(2)).max() > tol:
        raise InvalidCodeError("optimal recovery needs orthonormal codewords")


def error_subspaces(code: CodePair, K: KrausSet, drop_tol: float = 1e-10) -> ErrorSubspaces:
    """Gram-Schmidt over ``K_0|0_L>, K_0|1_L>, K_1|0_L>, ...`` in that order."""
    if K.dim != code.dim:
        raise DimensionMismatchError(f"channel dim {K.dim} != code dim {code.dim}")
    _require_orthonormal(code)
    raw = []
    for k in K.ops:
        raw.extend([k @ code.zero, k @ code.one])
    basis, dropped_idx = hilbert.gram_schmidt(raw, drop_tol)
    dropped = set(dropped_idx)
    it = iter(basis)
    blocks = []
    for j in range(len(K)):
        plus = None if 2 * j in dropped else next(it)
        minus = None if 2 * j + 1 in dropped else next(it)
        if plus is not None or minus is not None:
            blocks.append((j, plus, minus))
    if not blocks:
        raise DegenerateChannelError("every noisy codeword image was dropped")
    names = ("+", "-")
    return ErrorSubspaces(tuple(blocks), tuple((i // 2, names[i % 2]) for i in sorted(dropped)))


def b_operators(code: CodePair, subs: ErrorSubspaces) -> list[np.ndarray]:
    """Recovery basis operators, ordered as ``subs.b_labels()``."""
    z, o = code.zero[:, None], code.one[:, None]
    out = []
    for _, p, m in subs.blocks:
        if p is not None and m is not None:
            pp, mm = p.conj()[None, :], m.conj()[None, :]
            out.extend([
                z @ pp + o @ mm,
                z @ mm + o @ pp,
                1j * z @ mm - 1j * o @ pp,
                z @ pp - o @ mm,
            ])
        else:
            v = (p if p is not None else m).conj()[None, :]
            out.extend([z @ v, o @ v])
    return out


def _traces(B: Sequence[np.ndarray], K: KrausSet) -> np.ndarray:
    """``T[I, l] = Tr(B_I K_l)``."""
    return np.array([[np.einsum("ij,ji->", b, k) for k in K.ops] for b in B])


def process_matrix(B: Sequence[np.ndarray], K: KrausSet, code: CodePair | None = None) -> np.ndarray:
    """``W[I, J] = sum_l Tr(B_I K_l) conj(Tr(B_J K_l))``."""
    if code is not None and K.dim != code.dim:
        raise DimensionMismatchError("channel and code dimensions differ")
    t = _traces(B, K)
    return t @ t.conj().T


def _span_from_b(B: Sequence[np.ndarray]) -> np.ndarray:
    s = sum(b.conj().T @ b for b in B)
    w, v = np.linalg.eigh(s)
    return v[:, w > 1e-9 * w.max()]


def _constraint_blocks(B: Sequence[np.ndarray], span: np.ndarray) -> np.ndarray:
    """``C[I, J] = E^dagger B_J^dagger B_I E`` as an array (n, n, s, s)."""
    L = np.stack([b @ span for b in B])  # (n, dim, s)
    return np.einsum("jka,ikb->ijab", L.conj(), L)


def _tp_map(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ijab->ab", X, C)


def solve_recovery_sdp(
    W: np.ndarray,
    B: Sequence[np.ndarray],
    tol: float = 1e-7,
    span: np.ndarray | None = None,
) -> RecoveryChoi:
    """Maximize ``(1/4) sum X*W`` over Choi matrices ``X >= 0`` that are trace preserving on the span.

    The reported duality gap is certified: the solver's dual variable is
    shifted by the smallest multiple of the identity that makes it exactly
    dual feasible before the dual objective is taken.
    """
    n = len(B)
    if W.shape != (n, n):
        raise DimensionMismatchError(f"W has shape {W.shape}, expected ({n}, {n})")
    if span is None:
        span = _span_from_b(B)
    s = span.shape[1]
    C = _constraint_blocks(B, span)
    W = 0.5 * (W + W.conj().T)

    X = cp.Variable((n, n), hermitian=True)
    A = C.reshape(n * n, s * s).T  # column I*n+J holds vec(C[I, J])
    tp = cp.reshape(A @ cp.vec(X, order="C"), (s, s), order="C") == np.eye(s)
    objective = cp.Maximize(cp.real(cp.sum(cp.multiply(X, W))) / 4)
    prob = cp.Problem(objective, [X >> 0, tp])
    try:
        with warnings.catch_warnings():
            # an inaccurate status is judged below by the certified gap instead
            warnings.filterwarnings("ignore", message="Solution may be inaccurate")
            prob.solve(
                solver=cp.CLARABEL,
                tol_gap_abs=1e-11,
                tol_gap_rel=1e-11,
                tol_feas=1e-11,
                max_iter=500,
            )
    except cp.error.SolverError as exc:
        raise SolverFailureError(f"SDP solver failed: {exc}") from exc
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or X.value is None:
        raise SolverFailureError(f"SDP ended with status {prob.status}", {"status": prob.status})

    Xv = 0.5 * (X.value + X.value.conj().T)
    primal = float(np.real(np.sum(Xv * W)) / 4)
    residual = float(np.linalg.norm(_tp_map(Xv, C) - np.eye(s)))

    Y = np.asarray(tp.dual_value, dtype=complex).reshape(s, s)
    Y = 0.5 * (Y + Y.conj().T)
    G = np.einsum("ab,ijba->ij", Y, C)
    slack = 0.5 * ((G - W / 4) + (G - W / 4).conj().T)
    deficit = max(0.0, -float(np.linalg.eigvalsh(slack).min()))
    G_eye = np.einsum("ijaa->ij", C)
    shift = deficit / float(np.linalg.eigvalsh(0.5 * (G_eye + G_eye.conj().T)).min())
    dual = float(np.trace(Y).real) + shift * s
    gap = dual - primal
    if gap > tol or residual > 1e-6:
        raise SolverFailureError(
            f"SDP did not reach tolerance: gap {gap:.2e}, TP residual {residual:.2e}",
            {"duality_gap": gap, "tp_residual": residual, "status": prob.status},
        )
    return RecoveryChoi(Xv, primal, gap, residual, span, prob.status)


def extract_recovery_kraus(choi: RecoveryChoi, B: Sequence[np.ndarray], rel_tol: float = 1e-10) -> list[np.ndarray]:
    """``R_r = sqrt(d_r) sum_I V[I, r] B_I`` from ``X = V D V^dagger``."""
    w, v = np.linalg.eigh(choi.X)
    keep = w > rel_tol * max(w.max(), 0.0)
    return [np.sqrt(d) * np.tensordot(v[:, r], np.asarray(B), axes=1) for d, r in zip(w[keep], np.flatnonzero(keep))]


def channel_fidelity(R: Sequence[np.ndarray], K: KrausSet, code: CodePair) -> float:
    """``(1/4) sum_{r,j} |Tr_L(R_r K_j)|^2`` with the trace taken on the code space."""
    v = code.encoder
    total = 0.0
    for k in K.ops:
        kv = k @ v
        for r in R:
            total += abs(np.trace(v.conj().T @ r @ kv)) ** 2
    return 0.25 * total


def entanglement_fidelity(R: Sequence[np.ndarray], K: KrausSet, code: CodePair) -> float:
    """Same fidelity via the Choi matrix of the logical channel.

    Builds ``Q(|mu><nu|)`` for the encoded, noisy, recovered qubit,
    assembles ``X_Q[[mu, rho], [nu, sigma]] = <rho| Q(|mu><nu|) |sigma>`` and
    returns ``(1/4) sum_{mu, nu} X_Q[[mu, mu], [nu, nu]]``.
    """
    v = code.encoder
    ops = [v.conj().T @ r @ k @ v for r in R for k in K.ops]
    choi = np.zeros((2, 2, 2, 2), dtype=complex)
    for mu in range(2):
        for nu in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[mu, nu] = 1.0
            q = sum(a @ e @ a.conj().T for a in ops)
            choi[mu, :, nu, :] = q
    return float(0.25 * sum(choi[mu, mu, nu, nu] for mu in range(2) for nu in range(2)).real)


def trace_factor(code: CodePair, K: KrausSet) -> float:
    """Mean output trace ``(1/2) sum_mu <mu_L| sum_j K_j^dagger K_j |mu_L>``."""
    v = code.encoder
    return 0.5 * float(sum(np.linalg.norm(k @ v) ** 2 for k in K.ops))


def optimal_recovery(code: CodePair, K: KrausSet, tol: float = 1e-7, drop_tol: float = 1e-10) -> OptimalResult:
    subs = error_subspaces(code, K, drop_tol)
    B = b_operators(code, subs)
    W = process_matrix(B, K, code)
    choi = solve_recovery_sdp(W, B, tol, span=subs.span)
    R = extract_recovery_kraus(choi, B)
    log.debug("SDP: %d basis operators, %d recovery operators, gap %.2e", len(B), len(R), choi.duality_gap)
    return OptimalResult(choi, tuple(R), choi.objective, trace_factor(code, K))
