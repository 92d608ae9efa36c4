"""Knill-Laflamme tensor and cost functions."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import hilbert
from .channels import KrausSet
from .errors import DimensionMismatchError
from .states import CodePair


def elementary_error_set(max_loss: int, max_deph: int, dim: int = hilbert.DEFAULT_DIM) -> list[np.ndarray]:
    """``[I, a, a^2, .., a^max_loss, n, n^2, .., n^max_deph]`` in that order."""
    a = hilbert.annihilation(dim)
    n = hilbert.number(dim)
    ops = [hilbert.identity(dim)]
    for k in range(1, max_loss + 1):
        ops.append(np.linalg.matrix_power(a, k))
    for k in range(1, max_deph + 1):
        ops.append(np.linalg.matrix_power(n, k))
    return ops


def _images(code: CodePair, ops: Sequence[np.ndarray]) -> np.ndarray:
    """``out[i, a] = E_a |i_L>``, shape (2, len(ops), dim)."""
    if any(op.shape != (code.dim, code.dim) for op in ops):
        raise DimensionMismatchError("operator and codeword dimensions differ")
    v = code.encoder
    return np.stack([op @ v for op in ops], axis=0).transpose(2, 0, 1)


def kl_tensor(code: CodePair, errors: Sequence[np.ndarray] | KrausSet) -> np.ndarray:
    """``f[i, j, a, b] = <i_L| E_a^dagger E_b |j_L>``."""
    ops = errors.ops if isinstance(errors, KrausSet) else list(errors)
    img = _images(code, ops)
    return np.einsum("iak,jbk->ijab", img.conj(), img)


def _cost(f: np.ndarray) -> float:
    return float(np.sum(np.abs(f[0, 0] - f[1, 1]) ** 2) + np.sum(np.abs(f[0, 1]) ** 2))


def kl_cost_elementary(code: CodePair, errors: Sequence[np.ndarray]) -> float:
    """Sum over error pairs of ``|f_00ab - f_11ab|^2 + |f_01ab|^2``; zero iff the KL conditions hold."""
    return _cost(kl_tensor(code, errors))


def kl_cost_kraus(code: CodePair, K: KrausSet) -> float:
    """KL cost with the channel's Kraus operators in place of elementary errors.

    The double sum runs over all ordered pairs ``(i, j)``, diagonal included,
    so the rates enter through the operator weights.
    """
    return _cost(kl_tensor(code, K))
