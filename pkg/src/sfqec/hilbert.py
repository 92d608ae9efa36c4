"""Dense linear algebra on a truncated Fock space.

Operators are plain complex ``numpy`` arrays of shape ``(dim, dim)`` acting on
Fock levels ``0..dim-1``; states are 1-D complex arrays of length ``dim``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, InvalidDimensionError, NotPSDError, NumericFailureError

DEFAULT_DIM = 240

_HERMITIAN_TOL = 1e-10
_CLIP_TOL = 1e-10
_NEG_TOL = 1e-8


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"truncation dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator with ``a[n-1, n] = sqrt(n)``."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number(dim: int) -> np.ndarray:
    """Number operator ``diag(0, 1, ..., dim-1)``."""
    dim = _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(_check_dim(dim), dtype=complex)


def is_hermitian(m: np.ndarray, tol: float = _HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return bool(np.abs(m - m.conj().T).max(initial=0.0) <= tol * scale)


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    Anti-Hermitian generators go through the eigendecomposition of ``i*m`` so
    the result is unitary to machine precision; anything else goes through
    scipy's scaling-and-squaring Pade routine.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericFailureError("matrix exponential of a non-finite matrix")
    if is_hermitian(1j * m):
        h = 0.5 * (1j * m + (1j * m).conj().T)
        w, v = np.linalg.eigh(h)
        out = (v * np.exp(-1j * w)) @ v.conj().T
    else:
        out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise NumericFailureError("matrix exponential did not converge", residual=np.inf)
    return out


def _psd_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise NotPSDError("matrix is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    lam_max = max(float(w.max(initial=0.0)), 0.0)
    if w.size and w.min() < -_NEG_TOL * max(lam_max, 1e-300):
        raise NotPSDError(f"matrix has a significantly negative eigenvalue {w.min():.3e} (max {lam_max:.3e})")
    w = np.where(w < 0.0, 0.0, w)
    return w, v


def hermitian_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix."""
    w, v = _psd_eigh(m)
    return (v * np.sqrt(w)) @ v.conj().T


def hermitian_pinv_sqrt(m: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose inverse square root of a Hermitian PSD matrix.

    Eigenvalues at or below ``rel_tol * lambda_max`` are treated as the null
    space and map to zero.
    """
    w, v = _psd_eigh(m)
    lam_max = float(w.max(initial=0.0))
    keep = w > rel_tol * lam_max
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv) @ v.conj().T


def partial_trace_outer(a: np.ndarray, outer_dim: int) -> np.ndarray:
    """Trace out the outer factor of a matrix indexed by ``[mu, l]`` pairs.

    ``out[l, k] = sum_mu a[mu * inner + l, mu * inner + k]``.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n or outer_dim < 1 or n % outer_dim:
        raise DimensionMismatchError(f"shape {a.shape} is not blocked by outer dimension {outer_dim}")
    inner = n // outer_dim
    return np.einsum("uiuj->ij", a.reshape(outer_dim, inner, outer_dim, inner))


def gram_schmidt(vectors, drop_tol: float = 1e-10) -> tuple[list[np.ndarray], list[int]]:
    """Orthonormalize ``vectors`` in order.

    Returns the orthonormal vectors and the indices of inputs that were
    dropped because their residual norm after projection fell below
    ``drop_tol``. Each vector is projected twice, which keeps the output
    orthonormal to ~1e-15 even for nearly dependent inputs.
    """
    basis: list[np.ndarray] = []
    dropped: list[int] = []
    dim = None
    for idx, v in enumerate(vectors):
        v = np.array(v, dtype=complex)
        if dim is None:
            dim = v.shape
        elif v.shape != dim:
            raise DimensionMismatchError("vectors must share one dimension")
        for _ in range(2):
            for b in basis:
                v -= np.vdot(b, v) * b
        nrm = np.linalg.norm(v)
        if nrm < drop_tol:
            dropped.append(idx)
            continue
        basis.append(v / nrm)
    return basis, dropped


def random_density_matrix(dim: int, rng: np.random.Generator | int | None = None, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^dagger / Tr`` with Gaussian ``G``."""
    dim = _check_dim(dim)
    rng = np.random.default_rng(rng)
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
