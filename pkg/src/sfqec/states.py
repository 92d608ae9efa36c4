"""Codeword states: squeezed Fock and squeezed cat states, plus their parameters.

Sign conventions
----------------
``S(r) = exp((r/2)(a^2 - a^dagger^2))``, so ``r > 0`` narrows the x quadrature
and ``S(r)|n>`` has the wavefunction returned by :func:`sf_wavefunction`.

The squeezed coherent state used in the cat codewords is the displaced
squeezed vacuum ``D(alpha) S(r) |0>``. With this ordering the two branches
``|+-alpha, r>`` overlap by ``exp(-2 alpha^2 e^{2r})`` and the even/odd
normalization is ``N_pm = sqrt(2 (1 +- exp(-2 alpha^2 e^{2r})))``.

States are built in a working space twice the requested dimension and then
cut back, so the top Fock levels of the result are not polluted by the
truncation of the generators.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from types import MappingProxyType
from typing import Iterable, Literal, Mapping

import numpy as np
import scipy.optimize
import scipy.sparse
import scipy.sparse.linalg

from . import hilbert
from .errors import (
    DimensionMismatchError,
    InvalidCodeError,
    NoSolutionError,
    ParameterRangeError,
    TruncationError,
)

MAX_SQUEEZING = 3.0
MAX_DISPLACEMENT = 4.0
TAIL_WIDTH = 10
TAIL_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-8
TARGET_MEAN_PHOTON = 3.83

Orientation = Literal["parallel", "perpendicular"]
Parity = Literal["even", "odd"]


def fock(n: int, dim: int) -> np.ndarray:
    dim = hilbert._check_dim(dim)
    if not 0 <= n < dim:
        raise ParameterRangeError(f"Fock index {n} outside 0..{dim - 1}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def _check_squeezing(r: float) -> None:
    if not abs(r) <= MAX_SQUEEZING:
        raise ParameterRangeError(f"|r| must be <= {MAX_SQUEEZING}, got {r}")


def _check_displacement(alpha: complex) -> None:
    if not abs(alpha) <= MAX_DISPLACEMENT:
        raise ParameterRangeError(f"|alpha| must be <= {MAX_DISPLACEMENT}, got {alpha}")


def squeeze_operator(r: float, dim: int) -> np.ndarray:
    """Truncated squeezing operator ``exp((r/2)(a^2 - a^dagger^2))``."""
    _check_squeezing(r)
    a = hilbert.annihilation(dim)
    ad = a.conj().T
    return hilbert.matrix_exponential(0.5 * r * (a @ a - ad @ ad))


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """Truncated displacement operator ``exp(alpha a^dagger - alpha* a)``."""
    _check_displacement(alpha)
    a = hilbert.annihilation(dim)
    return hilbert.matrix_exponential(alpha * a.conj().T - np.conj(alpha) * a)


# sparse generators on the padded working space


def _sparse_a(dim: int) -> scipy.sparse.csr_matrix:
    return scipy.sparse.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr", dtype=complex)


def _apply_squeeze(r: float, vec: np.ndarray) -> np.ndarray:
    if r == 0:
        return vec
    a = _sparse_a(vec.shape[0])
    gen = 0.5 * r * (a @ a - (a @ a).T)
    return scipy.sparse.linalg.expm_multiply(gen.tocsc(), vec)


def _apply_displacement(alpha: complex, vec: np.ndarray) -> np.ndarray:
    if alpha == 0:
        return vec
    a = _sparse_a(vec.shape[0])
    gen = alpha * a.T - np.conj(alpha) * a
    return scipy.sparse.linalg.expm_multiply(gen.tocsc(), vec)


def _work_dim(dim: int) -> int:
    return 2 * dim


def tail_mass(state: np.ndarray, width: int = TAIL_WIDTH) -> float:
    """Weight in the top ``width`` Fock levels."""
    return float(np.sum(np.abs(state[-width:]) ** 2))


def _finish(work: np.ndarray, dim: int, tail_tol: float | None, what: str) -> np.ndarray:
    """Cut a working-space state back to ``dim`` levels, check the tail, renormalize."""
    kept = work[:dim]
    lost = max(0.0, float(np.vdot(work, work).real - np.vdot(kept, kept).real))
    tail = tail_mass(kept) + lost
    if tail_tol is not None and tail > tail_tol:
        raise TruncationError(
            f"{what}: tail mass {tail:.2e} above {tail_tol:.0e} at dim={dim}; increase dim", tail_mass=tail
        )
    return kept / np.linalg.norm(kept)


def squeezed_fock(r: float, n: int, dim: int = hilbert.DEFAULT_DIM, tail_tol: float | None = TAIL_TOL) -> np.ndarray:
    """Normalized squeezed Fock state ``S(r)|n>``."""
    _check_squeezing(r)
    dim = hilbert._check_dim(dim)
    if not 0 <= n < dim / 4:
        raise ParameterRangeError(f"Fock index {n} must be below dim/4 = {dim / 4}")
    work = _apply_squeeze(r, fock(n, _work_dim(dim)))
    out = _finish(work, dim, tail_tol, f"squeezed Fock |r={r}, n={n}>")
    # exact parity: S(r) only couples levels two apart
    out[(np.arange(dim) - n) % 2 == 1] = 0.0
    return out


def squeezed_coherent(alpha: complex, r: float, dim: int = hilbert.DEFAULT_DIM, tail_tol: float | None = TAIL_TOL) -> np.ndarray:
    """Displaced squeezed vacuum ``D(alpha) S(r)|0>``, normalized on the truncated space."""
    _check_squeezing(r)
    _check_displacement(alpha)
    dim = hilbert._check_dim(dim)
    work = _apply_displacement(alpha, _apply_squeeze(r, fock(0, _work_dim(dim))))
    return _finish(work, dim, tail_tol, f"squeezed coherent |alpha={alpha}, r={r}>")


@dataclasses.dataclass(frozen=True)
class SscParams:
    """Squeezed cat parameters.

    The orientation follows from the sign of ``r`` for real ``alpha``:
    ``r < 0`` is the parallel branch and ``r > 0`` the perpendicular one.
    """

    alpha: float
    r: float
    parity: Parity = "even"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterRangeError(f"alpha must be positive, got {self.alpha}")
        if self.parity not in ("even", "odd"):
            raise ParameterRangeError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        _check_squeezing(self.r)
        _check_displacement(self.alpha)

    @property
    def orientation(self) -> Orientation:
        return "parallel" if self.r < 0 else "perpendicular"


def cat_normalization(alpha: float, r: float, parity: Parity = "even") -> float:
    """Closed-form ``N_pm`` for the squeezed cat superposition."""
    sign = 1.0 if parity == "even" else -1.0
    return math.sqrt(2.0 * (1.0 + sign * math.exp(-2.0 * abs(alpha) ** 2 * math.exp(2.0 * r))))


def squeezed_cat(p: SscParams, dim: int = hilbert.DEFAULT_DIM, tail_tol: float | None = TAIL_TOL) -> np.ndarray:
    """Normalized ``|alpha, r> +- |-alpha, r>``."""
    dim = hilbert._check_dim(dim)
    vac = _apply_squeeze(p.r, fock(0, _work_dim(dim)))
    plus = _apply_displacement(p.alpha, vac)
    minus = _apply_displacement(-p.alpha, vac)
    work = plus + minus if p.parity == "even" else plus - minus
    nrm = np.linalg.norm(work)
    if nrm < 1e-12:
        raise ParameterRangeError(f"odd cat with alpha={p.alpha} is numerically null")
    out = _finish(work / nrm, dim, tail_tol, f"squeezed cat {p}")
    parity = 0 if p.parity == "even" else 1
    out[np.arange(dim) % 2 != parity] = 0.0
    return out


def mean_photon(s: np.ndarray) -> float:
    return float(np.sum(np.arange(s.shape[0]) * np.abs(s) ** 2))


def overlap(a: np.ndarray, b: np.ndarray) -> complex:
    """Inner product ``<a|b>``."""
    if a.shape != b.shape:
        raise DimensionMismatchError(f"state shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


# closed forms for the squeezed Fock overlaps <-r, n | r, n>


def sf_overlap_analytic(n: int, r: float) -> float:
    if n == 0:
        return math.sqrt(2.0) * math.exp(r) / math.sqrt(1.0 + math.exp(4 * r))
    if n == 1:
        return 1.0 / math.cosh(2 * r) ** 1.5
    if n == 2:
        return -math.sqrt(2.0) * math.exp(5 * r) * (math.cosh(4 * r) - 5.0) / (1.0 + math.exp(4 * r)) ** 2.5
    raise ParameterRangeError(f"closed-form overlap only available for n in {{0, 1, 2}}, got {n}")


def hermite(n: int, x):
    """Physicists' Hermite polynomial by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    h_prev, h = np.ones_like(x), 2.0 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def sf_wavefunction(x, r: float, n: int):
    """Position wavefunction of ``S(r)|n>``."""
    if n < 0:
        raise ParameterRangeError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    norm = math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi) * math.exp(-r))
    return np.exp(-0.5 * math.exp(2 * r) * x**2) * hermite(n, math.exp(r) * x) / norm


def _scan_root(f, start: float, stop: float, step: float = 0.05, xtol: float = 1e-12) -> float:
    grid = np.arange(start, stop + 0.5 * step * np.sign(stop - start), step * np.sign(stop - start))
    prev_x, prev_f = grid[0], f(grid[0])
    if prev_f == 0.0:
        return float(prev_x)
    for x in grid[1:]:
        fx = f(x)
        if fx == 0.0:
            return float(x)
        if np.sign(fx) != np.sign(prev_f):
            lo, hi = sorted((prev_x, x))
            return float(scipy.optimize.brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))
        prev_x, prev_f = x, fx
    raise NoSolutionError(f"no sign change on [{start}, {stop}]")


def solve_sf_codeword_r() -> float:
    """Squeezing at which ``S(r)|2>`` and ``S(-r)|2>`` are orthogonal (positive root)."""
    return _scan_root(lambda r: sf_overlap_analytic(2, r), 0.0, 1.0, xtol=1e-15)


def solve_ssc_squeezing(
    alpha: float,
    target_n: float = TARGET_MEAN_PHOTON,
    branch: Orientation = "perpendicular",
    dim: int = hilbert.DEFAULT_DIM,
) -> float:
    """Squeezing giving the even squeezed cat a mean photon number ``target_n``.

    The parallel branch returns ``r < 0``, the perpendicular branch ``r > 0``.
    """
    if branch not in ("parallel", "perpendicular"):
        raise ParameterRangeError(f"unknown branch {branch!r}")
    sign = -1.0 if branch == "parallel" else 1.0

    def excess(r):
        state = squeezed_cat(SscParams(alpha, r, "even"), dim, tail_tol=None)
        return mean_photon(state) - target_n

    try:
        return _scan_root(excess, 0.0, sign * MAX_SQUEEZING)
    except NoSolutionError as exc:
        raise NoSolutionError(f"<n> = {target_n} not reached for alpha={alpha} on the {branch} branch") from exc


# codes


@dataclasses.dataclass(frozen=True)
class CodePair:
    """Two logical codewords and where they came from."""

    zero: np.ndarray
    one: np.ndarray
    family: str = "custom"
    params: Mapping[str, float] = dataclasses.field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        zero = np.array(self.zero, dtype=complex)
        one = np.array(self.one, dtype=complex)
        if zero.shape != one.shape or zero.ndim != 1:
            raise DimensionMismatchError("codewords must be 1-D arrays of equal length")
        for name, v in (("zero", zero), ("one", one)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def dim(self) -> int:
        return self.zero.shape[0]

    @property
    def encoder(self) -> np.ndarray:
        """Isometry with the codewords as columns."""
        return np.column_stack([self.zero, self.one])

    @property
    def projector(self) -> np.ndarray:
        v = self.encoder
        return v @ v.conj().T

    def gram(self) -> np.ndarray:
        v = self.encoder
        return v.conj().T @ v


def _checked(code: CodePair, tol: float | None) -> CodePair:
    if tol is not None:
        ov = abs(overlap(code.zero, code.one))
        if ov > tol:
            raise InvalidCodeError(f"codewords overlap by {ov:.3e} (> {tol:.0e})")
    return code


def sf_code(r: float | None = None, n: int = 2, dim: int = hilbert.DEFAULT_DIM) -> CodePair:
    """Squeezed Fock code ``(S(r)|n>, S(-r)|n>)``; ``r`` defaults to the orthogonal root for n = 2."""
    if r is None:
        r = solve_sf_codeword_r()
    code = CodePair(squeezed_fock(r, n, dim), squeezed_fock(-r, n, dim), "SF", {"r": r, "n": n}, "SF")
    return _checked(code, ORTHOGONALITY_TOL)


def ssc_code(alpha: float, r: float, dim: int = hilbert.DEFAULT_DIM, tail_tol: float | None = TAIL_TOL) -> CodePair:
    """Even/odd squeezed cat code."""
    even = SscParams(alpha, r, "even")
    family = "SSC_parallel" if even.orientation == "parallel" else "SSC_perp"
    tag = "par" if even.orientation == "parallel" else "perp"
    code = CodePair(
        squeezed_cat(even, dim, tail_tol),
        squeezed_cat(SscParams(alpha, r, "odd"), dim, tail_tol),
        family,
        {"alpha": alpha, "r": r},
        f"alpha_{tag}_{alpha:.1f}",
    )
    return _checked(code, ORTHOGONALITY_TOL)


def custom_code(zero: np.ndarray, one: np.ndarray, label: str = "custom", orthogonality_tol: float | None = ORTHOGONALITY_TOL) -> CodePair:
    """Code from arbitrary vectors (normalized here). Pass ``orthogonality_tol=None`` to allow overlap."""
    zero = np.asarray(zero, dtype=complex)
    one = np.asarray(one, dtype=complex)
    code = CodePair(zero / np.linalg.norm(zero), one / np.linalg.norm(one), "custom", {}, label)
    return _checked(code, orthogonality_tol)


def make_code(family: str, dim: int = hilbert.DEFAULT_DIM, **params) -> CodePair:
    """Dispatch on ``family`` in {"SF", "SSC", "custom"}."""
    if family == "SF":
        return sf_code(params.get("r"), params.get("n", 2), dim)
    if family in ("SSC", "SSC_parallel", "SSC_perp"):
        alpha = params["alpha"]
        r = params.get("r")
        if r is None:
            branch = "parallel" if family == "SSC_parallel" else "perpendicular"
            r = solve_ssc_squeezing(alpha, params.get("target_n", TARGET_MEAN_PHOTON), branch, dim)
        return ssc_code(alpha, r, dim, params.get("tail_tol", TAIL_TOL))
    if family == "custom":
        return custom_code(params["zero"], params["one"], params.get("label", "custom"))
    raise InvalidCodeError(f"unknown code family {family!r}")


REFERENCE_SQUEEZING = {
    "alpha_par_0.5": (0.5, -1.41),
    "alpha_par_1.0": (1.0, -1.36),
    "alpha_perp_0.5": (0.5, 1.39),
    "alpha_perp_1.0": (1.0, 1.29),
}


@functools.lru_cache(maxsize=8)
def solved_squeezing(dim: int = hilbert.DEFAULT_DIM, target_n: float = TARGET_MEAN_PHOTON) -> dict[str, float]:
    """Squeezing values that put each cat of the comparison set at ``<n> = target_n``."""
    return {
        label: solve_ssc_squeezing(alpha, target_n, "parallel" if r < 0 else "perpendicular", dim)
        for label, (alpha, r) in REFERENCE_SQUEEZING.items()
    }


def benchmark_codes(
    dim: int = hilbert.DEFAULT_DIM,
    tail_tol: float | None = TAIL_TOL,
    labels: Iterable[str] | None = None,
) -> dict[str, CodePair]:
    """The five energy-matched codes: the n = 2 squeezed Fock code and four squeezed cats.

    Cat squeezing values are re-solved (at the default dimension) rather than
    taken from the two-decimal table, so all five share ``<n> = 3.83``.
    ``labels`` restricts the result to a subset, in the canonical order.
    """
    names = ["SF", *REFERENCE_SQUEEZING]
    if labels is not None:
        wanted = set(labels)
        unknown = wanted - set(names)
        if unknown:
            raise InvalidCodeError(f"unknown benchmark codes {sorted(unknown)}; available: {names}")
        names = [n for n in names if n in wanted]
    rs = dict(solved_squeezing())
    codes = {}
    for label in names:
        if label == "SF":
            codes[label] = sf_code(dim=dim)
        else:
            codes[label] = ssc_code(REFERENCE_SQUEEZING[label][0], rs[label], dim, tail_tol)
    return codes
