"""Rate sweeps of the code-quality measures and their CSV / JSON / SVG output."""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import math
import warnings
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__, channels, hilbert, kl, optimal, petz, states
from .errors import InvalidCodeError, SfqecError

MEASURES = ("kl", "petz", "opt")
FORMATS = ("csv", "json", "svg")
WINDOWS = {"loss": (1e-7, 1e-2), "dephasing": (1e-7, 1e-3)}
DEFAULT_POINTS = 25
GATE_TOL = 1e-8


class ConfigError(SfqecError, ValueError):
    pass


@dataclasses.dataclass
class SweepConfig:
    error: str = "loss"
    measures: tuple[str, ...] = ("kl", "petz")
    gamma_min: float | None = None
    gamma_max: float | None = None
    points: int = DEFAULT_POINTS
    dim: int = hilbert.DEFAULT_DIM
    order: str = "first"
    J: int = channels.DEFAULT_J
    states: tuple[str, ...] | None = None
    output_dir: str = "sweep_out"
    formats: tuple[str, ...] = ("csv",)
    force: bool = False
    seed: int = 0
    workers: int = 1
    gate: bool = True

    def __post_init__(self):
        lo, hi = WINDOWS.get(self.error, (None, None))
        if self.gamma_min is None:
            self.gamma_min = lo
        if self.gamma_max is None:
            self.gamma_max = hi

    def validate(self) -> "SweepConfig":
        if self.error not in WINDOWS:
            raise ConfigError(f"unknown error family {self.error!r}; use loss or dephasing")
        bad = set(self.measures) - set(MEASURES)
        if bad or not self.measures:
            raise ConfigError(f"unknown measures {sorted(bad)}; choose from {MEASURES}")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown formats {sorted(bad)}; choose from {FORMATS}")
        if self.order not in ("first", "full"):
            raise ConfigError("order must be 'first' or 'full'")
        if self.points < 1:
            raise ConfigError("points must be >= 1")
        if self.gamma_max < self.gamma_min:
            raise ConfigError("gamma_max must not be below gamma_min")
        if not self.force:
            lo, hi = WINDOWS[self.error]
            if self.gamma_min <= 0:
                raise ConfigError("gamma_min must be positive (use --force for gamma = 0)")
            if self.gamma_max > hi:
                raise ConfigError(f"gamma_max {self.gamma_max:g} outside the {self.error} window (<= {hi:g}); use --force")
        elif self.gamma_min < 0:
            raise ConfigError("gamma_min must be non-negative")
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("measures", "formats", "states"):
            if isinstance(data.get(key), str):
                data[key] = tuple(s.strip() for s in data[key].split(",") if s.strip())
            elif data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.gamma_min], dtype=float)
        if self.gamma_min <= 0:
            return np.linspace(self.gamma_min, self.gamma_max, self.points)
        return np.logspace(math.log10(self.gamma_min), math.log10(self.gamma_max), self.points)


@dataclasses.dataclass
class Row:
    gamma: float
    state: str
    measure: str
    value: float


@dataclasses.dataclass
class SweepResult:
    rows: list[Row]
    metadata: dict
    failures: list[dict] = dataclasses.field(default_factory=list)

    def series(self, measure: str, state: str) -> tuple[np.ndarray, np.ndarray]:
        pts = [(r.gamma, r.value) for r in self.rows if r.measure == measure and r.state == state]
        g, v = zip(*pts) if pts else ((), ())
        return np.array(g), np.array(v)

    def states(self) -> list[str]:
        return list(dict.fromkeys(r.state for r in self.rows))

    def measures(self) -> list[str]:
        return list(dict.fromkeys(r.measure for r in self.rows))


def kraus_set(error: str, gamma: float, dim: int, order: str = "first", J: int = channels.DEFAULT_J) -> channels.KrausSet:
    if order == "full":
        return channels.full_kraus_set(error, gamma, J, dim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", channels.FirstOrderValidityWarning)
        return channels.first_order_set(error, gamma, dim)


def _evaluate(code, measures, K):
    out = {}
    if "kl" in measures:
        out["kl"] = kl.kl_cost_kraus(code, K)
    if "petz" in measures:
        out["petz"] = petz.petz_fidelity(code, K).fidelity
    if "opt" in measures:
        if K.gamma == 0:
            out["opt"] = 1.0
        else:
            out["opt"] = optimal.optimal_recovery(code, K).fidelity
    return out


def _point(code, label, gamma, cfg):
    K = kraus_set(cfg.error, gamma, cfg.dim, cfg.order, cfg.J)
    residual = max(abs(channels.tp_residual(K, code.zero)), abs(channels.tp_residual(K, code.one)))
    return label, gamma, _evaluate(code, cfg.measures, K), residual


def _codes(cfg: SweepConfig, dim: int) -> dict[str, states.CodePair]:
    try:
        return states.benchmark_codes(dim, labels=cfg.states)
    except InvalidCodeError as exc:
        raise ConfigError(str(exc)) from exc


def _run(cfg: SweepConfig, dim: int):
    codes = _codes(cfg, dim)
    cfg_dim = dataclasses.replace(cfg, dim=dim)
    tasks = [(code, label, float(g)) for label, code in codes.items() for g in cfg.grid()]
    rows, failures, residuals = [], [], []

    def run(task):
        code, label, g = task
        try:
            return _point(code, label, g, cfg_dim)
        except SfqecError as exc:
            return label, g, exc, None

    if cfg.workers > 1:
        with concurrent.futures.ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    for label, g, values, residual in results:
        if isinstance(values, Exception):
            failures.append({"state": label, "gamma": g, "error": f"{type(values).__name__}: {values}"})
            continue
        residuals.append(residual)
        for m, v in values.items():
            rows.append(Row(g, label, m, float(v)))
    rows.sort(key=lambda r: (r.measure, r.state, r.gamma))
    return rows, failures, max(residuals, default=0.0)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Evaluate the requested measures for all benchmark codes over the rate grid.

    With ``cfg.gate`` the sweep is repeated at 1.5x the dimension and every
    value is compared; the largest change is recorded in the metadata.
    """
    cfg.validate()
    rows, failures, max_res = _run(cfg, cfg.dim)
    meta = {
        "tool_version": __version__,
        "error": cfg.error,
        "order": cfg.order,
        "dim": cfg.dim,
        "points": cfg.points,
        "gamma_min": cfg.gamma_min,
        "gamma_max": cfg.gamma_max,
        "grid": "log-spaced" if cfg.gamma_min > 0 and cfg.points > 1 else "linear",
        "seed": cfg.seed,
        "max_tp_residual": max_res,
        "solved_squeezing": states.solved_squeezing(),
    }
    if cfg.gate:
        big = int(math.ceil(1.5 * cfg.dim))
        rows_big, _, _ = _run(cfg, big)
        ref = {(r.measure, r.state, r.gamma): r.value for r in rows_big}
        deltas = [abs(r.value - ref[(r.measure, r.state, r.gamma)]) for r in rows if (r.measure, r.state, r.gamma) in ref]
        worst = max(deltas, default=0.0)
        meta["convergence_gate"] = {"dim": big, "max_change": worst, "tol": GATE_TOL, "passed": worst < GATE_TOL}
    bad = [r for r in rows if not math.isfinite(r.value)]
    if bad:
        raise SfqecError(f"{len(bad)} non-finite values in sweep output")
    return SweepResult(rows, meta, failures)


def cost(measure: str, value: float) -> float:
    """Quantity where smaller is better: the KL cost itself, infidelity for the fidelity measures."""
    return value if measure == "kl" else 1.0 - value


def summary(result: SweepResult) -> dict:
    """Orderings and log-log slopes per measure."""
    out = {"metadata": result.metadata, "failures": result.failures, "measures": {}}
    for m in result.measures():
        per_state = {s: result.series(m, s) for s in result.states()}
        gammas = next(iter(per_state.values()))[0]
        lowest = []
        for i, g in enumerate(gammas):
            vals = {s: cost(m, v[i]) for s, (_, v) in per_state.items() if len(v) > i}
            lowest.append(min(vals, key=vals.get))
        below = {}
        for a in per_state:
            for b in per_state:
                if a != b:
                    ca = np.array([cost(m, x) for x in per_state[a][1]])
                    cb = np.array([cost(m, x) for x in per_state[b][1]])
                    below[f"{a} < {b}"] = bool(np.all(ca < cb))
        slopes = {}
        for s, (g, v) in per_state.items():
            c = np.array([cost(m, x) for x in v])
            ok = (g > 0) & (c > 0)
            slopes[s] = float(np.polyfit(np.log10(g[ok]), np.log10(c[ok]), 1)[0]) if ok.sum() >= 2 else None
        out["measures"][m] = {
            "ordering": {"lowest_at_each_point": lowest, "pairwise_below_everywhere": below},
            "loglog_slopes": slopes,
        }
    return out


def write_csv(result: SweepResult, path: Path) -> None:
    lines = ["gamma,state,measure,value"]
    lines += [f"{r.gamma:.17g},{r.state},{r.measure},{r.value:.17g}" for r in result.rows]
    path.write_text("\n".join(lines) + "\n")


def write_json(result: SweepResult, path: Path) -> None:
    path.write_text(json.dumps(summary(result), indent=2, sort_keys=True) + "\n")


_PALETTE = ("#2ca02c", "#e377c2", "#9467bd", "#ff7f0e", "#8c564b", "#1f77b4", "#d62728")


def svg_plot(result: SweepResult, measure: str, width: int = 640, height: int = 420) -> str:
    """Log-log line chart of one measure (cost form), one series per state."""
    left, right, top, bottom = 70, 170, 20, 50
    series = []
    for s in result.states():
        g, v = result.series(measure, s)
        c = np.array([cost(measure, x) for x in v])
        ok = (g > 0) & (c > 0)
        if ok.any():
            series.append((s, np.log10(g[ok]), np.log10(c[ok])))
    if not series:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"></svg>\n'
    xs = np.concatenate([x for _, x, _ in series])
    ys = np.concatenate([y for _, _, y in series])
    x0, x1 = math.floor(xs.min()), math.ceil(xs.max())
    y0, y1 = math.floor(ys.min()), math.ceil(ys.max())
    x1 += x1 == x0
    y1 += y1 == y0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    ylabel = "KL cost" if measure == "kl" else f"1 - F ({measure})"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(x0, x1 + 1):
        parts.append(f'<text x="{px(k):.1f}" y="{top + ph + 15}" text-anchor="middle">1e{k}</text>')
    ystep = max(1, (y1 - y0) // 8)
    for k in range(y0, y1 + 1, ystep):
        parts.append(f'<line x1="{left}" x2="{left + pw}" y1="{py(k):.1f}" y2="{py(k):.1f}" stroke="#ddd"/>')
        parts.append(f'<text x="{left - 5}" y="{py(k) + 4:.1f}" text-anchor="end">1e{k}</text>')
    parts.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">gamma ({result.metadata.get("error", "")})</text>')
    parts.append(
        f'<text x="15" y="{top + ph / 2}" text-anchor="middle" transform="rotate(-90 15 {top + ph / 2})">{ylabel}</text>'
    )
    for i, (s, x, y) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 15 + 16 * i
        parts.append(f'<line x1="{left + pw + 10}" x2="{left + pw + 30}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{left + pw + 35}" y="{ly + 4}">{s}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_outputs(result: SweepResult, out_dir: Path, formats: Iterable[str], stem: str) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        p = out_dir / f"{stem}.csv"
        write_csv(result, p)
        written.append(p)
    if "json" in formats:
        p = out_dir / f"{stem}.json"
        write_json(result, p)
        written.append(p)
    if "svg" in formats:
        for m in result.measures():
            p = out_dir / f"{stem}_{m}.svg"
            p.write_text(svg_plot(result, m))
            written.append(p)
    return written
