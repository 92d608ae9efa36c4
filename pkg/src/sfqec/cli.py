"""Command-line entry point: ``sfqec codewords | sweep | commute-check``.

Exit codes: 0 success, 1 validation error, 2 solver failure, 3 convergence-gate failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, channels, hilbert, states, sweep
from .errors import SfqecError, SolverFailureError, TruncationError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_GATE = 3

TABLE_TOL = 0.01
COMMUTE_TOL = 1e-8


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def cmd_codewords(args) -> int:
    dim = args.dim or hilbert.DEFAULT_DIM
    r_star = states.solve_sf_codeword_r()
    sf = states.sf_code(r_star, dim=dim)
    n_sf = states.mean_photon(sf.zero)
    print(f"r* = arccosh(5)/4 = {math.acosh(5) / 4:.6f} (solved {r_star:.6f})")
    print(f"SF n=2 code: <n> = {n_sf:.4f}, |<0_L|1_L>| = {abs(states.overlap(sf.zero, sf.one)):.2e}")
    ok = abs(n_sf - states.TARGET_MEAN_PHOTON) <= 0.005
    solved = states.solved_squeezing(dim)
    print(f"{'state':<16}{'alpha':>7}{'r solved':>12}{'r table':>10}{'diff':>9}  match")
    for label, (alpha, r_tab) in states.REFERENCE_SQUEEZING.items():
        r = solved[label]
        match = abs(r - r_tab) <= TABLE_TOL
        ok &= match
        print(f"{label:<16}{alpha:>7.2f}{r:>12.6f}{r_tab:>10.2f}{r - r_tab:>9.4f}  {'yes' if match else 'NO'}")
    print("all values match" if ok else "mismatch against tabulated values")
    return EXIT_OK if ok else EXIT_GATE


def _sweep_config(args) -> sweep.SweepConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise sweep.ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise sweep.ConfigError("config file must hold a JSON object")
    flags = {
        "error": args.error,
        "measures": _csv_list(args.measure) if args.measure else None,
        "gamma_min": args.gamma_min,
        "gamma_max": args.gamma_max,
        "points": args.points,
        "dim": args.dim,
        "order": args.order,
        "states": _csv_list(args.states) if args.states else None,
        "output_dir": args.out,
        "formats": _csv_list(args.format) if args.format else None,
        "seed": args.seed,
        "workers": args.workers,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.force:
        data["force"] = True
    if args.no_gate:
        data["gate"] = False
    return sweep.SweepConfig.from_mapping(data).validate()


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    print(f"sweep: {cfg.error}, measures {','.join(cfg.measures)}, {cfg.points} points in "
          f"[{cfg.gamma_min:g}, {cfg.gamma_max:g}], dim {cfg.dim}, seed {cfg.seed}")
    result = sweep.run_sweep(cfg)
    stem = f"{cfg.error}_{'_'.join(cfg.measures)}"
    for p in sweep.write_outputs(result, Path(cfg.output_dir), cfg.formats, stem):
        print(f"wrote {p}")
    print(f"max TP residual {result.metadata['max_tp_residual']:.3e}")
    for f in result.failures:
        print(f"FAILED {f['state']} at gamma={f['gamma']:g}: {f['error']}", file=sys.stderr)
    gate = result.metadata.get("convergence_gate")
    if gate:
        print(f"convergence gate (dim {gate['dim']}): max change {gate['max_change']:.3e} "
              f"{'ok' if gate['passed'] else 'FAILED'}")
    if result.failures:
        return EXIT_SOLVER
    if gate and not gate["passed"]:
        return EXIT_GATE
    return EXIT_OK


def cmd_commute_check(args) -> int:
    if args.J < 0 or args.gamma1 < 0 or args.gamma2 < 0:
        raise sweep.ConfigError("gamma1, gamma2 and J must be non-negative")
    rng = np.random.default_rng(args.seed)
    rho = hilbert.random_density_matrix(args.dim, rng)
    dist = channels.commutation_distance(args.gamma1, args.gamma2, rho, args.J)
    # trace lost to the truncated Kraus series, per channel
    lost = max(
        abs(np.trace(channels.apply_channel(channels.full_kraus_set(fam, g, args.J, args.dim), rho)).real - 1.0)
        for fam, g in (("loss", args.gamma1), ("dephasing", args.gamma2))
    )
    converged = lost < COMMUTE_TOL
    print(f"seed {args.seed}, dim {args.dim}, J {args.J}, gamma1 {args.gamma1:g}, gamma2 {args.gamma2:g}")
    print(f"commutation distance {dist:.3e}; Kraus series truncation residual {lost:.3e}")
    if not converged:
        print("not converged: increase J")
        return EXIT_GATE
    ok = dist < COMMUTE_TOL
    print("pass" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfqec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codewords", help="solve codeword squeezing and compare with the tabulated values")
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=cmd_codewords)

    p = sub.add_parser("sweep", help="evaluate KL / Petz / optimal measures over a rate grid")
    p.add_argument("--config", help="JSON file with SweepConfig fields; flags override it")
    p.add_argument("--measure", help="comma list from kl,petz,opt")
    p.add_argument("--error", choices=("loss", "dephasing"))
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--order", choices=("first", "full"), help="first-order Kraus pair or the full series")
    p.add_argument("--states", help="comma list of state labels (default: all five)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", help="comma list from csv,json,svg")
    p.add_argument("--force", action="store_true", help="allow rates outside the validity window")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--no-gate", action="store_true", help="skip the 1.5x dimension rerun")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("commute-check", help="check that loss and dephasing commute")
    p.add_argument("--gamma1", type=float, default=1e-3)
    p.add_argument("--gamma2", type=float, default=1e-3)
    p.add_argument("--J", type=int, default=20)
    p.add_argument("--dim", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_commute_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverFailureError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TruncationError as exc:
        print(f"truncation error: {exc} (raise --dim)", file=sys.stderr)
        return EXIT_VALIDATION
    except (SfqecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
