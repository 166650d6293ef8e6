"""Command-line entry point ``nh-magic``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import kspace
from .eigen import ConvergenceError, DimensionError, SolverOptions, full_spectrum, ground_state, pt_transition_scan, pt_threshold
from .magic import ENUMERATION_CAP, exact_magic, pauli_coefficients
from .model import build_hamiltonian
from .rdm import as_region, reduced_density_matrix
from .sampler import PAIR_FRACTION, SamplerConfig, estimate_m2
from .sweep import (
    _model_params, check_bc, default_jobs, emit, load_config, parse_region, render,
    run_scan, spec_from_config,
)


def _range(text: str) -> np.ndarray:
    """``start:stop:points`` to a linspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:points, got {text!r}")
    return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value parameter file")
    p.add_argument("--model", choices=("nhti", "xx_real"))
    for name in ("J", "h", "gamma", "g", "delta"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--L", type=int)
    p.add_argument("--bc")


def _add_solver_args(p: argparse.ArgumentParser):
    p.add_argument("--dense-threshold", type=int, default=4096)
    p.add_argument("--krylov-dim", type=int)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-12)


def _solver(args) -> SolverOptions:
    return SolverOptions(dense_threshold=args.dense_threshold, krylov_dim=args.krylov_dim,
                         max_iter=args.max_iter, tol=args.tol)


def _merged(args) -> dict:
    cfg = load_config(args.config) if args.config else {}
    for key in ("model", "J", "h", "gamma", "g", "delta", "L", "bc"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _params_from(args):
    cfg = _merged(args)
    model = cfg.get("model", "nhti")
    check_bc(cfg.get("bc"), model)
    values = {k: float(cfg[k]) for k in ("J", "h", "gamma", "g", "delta") if k in cfg}
    return _model_params(model, int(cfg.get("L", 8)), values)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_scan(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = str(args.seed)
    spec = spec_from_config(cfg)
    fmt = args.format or cfg.get("format", "csv")
    out = args.out or cfg.get("out")
    rows = run_scan(spec, jobs=args.jobs or default_jobs(), checkpoint=args.checkpoint)
    if out:
        emit(rows, out, fmt, layout=spec.layout(), timing=args.timing)
    else:
        sys.stdout.write(render(rows, fmt, layout=spec.layout(), timing=args.timing))


def cmd_magic_exact(args):
    params = _params_from(args)
    gs = ground_state(build_hamiltonian(params), _solver(args))
    region = as_region(parse_region(args.region), params.L)
    m2, pur = exact_magic(gs.vector, region)
    top = []
    if len(region) <= ENUMERATION_CAP:
        spectrum = pauli_coefficients(reduced_density_matrix(gs.vector, region))
        top = [[str(p), c] for p, c in spectrum.top(args.top)]
    out = {"M2": m2, "purity": pur, "top_coefficients": top,
           "energy": [gs.energy.real, gs.energy.imag], "tie_flag": gs.tie_flag}
    _write(json.dumps(out, indent=1) + "\n", args.out)


def cmd_magic_sample(args):
    params = _params_from(args)
    gs = ground_state(build_hamiltonian(params), _solver(args))
    cfg = SamplerConfig(chains=args.chains, steps=args.steps, burn_in=args.burn, thin=args.thin, seed=args.seed,
                        pair_fraction=args.pair_fraction)
    est = estimate_m2(gs.vector, parse_region(args.region), cfg)
    out = {"m2": est.m2, "stderr": est.stderr, "acceptance_rate": est.acceptance_rate,
           "per_chain_means": est.per_chain_means}
    _write(json.dumps(out, indent=1) + "\n", args.out)


def _kspace_rows_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(format(float(v), ".17g") for v in row) for row in rows]
    return "\r\n".join(lines) + "\r\n"


def cmd_kspace_scan(args):
    grid = kspace.KGrid(args.mesh)
    rows = []
    for delta in args.delta_range:
        for g in args.g_range:
            p = kspace.XXParams(L=2, g=g, delta=delta, J=args.J)
            rows.append((g, delta, kspace.total_magic_density(p, grid)))
    _write(_kspace_rows_csv(("g", "delta", "m2_density"), rows), args.out)


def cmd_kspace_resolve(args):
    p = kspace.XXParams(L=2, g=args.g, delta=args.delta, J=args.J)
    ks, magic = kspace.momentum_resolved_magic(p, kspace.KGrid(args.mesh))
    _write(_kspace_rows_csv(("k", "magic"), zip(ks, magic)), args.out)


def cmd_spectrum(args):
    params = _params_from(args)
    if args.scan:
        name, _, grid = args.scan.partition("=")
        table = pt_transition_scan(params, name, _range(grid), _solver(args))
        out = {"parameter": name, "table": [[v, f] for v, f in table], "threshold": pt_threshold(table)}
    else:
        report = full_spectrum(build_hamiltonian(params), _solver(args))
        out = {"complex_fraction": report.complex_fraction, "max_imag": report.max_imag,
               "conjugation_closed": report.conjugation_closed, "dimension": int(report.eigenvalues.size)}
    _write(json.dumps(out, indent=1) + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nh-magic", description="Stabilizer Renyi entropy of non-Hermitian spin chains")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="run a parameter scan from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--checkpoint", help="append-only row log used to resume")
    p.add_argument("--timing", action="store_true", help="include wall_time column")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("magic-exact", help="exact M2 of the ground state")
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument("--region", help="inclusive site range a..b (default: whole chain)")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_magic_exact)

    p = sub.add_parser("magic-sample", help="Metropolis estimate of M2 of the ground state")
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument("--region")
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--burn", type=int, default=1_000)
    p.add_argument("--thin", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair-fraction", type=float, default=PAIR_FRACTION, help="share of two-site moves")
    p.add_argument("--out")
    p.set_defaults(func=cmd_magic_sample)

    p = sub.add_parser("kspace-scan", help="momentum-space magic density over (g, delta)")
    p.add_argument("--g-range", type=_range, required=True)
    p.add_argument("--delta-range", type=_range, required=True)
    p.add_argument("--mesh", type=int, default=800)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kspace_scan)

    p = sub.add_parser("kspace-resolve", help="sector magic against momentum")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--mesh", type=int, default=800)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kspace_resolve)

    p = sub.add_parser("spectrum", help="PT classifier: complex fraction of the spectrum")
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument("--scan", help="param=start:stop:points, e.g. gamma=0:1.5:16")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError, ConvergenceError, DimensionError) as err:
        print(f"nh-magic {args.command}: error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
