"""Command-line driver: ``fdjc run | preset-list | verify | sweep``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures; failures also print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, build_params, load_config, manifest_values, parse_config_text
from .deformation import DeformationSpec
from .dynamics import closed_form_regime, evolve_state
from .errors import ConfigError, FdjcError, NumericalError
from .fockspace import run_checks
from .observables import compute
from .output import write_csv, write_json, write_svg
from .presets import PRESET_NAMES, describe

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _regimes(params):
    if params.kg == 0:
        return "flat"
    grid = params.momentum_grid
    seen = sorted({closed_form_regime(params, n, grid.p, params.t_grid) for n in range(params.n_max + 1)})
    return ",".join(seen)


def run(config: RunConfig, out_dir=None, threads=None) -> dict:
    """Execute one run and write its files.

    Returns a summary dict with the written file names and, for
    ``mode='both'``, the largest closed-form vs oracle difference per observable.
    """
    out = Path(out_dir or config.out_dir or "fdjc_out")
    threads = threads or config.threads
    values = config.resolved()
    params = build_params(values)
    outputs = config.effective_outputs()
    out.mkdir(parents=True, exist_ok=True)

    primary_mode = "oracle" if config.mode == "oracle" else "closed_form"
    traj = evolve_state(params, mode=primary_mode, threads=threads)
    series = compute(traj, outputs)
    oracle_series = None
    if config.mode == "both":
        oracle_series = compute(evolve_state(params, mode="oracle", threads=threads), outputs)

    files = []
    max_diff = {}
    title = f"{config.preset or 'custom'}  kg={params.kg:g}"
    for name in outputs:
        s = series[name]
        ref = oracle_series[name].value if oracle_series else None
        write_csv(out / f"{name}.csv", s.scaled_t, s.value, ref)
        write_svg(out / f"{name}.svg", name, s.scaled_t, s.value, title)
        files += [f"{name}.csv", f"{name}.svg"]
        if ref is not None:
            max_diff[name] = float(np.max(np.abs(s.value - ref)))

    manifest = manifest_values(values)
    manifest["omega"] = params.omega
    manifest["outputs"] = outputs
    manifest["mode"] = config.mode
    manifest["code_version"] = __version__
    write_json(out / "manifest.json", manifest)
    files.append("manifest.json")
    summary = {
        "out_dir": str(out),
        "files": files,
        "n_max": params.n_max,
        "closed_form_route": _regimes(params),
    }
    if max_diff:
        summary["max_abs_diff"] = max_diff
    return summary


def _format_value(v) -> str:
    return f"{v:g}" if isinstance(v, float) else str(v)


def run_sweep(config: RunConfig, out_dir=None, threads=None) -> dict:
    """One sub-directory ``<key>=<value>`` per swept value."""
    if not config.sweep:
        raise ConfigError("sweep requested but no 'sweep' entry given")
    (key, values), = config.sweep.items()
    base = Path(out_dir or config.out_dir or "fdjc_sweep")
    results = {}
    for v in values:
        sub = base / f"{key}={_format_value(v)}"
        results[sub.name] = run(config.with_override(key, v), sub, threads)
    return results


def _error_record(exc: Exception) -> dict:
    rec = {"status": "error", "error": type(exc).__name__, "message": str(exc)}
    for attr in ("key", "line", "suggestion", "keys"):
        val = getattr(exc, attr, None)
        if val is not None:
            rec[attr] = val
    failures = getattr(exc, "failures", None)
    if failures:
        rec["blocks"] = [{"n": n, "error": type(e).__name__, "message": str(e)} for n, e in failures]
    return rec


def _config_from_args(args) -> RunConfig:
    if args.config:
        cfg = load_config(args.config, preset=args.preset)
    elif args.preset:
        cfg = parse_config_text("", preset=args.preset)
    else:
        raise ConfigError("give --config and/or --preset")
    if args.mode:
        cfg.mode = args.mode
        RunConfig.__post_init__(cfg)
    if getattr(args, "param", None):
        if not args.values:
            raise ConfigError("--param needs --values")
        vals = [float(x) if x.strip().lower() not in ("identity", "q_type", "kerr") else x.strip()
                for x in args.values.split(",")]
        cfg.sweep = {args.param: vals}
        RunConfig.__post_init__(cfg)
    return cfg


def _cmd_run(args):
    cfg = _config_from_args(args)
    summary = run(cfg, args.out, args.threads)
    print(json.dumps({"status": "ok", **summary}, indent=2, sort_keys=True))


def _cmd_sweep(args):
    cfg = _config_from_args(args)
    results = run_sweep(cfg, args.out, args.threads)
    print(json.dumps({"status": "ok", "runs": results}, indent=2, sort_keys=True))


def _cmd_preset_list(args):
    for name in PRESET_NAMES:
        print(describe(name))


def _cmd_verify(args):
    specs = [DeformationSpec.identity(), DeformationSpec.q_type(1.04), DeformationSpec.kerr(0.1)]
    rows = run_checks(specs, dim=args.dim, tol=args.tol)
    print(f"{'check':<22} {'deformation':<24} {'residual':>10}  result")
    ok = True
    for name, spec, res, passed in rows:
        label = spec.kind if spec.kind == "identity" else (
            f"q_type(q={spec.q:g})" if spec.kind == "q_type" else f"kerr(kappa={spec.kappa:g})"
        )
        print(f"{name:<22} {label:<24} {res:10.2e}  {'PASS' if passed else 'FAIL'}")
        ok &= passed
    if not ok:
        raise NumericalError("algebra residuals above tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdjc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fdjc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML or JSON configuration file")
        p.add_argument("--preset", choices=PRESET_NAMES, metavar="NAME", help="figure preset (fig1a..fig5c)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--mode", choices=("closed_form", "oracle", "both"))
        p.add_argument("--threads", type=int, default=None, help="worker threads for block evolution")

    p_run = sub.add_parser("run", help="simulate one configuration")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run one configuration per value of a parameter")
    common(p_sweep)
    p_sweep.add_argument("--param", help="parameter to sweep (overrides the config's sweep entry)")
    p_sweep.add_argument("--values", help="comma-separated values")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_list = sub.add_parser("preset-list", help="list figure presets")
    p_list.set_defaults(func=_cmd_preset_list)

    p_verify = sub.add_parser("verify", help="check the deformed operator algebra")
    p_verify.add_argument("--dim", type=int, default=20)
    p_verify.add_argument("--tol", type=float, default=1e-10)
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        args.func(args)
    except ConfigError as exc:
        print(json.dumps(_error_record(exc), sort_keys=True), file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FdjcError) as exc:
        print(json.dumps(_error_record(exc), sort_keys=True), file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
