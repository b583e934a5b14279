"""Command-line entry point: ``robustbf <command> [options]``.

Commands:
  spectrum    one trial's (or the trial-averaged) normalized spectrum
  montecarlo  dispersion table for the configured methods
  table1..3   dispersion tables of the built-in presets
  oracle      brute-force checks of the solvers

Validation errors print a message to stderr and exit with status 2; a
failing oracle check exits with status 1.
"""

import argparse
import contextlib
import logging
import sys

import numpy as np
import yaml

from . import io as rio
from .errors import BeamformingError
from .experiment import (Capon, ExperimentConfig, TABLE_PRESETS, method_from_dict, paper_config,
                         run_monte_carlo, table_config)
from .metrics import normalize_pattern
from .oracles import ALL_CHECKS


def _add_common(p, config=True):
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    if config:
        p.add_argument("--config", default=None, help="YAML experiment config")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--workers", type=int, default=1, help="threads for independent trials")


def build_parser():
    parser = argparse.ArgumentParser(prog="robustbf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="emit a normalized spectrum")
    _add_common(p)
    p.add_argument("--method", default=None,
                   help="method label from the config, or an inline YAML mapping such as "
                        "'{kind: capon_udl, delta1: 3, delta2: 0.01}'")
    p.add_argument("--trial", type=int, default=0, help="trial whose spectrum is emitted")
    p.add_argument("--averaged", action="store_true",
                   help="average the normalized spectra of all trials")
    p.add_argument("--exact-r0", action="store_true",
                   help="use the true covariance instead of snapshots")

    p = sub.add_parser("montecarlo", help="dispersion table for a config")
    _add_common(p)
    p.add_argument("--records", default=None, help="also write per-trial spectra here")
    p.add_argument("--exact-r0", action="store_true")

    for name in TABLE_PRESETS:
        p = sub.add_parser(name, help=f"{name} preset dispersion row")
        _add_common(p, config=False)
        p.add_argument("--snapshots", type=int, default=None)

    p = sub.add_parser("oracle", help="run brute-force solver checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="append", default=None,
                   choices=[c.__name__.removeprefix("check_") for c in ALL_CHECKS],
                   help="run only this check (repeatable)")
    return parser


def _overrides(args):
    out = {}
    if args.seed is not None:
        out["master_seed"] = args.seed
    if args.grid_points is not None:
        out["grid_points"] = args.grid_points
    if args.trials is not None:
        out["trials"] = args.trials
    if getattr(args, "snapshots", None) is not None:
        out["snapshots"] = args.snapshots
    return out


def _load_config(args):
    cfg = ExperimentConfig.from_yaml(args.config) if args.config else paper_config()
    return cfg.replace(**_overrides(args))


def _select_method(cfg, spec):
    if spec is None:
        return cfg.methods[0]
    labels = {m.label(): m for m in cfg.methods}
    if spec in labels:
        return labels[spec]
    parsed = yaml.safe_load(spec)
    if isinstance(parsed, dict):
        return method_from_dict(parsed)
    if isinstance(parsed, str) and parsed.lower() == "capon":
        return Capon()
    raise ValueError(f"method {spec!r} is neither a configured label {sorted(labels)} "
                     "nor a method mapping")


@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_spectrum(args):
    cfg = _load_config(args)
    method = _select_method(cfg, args.method)
    cfg = cfg.replace(methods=(method,))
    if not args.averaged and not args.exact_r0:
        if not 0 <= args.trial < cfg.trials:
            raise ValueError(f"trial {args.trial} outside 0..{cfg.trials - 1}")
        cfg = cfg.replace(trials=args.trial + 1)
    res = run_monte_carlo(cfg, workers=args.workers, exact_r0=args.exact_r0)
    rec = res.records_for(method.label())
    if args.averaged:
        values = res.mean_pattern(method.label())
        values = values / np.nanmax(values)
    else:
        r = rec[0] if args.exact_r0 else rec[args.trial]
        if r.failed:
            raise BeamformingError(r.error)
        values = normalize_pattern(r.values)
    with _sink(args.out) as fh:
        rio.write_spectrum(fh, res.grid, values, "normalized_value")
    return 0


def _emit_table(res, args):
    with _sink(args.out) as fh:
        rio.write_dispersion_table(fh, res.dispersion_rows())
    if getattr(args, "records", None):
        rio.write_run_records(args.records, res.records, res.grid)
    return 0


def cmd_montecarlo(args):
    res = run_monte_carlo(_load_config(args), workers=args.workers, exact_r0=args.exact_r0)
    return _emit_table(res, args)


def cmd_table(args):
    over = _overrides(args)
    seed = over.pop("master_seed", 0)
    res = run_monte_carlo(table_config(args.command, seed, **over), workers=args.workers)
    return _emit_table(res, args)


def cmd_oracle(args):
    wanted = set(args.check or [])
    status = 0
    for check in ALL_CHECKS:
        if wanted and check.__name__.removeprefix("check_") not in wanted:
            continue
        rep = check(seed=args.seed)
        print(rep.line(), flush=True)
        status |= not rep.passed
    return status


COMMANDS = {"spectrum": cmd_spectrum, "montecarlo": cmd_montecarlo, "oracle": cmd_oracle,
            **{name: cmd_table for name in TABLE_PRESETS}}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, TypeError, OSError, yaml.YAMLError, BeamformingError,
            np.linalg.LinAlgError) as exc:
        print(f"robustbf: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
