"""Command-line entry point: ``phaseid {simulate,infer,verify,benchmark}``.

Exit codes: 0 success, 1 inference failure, 2 usage or input-file error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .dataset_io import export_dataset, import_dataset
from .errors import ParseError, PhaseIdError, SchemaMismatch
from .experiment import ExperimentConfig, run_experiment, success_rows, write_success_table, write_timing_table
from .inference import MODES, infer_phases
from .oracle import brute_force_assign
from .preprocess import ERROR_MODELS, NoiseModelConfig
from .simulator import SimulationConfig, simulate

SEED_ENV = "PHASEID_SEED"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _int_range(text: str) -> tuple[int, int]:
    lo, hi = _range(text)
    return int(lo), int(hi)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range_list(text: str) -> tuple[tuple[float, float], ...]:
    return tuple(_range(part) for part in text.split(",") if part)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    return 0


def _simulation_config(args) -> SimulationConfig:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    overrides = {
        "consumers_per_phase_range": args.consumers,
        "loss_range": args.loss,
        "noise_std_range": args.noise,
        "n_multiplier": args.multiplier,
        "loss_draw": args.loss_draw,
        "noise_draw": args.noise_draw,
        "interval_minutes": args.interval_minutes,
        "clock_jitter_std_seconds": args.clock_jitter,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    base["seed"] = _seed(args)
    try:
        return SimulationConfig.from_dict(base)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid simulation config: {exc}") from None


def _noise_model(args) -> NoiseModelConfig:
    try:
        return NoiseModelConfig(relative_std=args.relative_std, error_model=args.error_model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(payload, path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_simulate(args) -> int:
    cfg = _simulation_config(args)
    data = simulate(cfg)
    export_dataset(data, args.output)
    z = data.noisy
    print(f"wrote {args.output}: n={z.n} n_i={z.n_i} N={z.N} seed={cfg.seed}", file=sys.stderr)
    return EXIT_OK


def cmd_infer(args) -> int:
    data = import_dataset(args.input)
    z = data.measurements
    report = infer_phases(z, args.mode, _noise_model(args))
    ids = data.consumer_ids
    payload = {
        "mode": report.mode,
        "n": z.n,
        "n_i": z.n_i,
        "N": z.N,
        "assignment": {m: p.name for m, p in zip(ids, report.assignment.phases)},
        "margins": {m: float(x) for m, x in zip(ids, report.margins)},
        "condition_number_Cd": report.condition_number_Cd,
        "warnings": list(report.warnings),
    }
    if data.assignment is not None:
        payload["matches_phase_hint"] = report.assignment == data.assignment
    _emit(payload, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    data = import_dataset(args.input)
    z = data.measurements
    oracle = brute_force_assign(z, apply_loss_correction=not args.no_loss_correction)
    ids = data.consumer_ids
    payload = {
        "n_i": z.n_i,
        "oracle_assignment": {m: p.name for m, p in zip(ids, oracle.best.phases)},
        "best_residual": oracle.best_residual,
        "runner_up_residual": oracle.runner_up_residual,
        "decisive": oracle.decisive,
    }
    try:
        report = infer_phases(z, args.mode, _noise_model(args))
    except PhaseIdError as exc:
        payload["pipeline_error"] = f"{type(exc).__name__}: {exc}"
        _emit(payload, args.output)
        return EXIT_FAILURE
    payload["pipeline_assignment"] = {m: p.name for m, p in zip(ids, report.assignment.phases)}
    payload["agrees"] = report.assignment == oracle.best
    _emit(payload, args.output)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    sim = _simulation_config(args)
    cfg = ExperimentConfig(
        trials=args.trials,
        n_multipliers=args.multipliers,
        loss_regimes=args.loss_regimes,
        base_seed=sim.seed,
        mode=args.mode,
        simulation=sim,
        noise_model=_noise_model(args),
        workers=args.workers,
    )
    result = run_experiment(cfg)
    write_success_table(result, args.output)
    if args.timing_output:
        write_timing_table(result, args.timing_output)
    for row in success_rows(result):
        print(
            f"loss {row['loss_min']:.2f}-{row['loss_max']:.2f}  N/n_i={row['n_multiplier']:g}  "
            f"success {row['successes']}/{row['trials']} ({row['success_pct']:.1f}%)  "
            f"mean {row['mean_wall_time_s'] * 1e3:.2f} ms",
            file=sys.stderr,
        )
    return EXIT_OK


def _add_simulation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("--config", help="JSON file with simulation settings")
    p.add_argument("--consumers", type=_int_range, help="consumers per phase LO:HI")
    p.add_argument("--noise", type=_range, help="relative noise std LO:HI")
    p.add_argument("--loss-draw", choices=("per_interval", "per_run"))
    p.add_argument("--noise-draw", choices=("per_meter", "per_reading"))
    p.add_argument("--interval-minutes", type=int)
    p.add_argument("--clock-jitter", type=float, help="clock jitter std in seconds")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES, default="noisy")
    p.add_argument("--relative-std", type=float, default=0.01)
    p.add_argument("--error-model", choices=ERROR_MODELS, default="relative")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phaseid", description="Consumer phase identification from interval energy readings.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    _add_simulation_flags(p)
    p.add_argument("--loss", type=_range, help="technical loss fraction LO:HI")
    p.add_argument("--multiplier", type=float, help="intervals per consumer (N / n_i)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("infer", help="infer consumer phases from a dataset")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    _add_model_flags(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("verify", help="cross-check inference against exhaustive search")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--no-loss-correction", action="store_true")
    _add_model_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("benchmark", help="success-rate / timing sweep")
    _add_simulation_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--multipliers", type=_float_list, default=(1.0, 2.0, 3.0, 4.0))
    p.add_argument("--loss-regimes", type=_range_list, default=((0.02, 0.05), (0.05, 0.10)))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing-output", help="CSV of per-trial inference times")
    p.add_argument("-o", "--output", required=True)
    _add_model_flags(p)
    p.set_defaults(func=cmd_benchmark, loss=None, multiplier=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ParseError, SchemaMismatch, OSError) as exc:
        print(f"phaseid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhaseIdError as exc:
        print(f"phaseid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"phaseid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

if __name__ == "__main__":
    sys.exit(main())
