"""Command-line entry points for the experiment harness.

Each subcommand carries defaults matching one published experiment family;
a JSON config file overrides any subset of fields and the common flags
override the config.  Errors exit nonzero with a machine-readable class and
message on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from .experiments import (
    ConfigError,
    ExperimentConfig,
    ModelConfig,
    PhaseConfig,
    RealizationError,
    TaskConfig,
    estimate_runtime,
    load_config,
    run_experiment,
    sweep,
)
from .tasks import DataFormatError

RUNTIME_WARN_SECONDS = 60.0


def _default_config(command: str) -> ExperimentConfig:
    if command == "run-stm":
        return ExperimentConfig(
            model=ModelConfig(kind="residual", n_qubits=3, dt=10.0, mix_weight=1.0, tau_e=10),
            task=TaskConfig(kind="stm", taus=tuple(range(13))),
            observables="xyz+pairs",
        )
    if command == "run-monomial":
        return ExperimentConfig(
            model=ModelConfig(kind="residual", n_qubits=3, dt=10.0, mix_weight=1.0, tau_e=10),
            task=TaskConfig(kind="monomial", d1=0, d2=10),
            observables="xyz+pairs",
        )
    if command == "run-mg":
        return ExperimentConfig(
            model=ModelConfig(kind="embedded", n_qubits=3, dt=0.5, eta=math.pi / 4, omega=0.5),
            task=TaskConfig(kind="mg", horizon=150),
            observables="xyz+pairs",
        )
    if command == "run-santafe":
        return ExperimentConfig(
            model=ModelConfig(kind="embedded", n_qubits=3, dt=0.5, eta=math.pi / 4, omega=0.5),
            task=TaskConfig(kind="santafe", steps_ahead=(1, 2, 3)),
            observables="xyz+pairs",
        )
    if command == "run-blp":
        return ExperimentConfig(
            model=ModelConfig(kind="embedded", n_qubits=3, dt=0.5, eta=math.pi / 4),
            task=TaskConfig(kind="blp", omegas=(0.0, 0.25, 0.5, 0.75, 1.0), n_steps=1000),
            observables="xyz+pairs",
        )
    if command == "run-decay":
        return ExperimentConfig(
            model=ModelConfig(kind="markov", n_qubits=3, dt=10.0),
            task=TaskConfig(kind="decay", input_grid=(0.0, 0.25, 0.5, 0.75, 1.0)),
            observables="z",
            realizations=10,
        )
    raise ValueError(f"no default config for {command}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--realizations", type=int, default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=str, required=True, help="output directory")
    parser.add_argument("--skip-failures", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrcsim", description="Quantum reservoir computing experiment harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run-stm", "run-monomial", "run-mg", "run-santafe", "run-blp", "run-decay"):
        cmd = sub.add_parser(name)
        _add_common_flags(cmd)
        if name == "run-santafe":
            cmd.add_argument("--data", type=str, default=None, help="dataset file path")
    swp = sub.add_parser("sweep")
    _add_common_flags(swp)
    swp.add_argument("--param", type=str, required=True)
    swp.add_argument("--values", type=str, required=True, help="comma-separated values")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    if args.config is not None:
        config = load_config(args.config)
    elif args.command == "sweep":
        raise ConfigError("config", "sweep requires --config")
    else:
        config = _default_config(args.command)
    if args.command != "sweep":
        expected = {
            "run-stm": "stm",
            "run-monomial": "monomial",
            "run-mg": "mg",
            "run-santafe": "santafe",
            "run-blp": "blp",
            "run-decay": "decay",
        }[args.command]
        if config.task.kind != expected:
            raise ConfigError("task.kind", f"{args.command} expects {expected!r}")
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.realizations is not None:
        config = replace(config, realizations=args.realizations)
    if getattr(args, "data", None) is not None:
        config = replace(config, task=replace(config.task, dataset_path=args.data))
    return config.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        estimate = estimate_runtime(config)
        if estimate > RUNTIME_WARN_SECONDS:
            print(f"estimated runtime: {estimate / 60.0:.1f} min", flush=True)
        if args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            if not values:
                raise ConfigError("sweep.values", "no values given")
            sweep(
                config,
                parameter=args.param,
                values=values,
                out_dir=args.out,
                workers=args.workers,
                skip_failures=args.skip_failures,
            )
        else:
            run_experiment(
                config,
                out_dir=args.out,
                workers=args.workers,
                skip_failures=args.skip_failures,
            )
    except ConfigError as exc:
        _fail("config-error", str(exc))
        return 2
    except DataFormatError as exc:
        _fail("data-error", str(exc))
        return 3
    except RealizationError as exc:
        _fail("realization-error", str(exc))
        return 4
    except ValueError as exc:
        _fail("value-error", str(exc))
        return 2
    print(f"wrote results to {args.out}")
    return 0


def _fail(error_class: str, message: str) -> None:
    print(json.dumps({"error": error_class, "message": message}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
