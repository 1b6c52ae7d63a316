#!/usr/bin/env python3
"""Memory-backflow measure of the embedded reservoir across omega.

Evaluates the positive-increment trace-distance sums over randomly sampled
trajectory pairs for each depolarization strength and writes the
omega,pair_index,sum table the backflow scatter figure consumes.
"""

import argparse
import math

from qrcsim.experiments import (
    ExperimentConfig,
    ModelConfig,
    PhaseConfig,
    TaskConfig,
    run_experiment,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/backflow")
    parser.add_argument("--full", action="store_true", help="100 pairs")
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20_240_303)
    args = parser.parse_args()

    config = ExperimentConfig(
        model=ModelConfig(kind="embedded", n_qubits=3, dt=0.5, h=1.0, gamma=0.1,
                          eta=math.pi / 4),
        task=TaskConfig(kind="blp", omegas=(0.0, 0.25, 0.5, 0.75, 1.0), n_steps=1000),
        phases=PhaseConfig(),
        observables="xyz+pairs",
        realizations=100 if args.full else 20,
        master_seed=args.seed,
    )
    run_experiment(config, out_dir=args.out, workers=args.workers)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
