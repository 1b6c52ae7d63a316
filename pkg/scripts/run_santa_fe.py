#!/usr/bin/env python3
"""Laser-intensity forecasting benchmark across depolarization strengths.

The dataset is not bundled: supply the plain-text file (one integer sample
per line) via --data.  Capacities for one-, two- and three-step-ahead
prediction are swept over omega in {0, 0.5, 1}.
"""

import argparse
import math

from qrcsim.experiments import (
    ExperimentConfig,
    ModelConfig,
    PhaseConfig,
    TaskConfig,
    sweep,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", required=True, help="dataset file path")
    parser.add_argument("--out", default="results/santa_fe")
    parser.add_argument("--full", action="store_true", help="100 realizations")
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20_240_404)
    args = parser.parse_args()

    config = ExperimentConfig(
        model=ModelConfig(kind="embedded", n_qubits=3, dt=0.5, h=1.0, gamma=0.1,
                          eta=math.pi / 4),
        task=TaskConfig(kind="santafe", steps_ahead=(1, 2, 3), dataset_path=args.data),
        phases=PhaseConfig(washout=1000, train=1000, test=1000),
        observables="xyz+pairs",
        realizations=100 if args.full else 20,
        master_seed=args.seed,
    )
    sweep(config, "omega", [0.0, 0.5, 1.0], out_dir=args.out, workers=args.workers)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
