#!/usr/bin/env python3
"""Worst-case forgetting-rate audit of the driven Lindblad propagator.

For each sampled coupling matrix, the propagator's contraction part is
computed over a grid of input values; the per-realization table and the
worst-case rate land in decay.csv / records.csv.
"""

import argparse

from qrcsim.experiments import (
    ExperimentConfig,
    ModelConfig,
    PhaseConfig,
    TaskConfig,
    run_experiment,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/decay_audit")
    parser.add_argument("--realizations", type=int, default=20)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20_240_101)
    args = parser.parse_args()

    config = ExperimentConfig(
        model=ModelConfig(kind="markov", n_qubits=3, dt=10.0, h=1.0, gamma=0.1),
        task=TaskConfig(kind="decay", input_grid=(0.0, 0.25, 0.5, 0.75, 1.0)),
        phases=PhaseConfig(),
        observables="z",
        realizations=args.realizations,
        master_seed=args.seed,
    )
    run_experiment(config, out_dir=args.out, workers=args.workers)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
