#!/usr/bin/env python3
"""Capacity of the product target s_k * s_(k-10) as the mix weight varies.

Sweeps the residual reservoir's mix weight from 0.1 to 1.0 in steps of 0.1;
the capacity-vs-weight figure reads the sweep summary directly.
"""

import argparse

from qrcsim.experiments import (
    ExperimentConfig,
    ModelConfig,
    PhaseConfig,
    TaskConfig,
    sweep,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/monomial_sweep")
    parser.add_argument("--full", action="store_true", help="100 realizations")
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20_240_101)
    args = parser.parse_args()

    config = ExperimentConfig(
        model=ModelConfig(kind="residual", n_qubits=3, dt=10.0, h=1.0, gamma=0.1, tau_e=10),
        task=TaskConfig(kind="monomial", d1=0, d2=10),
        phases=PhaseConfig(washout=1000, train=1000, test=1000),
        observables="xyz+pairs",
        realizations=100 if args.full else 20,
        master_seed=args.seed,
    )
    values = [round(0.1 * k, 1) for k in range(1, 11)]
    sweep(config, "lambda", values, out_dir=args.out, workers=args.workers)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
