#!/usr/bin/env python3
"""Short-term-memory capacity curves for the residual reservoir.

Sweeps the mix weight over {0.1, 0.5, 1.0} at tau = 0..12 and writes one
run directory per weight plus long-format sweep CSVs, ready for the
capacity-vs-delay figure.

Desk scale (20 realizations) by default; pass --full for the publication
scale of 100 realizations.
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
    parser.add_argument("--out", default="results/capacity_curves")
    parser.add_argument("--full", action="store_true", help="100 realizations")
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20_240_101)
    args = parser.parse_args()

    config = ExperimentConfig(
        model=ModelConfig(kind="residual", n_qubits=3, dt=10.0, h=1.0, gamma=0.1, tau_e=10),
        task=TaskConfig(kind="stm", taus=tuple(range(13))),
        phases=PhaseConfig(washout=1000, train=1000, test=1000),
        observables="xyz+pairs",
        realizations=100 if args.full else 20,
        master_seed=args.seed,
    )
    sweep(config, "lambda", [0.1, 0.5, 1.0], out_dir=args.out, workers=args.workers)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
