#!/usr/bin/env python3
"""Compare classic and redundancy matching accuracy on generated noisy scenes.

Runs the seeded scenario generator over a seed range, scores both strategies
at the same thresholds, and prints per-noise-level accuracies.
"""

from __future__ import annotations

import argparse

from scenematch.harness import accuracy_sweep
from scenematch.redundancy import PerformanceThreshold


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=100, help="number of seeds (0..N-1)")
    parser.add_argument("--clutter", type=int, default=4)
    parser.add_argument("--degrade", type=float, nargs="*", default=[0.0, 0.3, 0.6, 0.9])
    parser.add_argument("--false-rate", type=float, default=0.3)
    parser.add_argument("--hidden-rate", type=float, default=0.1)
    parser.add_argument("--min-likelihood", type=float, default=0.6)
    parser.add_argument("--min-ambiguity", type=float, default=0.3)
    args = parser.parse_args()

    threshold = PerformanceThreshold(args.min_likelihood, args.min_ambiguity)
    print(f"{'degrade':>8}  {'classic':>8}  {'redundancy':>10}  {'trials':>6}")
    for degrade in args.degrade:
        summary = accuracy_sweep(
            range(args.seeds),
            clutter=args.clutter,
            degrade=degrade,
            false_rate=args.false_rate,
            hidden_rate=args.hidden_rate,
            threshold=threshold,
        )
        print(
            f"{degrade:>8.2f}  {summary.classic_accuracy:>8.3f}  "
            f"{summary.redundancy_accuracy:>10.3f}  {summary.trials:>6}"
        )


if __name__ == "__main__":
    main()
