"""Time the jump-amplitude solver against the transfer-matrix solver.

Both locate the same determinant roots; the jump-amplitude system is a
single dense (m+4) matrix per evaluation while the transfer chain multiplies
one 4x4 factor per crack.  Run with

    python3 scripts/method_timing.py --modes 3 --repeats 5
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from crackedbeam import BeamProblem
from crackedbeam import shifrin, transition


@dataclass(frozen=True)
class TimingConfig:
    modes: int = 3
    repeats: int = 5


PROBLEMS = {
    "one_crack": BeamProblem(positions=(1.0,), flexibilities=(0.3,)),
    "two_crack": BeamProblem(positions=(1.0, 2.2), flexibilities=(0.3, 0.7)),
    "three_crack": BeamProblem(positions=(0.8, 1.6, 2.4), flexibilities=(0.2, 0.5, 0.4)),
}


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(config: TimingConfig) -> None:
    print(f"locating {config.modes} roots, best of {config.repeats} runs")
    print(f"{'problem':<12} {'jump-amplitude':>15} {'transfer-matrix':>16} {'ratio':>7}")
    for name, problem in PROBLEMS.items():
        t_shifrin = best_of(lambda: shifrin.find_eigenvalues(problem, config.modes), config.repeats)
        t_transition = best_of(
            lambda: transition.find_eigenvalues(problem, config.modes), config.repeats
        )
        print(
            f"{name:<12} {t_shifrin * 1e3:>13.1f}ms {t_transition * 1e3:>14.1f}ms"
            f" {t_shifrin / t_transition:>7.2f}"
        )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--modes", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    run(TimingConfig(modes=args.modes, repeats=args.repeats))


if __name__ == "__main__":
    main()
