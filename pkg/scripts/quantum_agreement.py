#!/usr/bin/env python3
"""Sample measurement runs from the two-qubit simulator and score them
against the symbolic consistency oracle.

Every sampled run must be a consistent string, and whenever the oracle
says an outcome is already determined, the simulator must produce it.
"""

import argparse

import numpy as np

from pmlang import quantum, semantics
from pmlang.square import OBSERVABLES, format_string, signed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=2000)
    parser.add_argument("--length", type=int, default=12)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--show", type=int, default=3, help="runs to print")
    args = parser.parse_args()

    table = quantum.standard_square()
    consistent = 0
    determined_hits = 0
    determined_total = 0
    shown = 0
    for seq in np.random.SeedSequence(args.seed).spawn(args.runs):
        rng = np.random.default_rng(seq)
        state = quantum.haar_random_state(rng)
        oracle = semantics.EMPTY_STATE
        symbols = []
        ok = True
        for _ in range(args.length):
            obs = OBSERVABLES[rng.integers(len(OBSERVABLES))]
            value, state = quantum.measure(state, table[obs], rng)
            predicted = oracle.value_of(obs)
            if predicted is not None:
                determined_total += 1
                if predicted == value:
                    determined_hits += 1
            symbols.append(signed(obs, value))
            step = semantics.step(oracle, symbols[-1])
            if step.state is None:
                ok = False
                break
            oracle = step.state
        if ok:
            consistent += 1
        if shown < args.show:
            print(f"run {shown}: {format_string(symbols)}")
            shown += 1

    print(f"\nconsistent runs: {consistent}/{args.runs}")
    print(
        f"determined-value agreement: {determined_hits}/{determined_total} "
        "predictions matched"
    )


if __name__ == "__main__":
    main()
