#!/usr/bin/env python3
"""Print the word-count growth of the measurement language.

Builds the grammar, determinizes and minimizes the automaton, counts
words exactly up to --max-length, and reports the cumulative bit curve
with its increments, which is the memory needed to label every possible
experiment up to each length.
"""

import argparse

from pmlang import automata, grammar


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-length", type=int, default=60)
    args = parser.parse_args()

    dfa = automata.minimize(automata.determinize(grammar.to_nfa()))
    print(
        f"minimal automaton: {dfa.num_states} states "
        f"({dfa.live_state_count} excluding the reject sink)"
    )
    report = automata.count_words(dfa, args.max_length)
    curve = automata.hv_bits(report)
    print(f"{'n':>4}  {'count':>24}  {'cumulative':>24}  {'bits':>5}")
    for n in range(args.max_length + 1):
        print(
            f"{n:>4}  {report.counts[n]:>24}  {report.cumulative[n]:>24}  "
            f"{curve.bits[n]:>5}"
        )
    print(f"dominant growth rate estimate: {report.dominant_rate_estimate}")
    diffs = curve.first_differences()
    if len(diffs) > 10:
        window = diffs[len(diffs) // 2 :]
        print(
            f"bit increments over the back half: min {min(window)}, "
            f"max {max(window)} (linear growth)"
        )


if __name__ == "__main__":
    main()
