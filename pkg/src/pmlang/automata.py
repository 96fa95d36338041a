"""Finite automata over the 18-symbol alphabet: determinization,
minimization, exact word counting, and the hidden-variable bit curve.

Counting is done with exact integers end to end; the only float in a
report is the growth-rate estimate taken from the final count ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping

from .square import ALPHABET, SignedSymbol


@dataclass
class Nfa:
    """Nondeterministic automaton; states may be any hashable objects."""

    states: frozenset
    alphabet: tuple[SignedSymbol, ...]
    transitions: frozenset  # of (state, SignedSymbol, state)
    start: Any
    accepting: frozenset

    def __post_init__(self):
        for src, _, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError("transition references an undeclared state")

    @cached_property
    def transition_map(self) -> dict[tuple[Any, SignedSymbol], frozenset]:
        raw: dict[tuple[Any, SignedSymbol], set] = {}
        for src, sym, dst in self.transitions:
            raw.setdefault((src, sym), set()).add(dst)
        return {k: frozenset(v) for k, v in raw.items()}

    def run(self, word: Iterable[SignedSymbol]) -> frozenset:
        current = frozenset([self.start])
        empty = frozenset()
        for sym in word:
            nxt: set = set()
            for state in current:
                nxt |= self.transition_map.get((state, sym), empty)
            current = frozenset(nxt)
            if not current:
                break
        return current

    def accepts(self, word: Iterable[SignedSymbol]) -> bool:
        return bool(self.run(word) & self.accepting)


@dataclass
class Dfa:
    """Deterministic automaton with a total transition table.

    States are 0..n-1; ``delta[q][k]`` is the successor of state ``q``
    on the symbol with alphabet index ``k``.  ``dead`` marks the
    absorbing reject state when one exists; reported state counts
    usually exclude it.
    """

    alphabet: tuple[SignedSymbol, ...]
    delta: tuple[tuple[int, ...], ...]
    start: int
    accepting: frozenset[int]
    dead: int | None = None

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def live_state_count(self) -> int:
        return self.num_states - (1 if self.dead is not None else 0)

    @property
    def states(self) -> range:
        return range(self.num_states)

    def run(self, word: Iterable[SignedSymbol]) -> int:
        q = self.start
        for sym in word:
            q = self.delta[q][sym.index]
        return q

    def accepts(self, word: Iterable[SignedSymbol]) -> bool:
        return self.run(word) in self.accepting


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction; the empty subset becomes the dead state.

    State numbering follows discovery order (BFS by alphabet index), so
    the result is deterministic.
    """
    if nfa.alphabet != ALPHABET:
        raise ValueError("expected the canonical 18-symbol alphabet")
    tmap = nfa.transition_map
    empty = frozenset()
    start = frozenset([nfa.start])
    ids: dict[frozenset, int] = {start: 0}
    order: list[frozenset] = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        subset = order[i]
        row = []
        for sym in nfa.alphabet:
            nxt: set = set()
            for state in subset:
                nxt |= tmap.get((state, sym), empty)
            succ = frozenset(nxt)
            if succ not in ids:
                ids[succ] = len(order)
                order.append(succ)
            row.append(ids[succ])
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(
        ids[s] for s in order if s & nfa.accepting
    )
    dead = ids.get(empty)
    return Dfa(nfa.alphabet, tuple(rows), 0, accepting, dead)


def _reachable(dfa: Dfa) -> list[int]:
    seen = {dfa.start}
    order = [dfa.start]
    i = 0
    while i < len(order):
        for succ in dfa.delta[order[i]]:
            if succ not in seen:
                seen.add(succ)
                order.append(succ)
        i += 1
    return order


def minimize(dfa: Dfa) -> Dfa:
    """Language-equivalent minimal DFA via Hopcroft partition refinement.

    Unreachable states are pruned first; the refined partition is then
    renumbered by BFS from the start block so the output is canonical.
    Idempotent up to that renumbering.
    """
    reach = _reachable(dfa)
    reach_set = set(reach)
    n_sym = len(dfa.alphabet)

    # inverse transition map restricted to reachable states
    preimage: dict[tuple[int, int], set[int]] = {}
    for q in reach:
        for k in range(n_sym):
            preimage.setdefault((dfa.delta[q][k], k), set()).add(q)

    final = frozenset(q for q in reach if q in dfa.accepting)
    nonfinal = frozenset(reach_set - final)
    partition: set[frozenset[int]] = {b for b in (final, nonfinal) if b}
    block_of = {q: b for b in partition for q in b}
    worklist: set[frozenset[int]] = set()
    if final and nonfinal:
        worklist.add(final if len(final) <= len(nonfinal) else nonfinal)

    while worklist:
        splitter = worklist.pop()
        for k in range(n_sym):
            movers: set[int] = set()
            for target in splitter:
                movers |= preimage.get((target, k), set())
            if not movers:
                continue
            affected: dict[frozenset[int], set[int]] = {}
            for q in movers:
                affected.setdefault(block_of[q], set()).add(q)
            for block, inside in affected.items():
                if len(inside) == len(block):
                    continue
                part_in = frozenset(inside)
                part_out = block - part_in
                partition.remove(block)
                partition.add(part_in)
                partition.add(part_out)
                for q in part_in:
                    block_of[q] = part_in
                for q in part_out:
                    block_of[q] = part_out
                if block in worklist:
                    worklist.remove(block)
                    worklist.add(part_in)
                    worklist.add(part_out)
                else:
                    worklist.add(
                        part_in if len(part_in) <= len(part_out) else part_out
                    )

    # renumber blocks canonically by BFS from the start block
    start_block = block_of[dfa.start]
    ids: dict[frozenset[int], int] = {start_block: 0}
    order: list[frozenset[int]] = [start_block]
    i = 0
    while i < len(order):
        rep = next(iter(order[i]))
        for k in range(n_sym):
            succ = block_of[dfa.delta[rep][k]]
            if succ not in ids:
                ids[succ] = len(order)
                order.append(succ)
        i += 1

    rows = []
    for block in order:
        rep = next(iter(block))
        rows.append(tuple(ids[block_of[dfa.delta[rep][k]]] for k in range(n_sym)))
    accepting = frozenset(ids[b] for b in order if next(iter(b)) in dfa.accepting)
    dead = None
    for b, bid in ids.items():
        if bid not in accepting and all(s == bid for s in rows[bid]):
            dead = bid
            break
    return Dfa(dfa.alphabet, tuple(rows), 0, accepting, dead)


@dataclass(frozen=True)
class CountReport:
    """Exact word counts by length, with growth diagnostics."""

    counts: tuple[int, ...]
    cumulative: tuple[int, ...]
    growth_ratios: tuple[Fraction, ...]
    dominant_rate_estimate: float | None

    @property
    def max_length(self) -> int:
        return len(self.counts) - 1


def count_words(dfa: Dfa, n_max: int) -> CountReport:
    """Count accepted words of each length 0..n_max exactly.

    Dynamic programming over the transition table with Python integers,
    so there is no overflow at any length.  Consecutive-count ratios
    are reported for the back half of the range; the final ratio is the
    dominant growth-rate estimate.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    vec = [0] * dfa.num_states
    vec[dfa.start] = 1
    counts = [sum(vec[q] for q in dfa.accepting)]
    for _ in range(n_max):
        nxt = [0] * dfa.num_states
        for q, amount in enumerate(vec):
            if not amount:
                continue
            for succ in dfa.delta[q]:
                nxt[succ] += amount
        vec = nxt
        counts.append(sum(vec[q] for q in dfa.accepting))
    cumulative = list(counts)
    for i in range(1, len(cumulative)):
        cumulative[i] += cumulative[i - 1]
    ratios = tuple(
        Fraction(counts[n + 1], counts[n])
        for n in range(n_max // 2, n_max)
        if counts[n] > 0
    )
    rate = float(ratios[-1]) if ratios else None
    return CountReport(tuple(counts), tuple(cumulative), ratios, rate)


@dataclass(frozen=True)
class HvBitCurve:
    """Bits needed to label every word up to each length: ceil(log2) of
    the cumulative counts."""

    bits: tuple[int, ...]

    def first_differences(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.bits, self.bits[1:]))


def hv_bits(report: CountReport) -> HvBitCurve:
    bits = tuple(
        (total - 1).bit_length() if total >= 1 else 0 for total in report.cumulative
    )
    return HvBitCurve(bits)


def shortest_words(dfa: Dfa) -> dict[int, tuple[SignedSymbol, ...]]:
    """A shortest word reaching each state, by BFS; used for labelling."""
    words: dict[int, tuple[SignedSymbol, ...]] = {dfa.start: ()}
    queue = [dfa.start]
    i = 0
    while i < len(queue):
        q = queue[i]
        for k, succ in enumerate(dfa.delta[q]):
            if succ not in words:
                words[succ] = words[q] + (dfa.alphabet[k],)
                queue.append(succ)
        i += 1
    return words


def to_dot(dfa: Dfa, labels: Mapping[int, str] | None = None) -> str:
    """Graphviz rendering; accepting states are double circles and
    parallel edges are merged with token lists."""
    name = lambda q: f"q{q}"
    lines = ["digraph dfa {", "  rankdir=LR;", "  __start [shape=point];"]
    for q in dfa.states:
        attrs = []
        shape = "doublecircle" if q in dfa.accepting else "circle"
        attrs.append(f'shape="{shape}"')
        if labels and q in labels:
            attrs.append(f'label="{labels[q]}"')
        if dfa.dead == q:
            attrs.append('style="dashed"')
        lines.append(f"  {name(q)} [{', '.join(attrs)}];")
    lines.append(f"  __start -> {name(dfa.start)};")
    grouped: dict[tuple[int, int], list[str]] = {}
    for q in dfa.states:
        for k, succ in enumerate(dfa.delta[q]):
            grouped.setdefault((q, succ), []).append(dfa.alphabet[k].token)
    for (src, dst), tokens in sorted(grouped.items()):
        label = ",".join(tokens)
        lines.append(f'  {name(src)} -> {name(dst)} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
