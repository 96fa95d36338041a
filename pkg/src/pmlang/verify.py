"""Cross-module verification suites.

Each suite pits one implementation route against an independent one
(grammar against the operational rules, counting against brute-force
enumeration, predictor machines against the oracle, sampled quantum
runs against the language) and reports one line per check.  The CLI
``verify`` command and the acceptance tests both run these functions;
depth limits and seeds live in :class:`VerifyConfig` so they can be
tightened or loosened from the command line.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import automata, grammar, maga, quantum, semantics
from .square import (
    ALPHABET,
    CONTEXTS,
    OBSERVABLES,
    SignedSymbol,
    all_fillings,
    negative_context_count,
)


@dataclass
class VerifyConfig:
    """Depth limits and seeds; the defaults are the acceptance settings."""

    seed: int = 20240817
    exhaustive_len: int = 4
    random_strings: int = 100_000
    random_max_len: int = 12
    invariant_len: int = 5
    maga_len: int = 5
    count_max: int = 1000
    qubits_max: int = 64
    quantum_runs: int = 10_000
    quantum_run_len: int = 12
    quantum_trials: int = 1000


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))


@lru_cache(maxsize=None)
def _pipeline() -> tuple[automata.Nfa, automata.Dfa, automata.Dfa]:
    nfa = grammar.to_nfa()
    dfa = automata.determinize(nfa)
    return nfa, dfa, automata.minimize(dfa)


def minimal_dfa() -> automata.Dfa:
    return _pipeline()[2]


def _nfa_stepper(nfa: automata.Nfa):
    tmap = nfa.transition_map
    empty = frozenset()

    @lru_cache(maxsize=None)
    def advance(states: frozenset, sym: SignedSymbol) -> frozenset:
        out: set = set()
        for q in states:
            out |= tmap.get((q, sym), empty)
        return frozenset(out)

    return advance


def _random_string(rng: random.Random, max_len: int) -> tuple[SignedSymbol, ...]:
    return tuple(rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len)))


# ---------------------------------------------------------------- parity


def suite_parity(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("parity")
    odd = 0
    perfect = 0
    for filling in all_fillings():
        count = negative_context_count(filling)
        if count % 2:
            odd += 1
        if all(
            math.prod(filling.values[o.index] for o in ctx.members) == ctx.sign
            for ctx in CONTEXTS
        ):
            perfect += 1
    result.add(
        "negative-context count is even for all 512 fillings",
        odd == 0,
        f"odd counts: {odd}",
    )
    result.add(
        "no filling satisfies all six context constraints",
        perfect == 0,
        f"satisfying fillings: {perfect}",
    )
    return result


# ---------------------------------------------------------------- grammar


def suite_grammar(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("grammar")
    nfa = _pipeline()[0]
    advance = _nfa_stepper(nfa)
    accepting = nfa.accepting
    start = frozenset([nfa.start])

    nodes = 0
    mismatches = 0

    def walk(nset: frozenset, sstate, depth: int):
        nonlocal nodes, mismatches
        nodes += 1
        if bool(nset & accepting) != (sstate is not None):
            mismatches += 1
        if depth == cfg.exhaustive_len:
            return
        for sym in ALPHABET:
            child = semantics.step(sstate, sym).state if sstate is not None else None
            walk(advance(nset, sym), child, depth + 1)

    walk(start, semantics.EMPTY_STATE, 0)
    result.add(
        f"derivability matches consistency on all strings up to length "
        f"{cfg.exhaustive_len}",
        mismatches == 0,
        f"{nodes} strings, {mismatches} mismatches",
    )

    rng = random.Random(cfg.seed)
    bad = 0
    for _ in range(cfg.random_strings):
        w = _random_string(rng, cfg.random_max_len)
        nset = start
        for sym in w:
            nset = advance(nset, sym)
            if not nset:
                break
        if bool(nset & accepting) != semantics.is_consistent(w):
            bad += 1
    result.add(
        f"derivability matches consistency on {cfg.random_strings} random "
        f"strings up to length {cfg.random_max_len}",
        bad == 0,
        f"{bad} mismatches",
    )

    witness = grammar.derive_membership("A B c ~gamma")
    result.add(
        "the four-token reference string has a five-step derivation",
        witness is not None and len(witness.steps) == 5,
        "no derivation" if witness is None else f"{len(witness.steps)} steps",
    )
    result.add(
        "the clashing variant has no derivation",
        grammar.derive_membership("A B c gamma") is None,
    )
    good = semantics.trace("A B c ~gamma")
    clash = semantics.trace("A B c gamma")
    result.add(
        "reference traces evolve through the documented states and the "
        "clash lands on token 4",
        good.consistent
        and [s.describe() for s in good.states]
        == [
            "A=+1",
            "A=+1 B=+1 C=+1",
            "C=+1 c=+1 gamma=-1",
            "C=+1 c=+1 gamma=-1",
        ]
        and clash.failed_at == 3,
        f"clash index {clash.failed_at}",
    )
    return result


# ---------------------------------------------------------------- invariants


def suite_invariants(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("invariants")
    nodes = 0
    malformed = 0
    persistence_broken = 0
    multi_context = 0

    def walk(state, depth: int, parent_had_context: bool):
        nonlocal nodes, malformed, persistence_broken, multi_context
        nodes += 1
        if not semantics.state_is_well_formed(state):
            malformed += 1
        full = [
            ctx
            for ctx in CONTEXTS
            if all(state.values[o.index] for o in ctx.members)
        ]
        if len(full) > 1:
            multi_context += 1
        has_context = bool(full)
        if parent_had_context and not has_context:
            persistence_broken += 1
        if depth == cfg.invariant_len:
            return
        for sym in ALPHABET:
            res = semantics.step(state, sym)
            if res.state is not None:
                walk(res.state, depth + 1, has_context)

    walk(semantics.EMPTY_STATE, 0, False)
    result.add(
        f"states stay well-formed over every consistent string up to length "
        f"{cfg.invariant_len}",
        malformed == 0,
        f"{nodes} states visited, {malformed} malformed",
    )
    result.add(
        "at most one context is ever determined",
        multi_context == 0,
        f"{multi_context} violations",
    )
    result.add(
        "a determined context persists under every consistent extension",
        persistence_broken == 0,
        f"{persistence_broken} violations",
    )

    rng = random.Random(cfg.seed + 1)
    prefix_bad = 0
    repeat_bad = 0
    for _ in range(cfg.random_strings):
        w = _random_string(rng, cfg.random_max_len)
        # maximal consistent prefix of a random string
        st = semantics.EMPTY_STATE
        good = 0
        for sym in w:
            res = semantics.step(st, sym)
            if res.state is None:
                break
            st = res.state
            good += 1
        prefix = w[:good]
        if not all(semantics.is_consistent(prefix[:k]) for k in range(good + 1)):
            prefix_bad += 1
        if prefix and not semantics.is_consistent(prefix + (prefix[-1],)):
            repeat_bad += 1
    result.add(
        f"prefixes of consistent strings are consistent ({cfg.random_strings} "
        "random strings)",
        prefix_bad == 0,
        f"{prefix_bad} violations",
    )
    result.add(
        "repeating the last measurement preserves consistency",
        repeat_bad == 0,
        f"{repeat_bad} violations",
    )
    return result


# ---------------------------------------------------------------- counting


def suite_counting(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("counting")
    dfa = minimal_dfa()

    # brute force through the operational rules only
    brute = [0] * 5
    def walk(state, depth):
        brute[depth] += 1
        if depth == 4:
            return
        for sym in ALPHABET:
            res = semantics.step(state, sym)
            if res.state is not None:
                walk(res.state, depth + 1)

    walk(semantics.EMPTY_STATE, 0)
    report = automata.count_words(dfa, cfg.count_max)
    result.add(
        "word counts at lengths 0..4 match brute-force enumeration",
        list(report.counts[:5]) == brute,
        f"dfa {list(report.counts[:5])} vs brute {brute}",
    )

    tail = [float(r) for r in report.growth_ratios[-100:]]
    spread = max(tail) - min(tail) if tail else float("inf")
    result.add(
        f"growth ratios converge at n_max={cfg.count_max}",
        spread < 1e-6,
        f"last-100 spread {spread:.3e}, estimate {report.dominant_rate_estimate}",
    )

    curve = automata.hv_bits(report)
    rate_bits = math.log2(report.dominant_rate_estimate)
    diffs = curve.first_differences()[50:200]
    window_ok = all(abs(d - rate_bits) <= 1.0 for d in diffs)
    result.add(
        "bit-curve increments sit within one bit of log2(growth rate) on "
        "lengths 50..200",
        curve.bits[0] == 0
        and all(b <= c for b, c in zip(curve.bits, curve.bits[1:]))
        and window_ok,
        f"increments {sorted(set(diffs))}, log2 rate {rate_bits:.4f}",
    )
    slope = curve.bits[200] / 200
    result.add(
        "memory for all strings up to length n grows linearly, at most "
        "log2(18) bits per step",
        0 < slope <= math.log2(18),
        f"bits(200)/200 = {slope:.4f}, log2(18) = {math.log2(18):.4f}",
    )
    return result


# ---------------------------------------------------------------- maga


def _context_triple(state) -> maga.ClassTriple | None:
    found = semantics.determined_context(state)
    if found is None:
        return None
    ctx, vals = found
    return maga.ClassTriple(ctx, vals[0], vals[1])


def suite_maga(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("maga")
    triples = maga.all_class_triples()
    reps = maga.representatives()
    result.add(
        "24 classes with distinct consistent representatives",
        len(set(reps)) == 24
        and all(semantics.is_consistent(r) for r in reps)
        and all(maga.classify(r) == t for r, t in zip(reps, triples)),
        f"{len(set(reps))} distinct representatives",
    )

    seen: set[maga.ClassTriple] = set()
    total = 0
    def walk(state, depth):
        nonlocal total
        t = _context_triple(state)
        if t is not None:
            seen.add(t)
            total += 1
        if depth == 3:
            return
        for sym in ALPHABET:
            res = semantics.step(state, sym)
            if res.state is not None:
                walk(res.state, depth + 1)

    walk(semantics.EMPTY_STATE, 0)
    result.add(
        "classification is total and onto the 24 classes (strings up to "
        "length 3)",
        seen == set(triples),
        f"{len(seen)} classes over {total} context-determining strings",
    )

    claim = maga.verify_disagreement_claim()
    result.add(
        "every one of the 276 representative pairs disagrees somewhere",
        claim.complete and claim.pair_count == 276,
        f"{len(claim.witnesses)} witnesses, {len(claim.missing)} missing",
    )

    verdict = maga.lower_bound_check(maga.reference_maga_plus())
    result.add(
        "the 24-state reference machine is certified by the pigeonhole check",
        verdict.certified and verdict.distinct_memory_states == 24,
        f"distinct memory states: {verdict.distinct_memory_states}",
    )

    refuted = 0
    merges = 0
    for i in range(24):
        for j in range(i + 1, 24):
            merges += 1
            v = maga.lower_bound_check(maga.merged_reference_maga(i, j))
            if not v.certified and v.counterexample is not None:
                refuted += 1
    result.add(
        "every 23-state merge of the reference machine is refuted with a "
        "concrete witness",
        refuted == merges == 276,
        f"{refuted}/{merges} merges refuted",
    )

    machine = maga.reference_maga_plus()
    nodes = 0
    wrong = 0
    spot_rng = random.Random(cfg.seed + 2)
    spot_checked = 0
    spot_wrong = 0

    def sweep(prefix, state, depth):
        nonlocal nodes, wrong, spot_checked, spot_wrong
        t = _context_triple(state)
        if t is not None:
            nodes += 1
            for obs in OBSERVABLES:
                expected = state.value_of(obs)
                got = machine.m1(t, obs)
                if got != (maga.RANDOM_OUTCOME if expected is None else expected):
                    wrong += 1
            if spot_rng.random() < 0.002:
                # exercise the real callables end to end on a sample
                spot_checked += 1
                for obs in OBSERVABLES:
                    if machine.output(prefix, obs) != maga.expected_output(
                        prefix, obs
                    ):
                        spot_wrong += 1
        if depth == cfg.maga_len:
            return
        for sym in ALPHABET:
            res = semantics.step(state, sym)
            if res.state is not None:
                sweep(prefix + (sym,), res.state, depth + 1)

    sweep((), semantics.EMPTY_STATE, 0)
    result.add(
        f"reference machine answers match the oracle on every "
        f"context-determining string up to length {cfg.maga_len}",
        wrong == 0 and spot_wrong == 0,
        f"{nodes} strings x 9 observables, {wrong} wrong; "
        f"{spot_checked} full-interface spot checks",
    )
    return result


# ---------------------------------------------------------------- adapter


def suite_adapter(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("adapter")
    dfa = minimal_dfa()
    recognizer = maga.mara_from_dfa(dfa)
    machine = maga.mara_to_maga(recognizer)
    result.add(
        "product machine has the squared recognizer state count",
        len(machine.memory_states) == len(recognizer.memory_states) ** 2,
        f"{len(recognizer.memory_states)}^2 = {len(machine.memory_states)}",
    )
    result.add(
        "recognizer state count is at least the square root of the "
        "24-state predictor bound",
        len(recognizer.memory_states) >= math.isqrt(24 - 1) + 1,
        f"{len(recognizer.memory_states)} >= {math.isqrt(24 - 1) + 1}",
    )

    nodes = 0
    wrong = 0

    def sweep(prefix, state, depth):
        nonlocal nodes, wrong
        nodes += 1
        for obs in OBSERVABLES:
            if machine.output(prefix, obs) != maga.expected_output(prefix, obs):
                wrong += 1
        if depth == cfg.exhaustive_len:
            return
        for sym in ALPHABET:
            res = semantics.step(state, sym)
            if res.state is not None:
                sweep(prefix + (sym,), res.state, depth + 1)

    sweep((), semantics.EMPTY_STATE, 0)
    result.add(
        f"adapter answers match the oracle on every consistent string up to "
        f"length {cfg.exhaustive_len}",
        wrong == 0,
        f"{nodes} strings x 9 observables, {wrong} wrong",
    )
    return result


# ---------------------------------------------------------------- bounds


def suite_bounds(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("bounds")
    expected = {1: 6, 2: 60, 3: 1080}
    got = {n: maga.scaling_report(n).lower_bound for n in expected}
    result.add(
        "lower bounds at 1..3 qubits are 6, 60, 1080",
        got == expected,
        f"{got}",
    )

    reports = [maga.scaling_report(n) for n in range(1, cfg.qubits_max + 1)]
    result.add(
        f"exact bound dominates its simplification for 1..{cfg.qubits_max} "
        "qubits",
        all(r.lower_bound >= r.simplified_bound for r in reports),
    )
    result.add(
        f"density stays above (n+3)/2 and above one bit per qubit for "
        f"1..{cfg.qubits_max} qubits",
        all(r.density >= r.density_floor and r.density > 1.0 for r in reports),
        f"density(1) = {reports[0].density:.4f}",
    )
    gaps = [r.density_gap for r in reports]
    result.add(
        "density gap to (n+3)/2 shrinks monotonically toward zero",
        all(a >= b - 1e-12 for a, b in zip(gaps, gaps[1:])) and gaps[-1] > 0,
        f"gap(1) = {gaps[0]:.4f}, gap({cfg.qubits_max}) = {gaps[-1]:.2e}",
    )
    result.add(
        "direct square bound and 2-qubit scaled bound reported side by side",
        maga.SQUARE_LOWER_BOUND == 24 and got[2] == 60,
        f"square: {maga.SQUARE_LOWER_BOUND}, scaled n=2: {got[2]} "
        "(different context counts; not reconciled)",
    )
    return result


# ---------------------------------------------------------------- quantum


def suite_quantum(cfg: VerifyConfig) -> SuiteResult:
    result = SuiteResult("quantum")
    table = quantum.standard_square()
    eye = np.eye(4)
    ops_ok = all(
        np.allclose(p.operator @ p.operator, eye, atol=quantum.TOLERANCE)
        for p in table.values()
    )
    ctx_ok = True
    for ctx in CONTEXTS:
        ops = [table[o].operator for o in ctx.members]
        prod = ops[0] @ ops[1] @ ops[2]
        if not np.allclose(prod, ctx.sign * eye, atol=quantum.TOLERANCE):
            ctx_ok = False
        for i in range(3):
            for j in range(i + 1, 3):
                if not np.allclose(
                    ops[i] @ ops[j], ops[j] @ ops[i], atol=quantum.TOLERANCE
                ):
                    ctx_ok = False
    result.add(
        "operators are involutions; contexts commute and multiply to the "
        "context sign",
        ops_ok and ctx_ok,
    )

    inconsistent = 0
    determined_checked = 0
    determined_wrong = 0
    for run in quantum.sample_many(
        cfg.quantum_runs, cfg.quantum_run_len, cfg.seed + 3
    ):
        state = semantics.EMPTY_STATE
        for sym in run:
            predicted = state.value_of(sym.obs)
            if predicted is not None:
                determined_checked += 1
                if predicted != sym.value:
                    determined_wrong += 1
            res = semantics.step(state, sym)
            if res.state is None:
                inconsistent += 1
                break
            state = res.state
    result.add(
        f"{cfg.quantum_runs} sampled runs of length {cfg.quantum_run_len} "
        "are all consistent",
        inconsistent == 0,
        f"{inconsistent} inconsistent runs",
    )
    result.add(
        "sampled values equal the determined values at every step",
        determined_wrong == 0,
        f"{determined_checked} determined predictions, {determined_wrong} wrong",
    )

    freq_ok = True
    details = []
    seqs = np.random.SeedSequence(cfg.seed + 4).spawn(len(OBSERVABLES))
    for obs, seq in zip(OBSERVABLES, seqs):
        rng = np.random.default_rng(seq)
        plus = 0
        for _ in range(cfg.quantum_trials):
            st = quantum.haar_random_state(rng)
            value, _ = quantum.measure(st, table[obs], rng)
            if value == 1:
                plus += 1
        freq = plus / cfg.quantum_trials
        if not (0.4 <= freq <= 0.6):
            freq_ok = False
            details.append(f"{obs.name}: {freq:.3f}")
    result.add(
        f"first-outcome frequencies lie in [0.4, 0.6] over "
        f"{cfg.quantum_trials} fresh random states per observable",
        freq_ok,
        "; ".join(details) if details else "all within bounds",
    )

    law_ok = True
    rng = np.random.default_rng(cfg.seed + 5)
    for ctx in CONTEXTS:
        for _ in range(200):
            st = quantum.haar_random_state(rng)
            prod = 1
            for obs in ctx.members:
                value, st = quantum.measure(st, table[obs], rng)
                prod *= value
            if prod != ctx.sign:
                law_ok = False
    result.add(
        "measuring a full context in sequence multiplies to the context sign",
        law_ok,
    )

    rng = np.random.default_rng(cfg.seed + 6)
    st = quantum.haar_random_state(rng)
    drift = 0.0
    for _ in range(1000):
        obs = OBSERVABLES[rng.integers(9)]
        _, st = quantum.measure(st, table[obs], rng)
        drift = max(drift, abs(st.norm() - 1.0))
    result.add(
        "normalization is preserved across 1000 chained measurements",
        drift <= quantum.TOLERANCE,
        f"max drift {drift:.2e}",
    )
    return result


SUITES = {
    "parity": suite_parity,
    "grammar": suite_grammar,
    "invariants": suite_invariants,
    "counting": suite_counting,
    "maga": suite_maga,
    "adapter": suite_adapter,
    "bounds": suite_bounds,
    "quantum": suite_quantum,
}


def run_suites(names: list[str], cfg: VerifyConfig) -> list[SuiteResult]:
    if names == ["all"]:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[name](cfg) for name in names]
