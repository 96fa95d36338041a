"""Right-linear grammar generating exactly the consistent measurement strings.

Generating symbols carry just enough history to know what a consistent
continuation looks like:

* the start symbol, before anything is measured;
* a single promise ``[X]``: X is emitted next and will then be the only
  determined observable;
* a pair ``[X Y]``: Y is emitted next, X is the other relevant recorded
  outcome, and emitting Y leaves the full context of X and Y determined.

Each rule emits at most one terminal.  The schemas mirror the possible
continuations of a history: stop, repeat the last measurement, re-measure
another member of the determined context, jump to an incompatible
observable with a fresh start, or begin a new context through any of the
three determined members.  Side conditions phrased negatively
("sharing no context") are at the observable level, because admitting a
same-observable symbol with the opposite outcome would generate strings
that clash on re-measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import automata
from .square import (
    ALPHABET,
    SignedSymbol,
    compatible,
    parse_string,
    shared_context,
    third_value,
)


@dataclass(frozen=True)
class GeneratingSymbol:
    """Start symbol, single promise, or pair of (prior, promised) symbols."""

    prior: SignedSymbol | None
    promised: SignedSymbol | None

    def __post_init__(self):
        if self.prior is not None:
            if self.promised is None:
                raise ValueError("a pair symbol needs a promised symbol")
            if self.prior is self.promised or not compatible(self.prior, self.promised):
                raise ValueError("pair symbols pair distinct compatible symbols")

    @property
    def is_start(self) -> bool:
        return self.promised is None

    @property
    def is_single(self) -> bool:
        return self.prior is None and self.promised is not None

    @property
    def is_pair(self) -> bool:
        return self.prior is not None

    @property
    def label(self) -> str:
        if self.is_start:
            return "[S]"
        if self.is_single:
            return f"[{self.promised.token}]"
        return f"[{self.prior.token} {self.promised.token}]"

    def __repr__(self) -> str:
        return f"GeneratingSymbol({self.label})"


START = GeneratingSymbol(None, None)


def single(x: SignedSymbol) -> GeneratingSymbol:
    return GeneratingSymbol(None, x)


def pair(x: SignedSymbol, y: SignedSymbol) -> GeneratingSymbol:
    return GeneratingSymbol(x, y)


@dataclass(frozen=True)
class Rule:
    """``lhs -> emitted rhs`` with either part optional; tagged by schema."""

    lhs: GeneratingSymbol
    emitted: SignedSymbol | None
    rhs: GeneratingSymbol | None
    schema: str

    def render(self) -> str:
        parts = [self.lhs.label, "->"]
        if self.emitted is not None:
            parts.append(self.emitted.token)
        if self.rhs is not None:
            parts.append(self.rhs.label)
        if self.emitted is None and self.rhs is None:
            parts.append("lambda")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Rule({self.render()})"


# Schema names in instantiation order.
SCHEMAS = (
    "empty-word",  # [S] -> lambda
    "first-symbol",  # [S] -> [X], no terminal emitted
    "single-stop",  # [X] -> X
    "single-repeat",  # [X] -> X [X]
    "single-switch",  # [X] -> X [Z], obs(Z) shares no context with obs(X)
    "single-extend",  # [X] -> X [X Y], Y compatible with X, different observable
    "pair-stop",  # [X Y] -> Y
    "pair-repeat",  # [X Y] -> Y [X Y]
    "pair-swap",  # [X Y] -> Y [Y X]
    "pair-branch-last",  # [X Y] -> Y [Y Z], Z compatible with Y, obs(Z) foreign to obs(X)
    "pair-third",  # [X Y] -> Y [Y T], T the context-completion value of X and Y
    "pair-branch-third",  # [X Y] -> Y [T U], U compatible with T, obs(U) foreign to X and Y
    "pair-branch-prior",  # [X Y] -> Y [X W], W compatible with X, obs(W) foreign to obs(Y)
)


@dataclass
class Grammar:
    symbols: tuple[GeneratingSymbol, ...]
    rules: tuple[Rule, ...]
    start: GeneratingSymbol

    def __post_init__(self):
        # emit_index[lhs][terminal] lists emitting rules in canonical order
        self.emit_index: dict[
            GeneratingSymbol, dict[SignedSymbol, list[Rule]]
        ] = {}
        self.epsilon_rules: list[Rule] = []
        self.has_empty_rule = False
        for rule in self.rules:
            if rule.emitted is None:
                if rule.rhs is None:
                    self.has_empty_rule = True
                else:
                    self.epsilon_rules.append(rule)
                continue
            self.emit_index.setdefault(rule.lhs, {}).setdefault(
                rule.emitted, []
            ).append(rule)

    def rules_with_schema(self, schema: str) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.schema == schema)

    def dump_lines(self) -> list[str]:
        return [rule.render() for rule in self.rules]


def _foreign(x: SignedSymbol, z: SignedSymbol) -> bool:
    """Observable-level incompatibility: distinct cells sharing no line."""
    return x.obs is not z.obs and shared_context(x.obs, z.obs) is None


def _compatible_partner(x: SignedSymbol, y: SignedSymbol) -> bool:
    """Compatible symbols on distinct observables."""
    return x.obs is not y.obs and compatible(x, y)


@lru_cache(maxsize=None)
def build_grammar() -> Grammar:
    """Instantiate every schema over the 18-symbol alphabet.

    Deterministic: symbols and rules come out in canonical alphabet
    order, schema by schema.
    """
    singles = [single(x) for x in ALPHABET]
    pairs = [
        pair(x, y) for x in ALPHABET for y in ALPHABET if _compatible_partner(x, y)
    ]
    symbols = (START, *singles, *pairs)

    rules: list[Rule] = [Rule(START, None, None, "empty-word")]
    rules += [Rule(START, None, single(x), "first-symbol") for x in ALPHABET]
    for x in ALPHABET:
        xs = single(x)
        rules.append(Rule(xs, x, None, "single-stop"))
        rules.append(Rule(xs, x, xs, "single-repeat"))
        rules += [
            Rule(xs, x, single(z), "single-switch") for z in ALPHABET if _foreign(x, z)
        ]
        rules += [
            Rule(xs, x, pair(x, y), "single-extend")
            for y in ALPHABET
            if _compatible_partner(x, y)
        ]
    for p in pairs:
        x, y = p.prior, p.promised
        t = third_value(x, y)
        rules.append(Rule(p, y, None, "pair-stop"))
        rules.append(Rule(p, y, p, "pair-repeat"))
        rules.append(Rule(p, y, pair(y, x), "pair-swap"))
        rules += [
            Rule(p, y, pair(y, z), "pair-branch-last")
            for z in ALPHABET
            if _compatible_partner(y, z) and _foreign(x, z)
        ]
        rules.append(Rule(p, y, pair(y, t), "pair-third"))
        rules += [
            Rule(p, y, pair(t, u), "pair-branch-third")
            for u in ALPHABET
            if _compatible_partner(t, u) and _foreign(x, u) and _foreign(y, u)
        ]
        rules += [
            Rule(p, y, pair(x, w), "pair-branch-prior")
            for w in ALPHABET
            if _compatible_partner(x, w) and _foreign(y, w)
        ]
    return Grammar(symbols, tuple(rules), START)


@dataclass(frozen=True)
class DerivationStep:
    """One rule application and the sentential form it produced."""

    rule: Rule
    emitted_prefix: tuple[SignedSymbol, ...]
    tail: GeneratingSymbol | None

    def form(self) -> str:
        tokens = [s.token for s in self.emitted_prefix]
        if self.tail is not None:
            tokens.append(self.tail.label)
        return " ".join(tokens) if tokens else "lambda"


@dataclass(frozen=True)
class Derivation:
    steps: tuple[DerivationStep, ...]

    def terminal_counts(self) -> tuple[int, ...]:
        return tuple(len(s.emitted_prefix) for s in self.steps)

    def derived_string(self) -> tuple[SignedSymbol, ...]:
        return self.steps[-1].emitted_prefix


def derive_membership(
    w: str | Iterable[SignedSymbol], grammar: Grammar | None = None
) -> Derivation | None:
    """A witness derivation of ``w``, or None when no derivation exists.

    Forward search over the rule graph with one back-pointer per
    (position, symbol); rules are explored in canonical order, so the
    returned witness is deterministic.
    """
    g = grammar or build_grammar()
    symbols = parse_string(w) if isinstance(w, str) else tuple(w)
    if not symbols:
        if not g.has_empty_rule:
            return None
        rule = next(r for r in g.rules if r.emitted is None and r.rhs is None)
        return Derivation((DerivationStep(rule, (), None),))

    # layer 0: generating symbols reachable before emitting anything
    first: dict[GeneratingSymbol, Rule] = {}
    for rule in g.epsilon_rules:
        first.setdefault(rule.rhs, rule)
    layers: list[dict[GeneratingSymbol, tuple[GeneratingSymbol | None, Rule]]] = [
        {sym: (None, rule) for sym, rule in first.items()}
    ]
    for tok in symbols[:-1]:
        cur = layers[-1]
        nxt: dict[GeneratingSymbol, tuple[GeneratingSymbol | None, Rule]] = {}
        for sym in cur:
            for rule in g.emit_index.get(sym, {}).get(tok, ()):
                if rule.rhs is not None and rule.rhs not in nxt:
                    nxt[rule.rhs] = (sym, rule)
        if not nxt:
            return None
        layers.append(nxt)

    last_tok = symbols[-1]
    stop: tuple[GeneratingSymbol, Rule] | None = None
    for sym in layers[-1]:
        for rule in g.emit_index.get(sym, {}).get(last_tok, ()):
            if rule.rhs is None:
                stop = (sym, rule)
                break
        if stop:
            break
    if stop is None:
        return None

    # backtrack: one symbol per layer, then replay forward
    chain: list[tuple[GeneratingSymbol | None, Rule]] = []
    sym: GeneratingSymbol | None = stop[0]
    for layer in reversed(layers):
        prev, rule = layer[sym]
        chain.append((prev, rule))
        sym = prev
    chain.reverse()

    steps: list[DerivationStep] = []
    eps_rule = chain[0][1]
    steps.append(DerivationStep(eps_rule, (), eps_rule.rhs))
    for i, (_, rule) in enumerate(chain[1:], start=1):
        steps.append(DerivationStep(rule, symbols[:i], rule.rhs))
    steps.append(DerivationStep(stop[1], symbols, None))
    return Derivation(tuple(steps))


ACCEPT = "ACCEPT"


def to_nfa(grammar: Grammar | None = None) -> automata.Nfa:
    """The automaton whose states are the generating symbols plus one
    accept state; one transition per emitting rule.

    The non-emitting start rules are folded away by copying the target
    symbol's outgoing transitions onto the start state, which preserves
    the language because those rules only ever leave the start symbol.
    """
    g = grammar or build_grammar()
    transitions: set[tuple[object, SignedSymbol, object]] = set()
    for rule in g.rules:
        if rule.emitted is None:
            continue
        target = rule.rhs if rule.rhs is not None else ACCEPT
        transitions.add((rule.lhs, rule.emitted, target))
    for eps in g.epsilon_rules:
        for sym_rules in g.emit_index.get(eps.rhs, {}).values():
            for rule in sym_rules:
                target = rule.rhs if rule.rhs is not None else ACCEPT
                transitions.add((g.start, rule.emitted, target))
    accepting = {ACCEPT}
    if g.has_empty_rule:
        accepting.add(g.start)
    return automata.Nfa(
        states=frozenset(g.symbols) | {ACCEPT},
        alphabet=ALPHABET,
        transitions=frozenset(transitions),
        start=g.start,
        accepting=frozenset(accepting),
    )
