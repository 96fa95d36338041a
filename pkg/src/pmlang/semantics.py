"""Operational rules for sequential measurements on the square.

A measurement history is summarised by the set of currently determined
observables and their values.  Three rules drive the evolution:

* direct measurement: the measured observable becomes determined with
  the observed value; re-measuring a determined observable must repeat
  its current value, otherwise the history is inconsistent;
* disturbance: a determined observable that shares no context with the
  newly measured one loses its value;
* context completion: when two members of a context hold values, the
  third is forced so the product matches the context sign.

After any consistent history the determined set is empty, a single
observable, or exactly one full context.  That small state space is
what the rest of the package (grammar, automata, memory bounds, the
quantum cross-check) is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .square import (
    ALPHABET,
    CONTEXTS,
    OBSERVABLES,
    Context,
    Observable,
    SignedSymbol,
    parse_string,
)

# Per-observable geometry, indexed by Observable.index.
_COMPATIBLE_IDX: tuple[frozenset[int], ...] = tuple(
    frozenset(
        o.index
        for o in OBSERVABLES
        if o is not me and (o.row == me.row or o.col == me.col)
    )
    for me in OBSERVABLES
)
_CONTEXTS_IDX: tuple[tuple[tuple[tuple[int, int, int], int], ...], ...] = tuple(
    tuple(
        (tuple(m.index for m in ctx.members), ctx.sign)
        for ctx in CONTEXTS
        if me in ctx.members
    )
    for me in OBSERVABLES
)


@dataclass(frozen=True)
class DeterminationState:
    """Immutable snapshot of the determined map; 0 marks undetermined."""

    values: tuple[int, ...]

    def value_of(self, obs: Observable) -> int | None:
        v = self.values[obs.index]
        return v if v else None

    @property
    def determined(self) -> dict[Observable, int]:
        return {o: v for o, v in zip(OBSERVABLES, self.values) if v}

    @property
    def is_empty(self) -> bool:
        return not any(self.values)

    def describe(self) -> str:
        if self.is_empty:
            return "(none)"
        return " ".join(
            f"{o.name}={v:+d}" for o, v in zip(OBSERVABLES, self.values) if v
        )


_STATES: dict[tuple[int, ...], DeterminationState] = {}


def _state(values: tuple[int, ...]) -> DeterminationState:
    try:
        return _STATES[values]
    except KeyError:
        st = DeterminationState(values)
        _STATES[values] = st
        return st


EMPTY_STATE = _state((0,) * 9)


def initial_state() -> DeterminationState:
    """The state before any measurement: everything undetermined."""
    return EMPTY_STATE


@dataclass(frozen=True)
class StepResult:
    """Verdict of one measurement: the successor state, or a clash."""

    state: DeterminationState | None

    @property
    def consistent(self) -> bool:
        return self.state is not None


INCONSISTENT = StepResult(None)


@lru_cache(maxsize=None)
def step(state: DeterminationState, measurement: SignedSymbol) -> StepResult:
    """Apply one measurement to a state.

    A clash (the measured observable already holds the opposite value)
    is reported as a verdict, not an exception.  Otherwise incompatible
    observables are dropped, the measurement is recorded, and at most
    one context completion fires; with the determined set never larger
    than one context, a single completion pass is always enough.
    """
    idx = measurement.obs.index
    val = measurement.value
    cur = state.values[idx]
    if cur and cur != val:
        return INCONSISTENT
    new = list(state.values)
    compat = _COMPATIBLE_IDX[idx]
    for j in range(9):
        if new[j] and j != idx and j not in compat:
            new[j] = 0
    new[idx] = val
    for members, sign in _CONTEXTS_IDX[idx]:
        a, b, c = members
        va, vb, vc = new[a], new[b], new[c]
        missing = (va == 0) + (vb == 0) + (vc == 0)
        if missing == 1:
            if va == 0:
                new[a] = sign * vb * vc
            elif vb == 0:
                new[b] = sign * va * vc
            else:
                new[c] = sign * va * vb
    return StepResult(_state(tuple(new)))


def _coerce(w: str | Iterable[SignedSymbol]) -> tuple[SignedSymbol, ...]:
    if isinstance(w, str):
        return parse_string(w)
    return tuple(w)


def final_state(w: str | Iterable[SignedSymbol]) -> DeterminationState | None:
    """Fold a string through ``step``; None when some measurement clashes."""
    st = EMPTY_STATE
    for sym in _coerce(w):
        res = step(st, sym)
        if res.state is None:
            return None
        st = res.state
    return st


def is_consistent(w: str | Iterable[SignedSymbol]) -> bool:
    return final_state(w) is not None


@dataclass(frozen=True)
class Trace:
    """Step-by-step record of a run, for reporting and the CLI table."""

    symbols: tuple[SignedSymbol, ...]
    states: tuple[DeterminationState, ...]  # after each consistent step
    failed_at: int | None  # 0-based index of the clashing symbol

    @property
    def consistent(self) -> bool:
        return self.failed_at is None

    @property
    def final(self) -> DeterminationState | None:
        if self.failed_at is not None:
            return None
        return self.states[-1] if self.states else EMPTY_STATE


def trace(w: str | Iterable[SignedSymbol]) -> Trace:
    symbols = _coerce(w)
    states = []
    st = EMPTY_STATE
    for i, sym in enumerate(symbols):
        res = step(st, sym)
        if res.state is None:
            return Trace(symbols, tuple(states), i)
        st = res.state
        states.append(st)
    return Trace(symbols, tuple(states), None)


def predicted_value(state: DeterminationState, obs: Observable) -> int | None:
    """The value the history forces on ``obs``, or None when undetermined."""
    return state.value_of(obs)


@lru_cache(maxsize=None)
def determined_context(
    state: DeterminationState,
) -> tuple[Context, tuple[int, int, int]] | None:
    """The unique fully determined context, if the state holds one."""
    for ctx in CONTEXTS:
        vals = tuple(state.values[o.index] for o in ctx.members)
        if all(vals):
            return ctx, vals
    return None


def agree(
    u: str | Iterable[SignedSymbol],
    v: str | Iterable[SignedSymbol],
    obs: Observable,
) -> bool:
    """Whether two consistent strings leave ``obs`` in the same condition.

    True when both leave it undetermined or both determine it with the
    same value.  Inconsistent input is a caller error.
    """
    su = final_state(u)
    sv = final_state(v)
    if su is None or sv is None:
        raise ValueError("agree requires consistent strings")
    return su.value_of(obs) == sv.value_of(obs)


@lru_cache(maxsize=None)
def consistent_continuations(state: DeterminationState) -> tuple[SignedSymbol, ...]:
    """The symbols that extend a state without a clash, in canonical order."""
    return tuple(sym for sym in ALPHABET if step(state, sym).state is not None)


def reachable_states() -> tuple[DeterminationState, ...]:
    """Every state reachable from the empty history, in BFS order."""
    seen = {EMPTY_STATE: None}
    queue = [EMPTY_STATE]
    while queue:
        st = queue.pop(0)
        for sym in ALPHABET:
            res = step(st, sym)
            if res.state is not None and res.state not in seen:
                seen[res.state] = None
                queue.append(res.state)
    return tuple(seen)


def iter_consistent_strings(
    max_len: int,
) -> Iterator[tuple[tuple[SignedSymbol, ...], DeterminationState]]:
    """Depth-first walk of all consistent strings up to ``max_len``.

    Yields each string with its final state, the empty string included.
    """

    def walk(prefix: tuple[SignedSymbol, ...], state: DeterminationState):
        yield prefix, state
        if len(prefix) == max_len:
            return
        for sym in ALPHABET:
            res = step(state, sym)
            if res.state is not None:
                yield from walk(prefix + (sym,), res.state)

    yield from walk((), EMPTY_STATE)


def state_is_well_formed(state: DeterminationState) -> bool:
    """Structural invariant: the domain is empty, a singleton, or one
    full context whose values multiply to the context sign."""
    det = [i for i, v in enumerate(state.values) if v]
    if len(det) == 0 or len(det) == 1:
        return True
    if len(det) != 3:
        return False
    full = None
    for ctx in CONTEXTS:
        idxs = [o.index for o in ctx.members]
        if all(state.values[i] for i in idxs):
            if full is not None:
                return False
            full = ctx
    if full is None or sorted(o.index for o in full.members) != sorted(det):
        return False
    prod = 1
    for o in full.members:
        prod *= state.values[o.index]
    return prod == full.sign
