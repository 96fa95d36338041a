"""Tools for the measurement language of the Peres-Mermin square."""

from .square import (
    ALPHABET,
    CONTEXTS,
    OBSERVABLES,
    Context,
    Observable,
    SignedSymbol,
    SquareFilling,
    compatible,
    negative_context_count,
    parse_string,
    format_string,
    signed,
    third_value,
)
from .semantics import (
    DeterminationState,
    StepResult,
    agree,
    determined_context,
    initial_state,
    is_consistent,
    predicted_value,
    step,
    trace,
)
from .grammar import Grammar, Derivation, build_grammar, derive_membership, to_nfa
from .automata import (
    CountReport,
    Dfa,
    HvBitCurve,
    Nfa,
    count_words,
    determinize,
    hv_bits,
    minimize,
)
from .maga import (
    ClassTriple,
    MagaSpec,
    MaraSpec,
    ScalingReport,
    classify,
    lower_bound_check,
    mara_from_dfa,
    mara_to_maga,
    reference_maga_plus,
    representatives,
    scaling_report,
    verify_disagreement_claim,
)
from .quantum import QState, PauliObservable, measure, sample_run, standard_square

__version__ = "0.1.0"
