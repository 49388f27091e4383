"""Security-game commitment solvers, attacker manipulation, and robust policies."""

from .core import (
    AttackerType,
    Coverage,
    DegenerateSseValue,
    GameInstance,
    NegativePayoffs,
    NotFullyMixed,
    Outcome,
    SsgError,
    TIE_TOL,
    TypeSet,
    ValidationError,
    attacker_utilities,
    attacker_utility,
    best_responses,
    defender_utilities,
    defender_utility,
    induced_response,
    load_instance,
    save_instance,
    shift_nonnegative,
    zero_sum_type,
)
from .gen import GenConfig, generate_instance
from .manipulation import (
    ManipulationReport,
    best_report_in_set,
    optimal_report,
    outcome_values,
    report_zero_sum,
)
from .policy import (
    EopReport,
    Policy,
    StochasticOutcome,
    algorithm1,
    eop,
    load_policy,
    max_eop_policy,
    qr_eop,
    qr_outcome,
    qr_policy,
    save_policy,
    sse_policy,
    validate_policy,
)
from .solvers import (
    MaximinResult,
    SseResult,
    maximin,
    solve_sse,
    sse_batch,
    sse_for_types,
)

__version__ = "0.1.0"
