"""The attacker side: fake-type reports against a credulous defender.

A defender who always plays the learned optimal commitment can be steered
into her maximin strategy by a fabricated attacker type; the constructions
here build that optimal fake report and evaluate arbitrary reports against
a committed policy table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AttackerType,
    Coverage,
    GameInstance,
    NotFullyMixed,
    Outcome,
    TIE_TOL,
    ValidationError,
    attacker_utilities,
    attacker_utility,
    best_responses,
    defender_utilities,
    defender_utility,
    zero_sum_type,
)
from .solvers import maximin, solve_sse


@dataclass(frozen=True)
class ManipulationReport:
    fake_type: AttackerType
    induced: Outcome
    atk_true_value: float
    truthful_atk_value: float
    truthful_def_value: float
    manip_def_value: float


def _finish_report(game, true_type, fake_type, z, t) -> ManipulationReport:
    truthful = solve_sse(game, true_type)
    return ManipulationReport(
        fake_type=fake_type,
        induced=Outcome(Coverage(z), int(t)),
        atk_true_value=attacker_utility(true_type, z, t),
        truthful_atk_value=truthful.atk_value,
        truthful_def_value=truthful.def_value,
        manip_def_value=defender_utility(game, z, t),
    )


def optimal_report(game: GameInstance, true_type: AttackerType,
                   tie_tol: float = TIE_TOL) -> ManipulationReport:
    """Best fake type for `true_type` against a defender who plays learned commitments.

    The induced coverage z raises every target exactly to the maximin value:
    z_i = max(0, (u_bar - p_i^d) / (r_i^d - p_i^d)). The reported type is
    zero-sum on every target except the attacked one, whose reward is lifted
    to -min(p_t^d, u_bar) so the attacked target stays a best response.
    """
    mm = maximin(game)
    ubar = mm.value
    z = np.maximum(0.0, (ubar - game.def_penalties) / (game.def_rewards - game.def_penalties))
    z = np.minimum(z, 1.0)

    # t in BR_theta(z): the attacker is indifferent among its ties, so break
    # them as the defender would (value at z, then index).
    br = best_responses(true_type, z, tie_tol)
    dvals = defender_utilities(game, z)
    t = max(br, key=lambda i: (dvals[i], -i))

    rewards = -game.def_penalties.copy()
    rewards[t] = -min(float(game.def_penalties[t]), ubar)
    penalties = -game.def_rewards.copy()
    fake = AttackerType(rewards, penalties)
    return _finish_report(game, true_type, fake, z, t)


def report_zero_sum(game: GameInstance, true_type: AttackerType,
                    tie_tol: float = TIE_TOL) -> ManipulationReport:
    """Report the zero-sum type; valid only under a fully mixed maximin strategy.

    With a fully mixed maximin coverage the induced commitment is unique, so
    the zero-sum report is guaranteed optimal; otherwise raise rather than
    silently fall back.
    """
    mm = maximin(game)
    if not mm.fully_mixed:
        raise NotFullyMixed(
            "maximin strategy is not fully mixed; the zero-sum report carries no guarantee")
    beta = zero_sum_type(game)
    cbar = mm.coverage.probs
    zs_br = best_responses(beta, cbar, tie_tol)
    true_u = attacker_utilities(true_type, cbar)
    dvals = defender_utilities(game, cbar)
    # Attacker picks his best target within the fake type's tie set; among his
    # own ties the defender-favorable one is induced.
    best_u = max(true_u[i] for i in zs_br)
    tied = [i for i in zs_br if true_u[i] >= best_u - tie_tol]
    t = max(tied, key=lambda i: (dvals[i], -i))
    return _finish_report(game, true_type, beta, cbar, t)


def outcome_values(game: GameInstance, entry, true_type: AttackerType):
    """(attacker, defender) expected utilities of a policy entry for `true_type`.

    `entry` is either an Outcome or any object with `coverage`, `support`
    and `probs` attributes (a stochastic outcome).
    """
    if isinstance(entry, Outcome):
        c = entry.coverage.probs
        i = entry.target
        return attacker_utility(true_type, c, i), defender_utility(game, c, i)
    c = entry.coverage.probs
    support = np.asarray(entry.support, dtype=int)
    probs = np.asarray(entry.probs, dtype=float)
    au = attacker_utilities(true_type, c)[support]
    du = defender_utilities(game, c)[support]
    return float(probs @ au), float(probs @ du)


def best_report_in_set(game: GameInstance, outcomes, true_type: AttackerType,
                       tie_tol: float = TIE_TOL):
    """Scan a policy table for the report maximizing the true type's utility.

    Ties within `tie_tol` on attacker utility go to the defender-best
    outcome, remaining ties to the lowest report index. Returns
    (report_index, attacker_value, defender_value).
    """
    entries = list(outcomes)
    if not entries:
        raise ValidationError("empty type set")
    vals = [outcome_values(game, e, true_type) for e in entries]
    best_a = max(a for a, _ in vals)
    tied = [j for j, (a, _) in enumerate(vals) if a >= best_a - tie_tol]
    idx = max(tied, key=lambda j: (vals[j][1], -j))
    return idx, vals[idx][0], vals[idx][1]
