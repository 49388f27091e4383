"""Shared fixtures: hand-built games, random samplers, brute-force oracles."""

import numpy as np

from ssgpolicy.core import (
    AttackerType,
    Coverage,
    GameInstance,
    Outcome,
    TypeSet,
    best_responses,
    shift_nonnegative,
)
from ssgpolicy.policy import Policy


def two_target_game():
    """One guard, two equally valued targets."""
    return GameInstance(2, 1, [0.0, 0.0], [-1.0, -1.0])


def two_target_type():
    return AttackerType([3.0, 1.0], [0.0, 0.0])


def shifted_two_type():
    """Shifted two-target game with the true type and its zero-sum type."""
    from ssgpolicy.core import zero_sum_type
    game, _ = shift_nonnegative(two_target_game())
    types = TypeSet((two_target_type(), zero_sum_type(game)))
    return game, types


def random_game(rng, n, m, nonneg=False):
    rd = 1.0 - rng.random(n)           # (0, 1]
    pd = -(1.0 - rng.random(n))        # [-1, 0)
    g = GameInstance(n, m, rd, pd)
    if nonneg:
        g, _ = shift_nonnegative(g)
    return g


def random_type(rng, n):
    return AttackerType(1.0 - rng.random(n), -(1.0 - rng.random(n)))


def random_coverage(rng, n, m):
    """Uniformly messy feasible coverage: scale a raw draw into the budget."""
    c = rng.random(n) * rng.random()
    total = c.sum()
    if total > m:
        c *= m / total * rng.random()
    return Coverage(np.minimum(c, 1.0))


def random_feasible_policy(rng, game, types):
    """Random coverages with induced targets drawn from the BR sets."""
    outs = []
    for theta in types:
        cov = random_coverage(rng, game.n, game.m)
        br = best_responses(theta, cov.probs)
        outs.append(Outcome(cov, int(rng.choice(br))))
    return Policy(tuple(outs))


def grid_sse_n2(game, theta, step=1e-3):
    """Joint grid enumeration of the commitment problem for n=2, m=1."""
    assert game.n == 2 and game.m == 1
    g = np.arange(0.0, 1.0 + step / 2, step)
    c1, c2 = np.meshgrid(g, g, indexing="ij")
    feas = c1 + c2 <= game.m + 1e-12
    u1 = (1 - c1) * theta.atk_rewards[0] + c1 * theta.atk_penalties[0]
    u2 = (1 - c2) * theta.atk_rewards[1] + c2 * theta.atk_penalties[1]
    d1 = c1 * game.def_rewards[0] + (1 - c1) * game.def_penalties[0]
    d2 = c2 * game.def_rewards[1] + (1 - c2) * game.def_penalties[1]
    amax = np.maximum(u1, u2)
    # defender-favorable tie-break on the attacker's argmax
    dval = np.where(u1 >= amax - 1e-12, d1, -np.inf)
    dval = np.maximum(dval, np.where(u2 >= amax - 1e-12, d2, -np.inf))
    return float(dval[feas].max())


def grid_sse_per_target(game, theta, step=1e-3):
    """Per-target enumeration: for each candidate attacked target, sweep its
    coverage on a grid and fill the other targets at their cheapest levels
    keeping the candidate a best response."""
    n, m = game.n, game.m
    r, p = theta.atk_rewards, theta.atk_penalties
    grid = np.arange(0.0, 1.0 + step / 2, step)
    best = -np.inf
    for t in range(n):
        v = (1 - grid) * r[t] + grid * p[t]
        others = [i for i in range(n) if i != t]
        req = np.zeros_like(grid)
        ok = np.ones_like(grid, dtype=bool)
        for i in others:
            ok &= v >= p[i] - 1e-12
            req += np.clip((r[i] - v) / (r[i] - p[i]), 0.0, 1.0)
        ok &= grid + req <= m + 1e-9
        if not ok.any():
            continue
        ct = grid[ok].max()
        best = max(best, ct * game.def_rewards[t] + (1 - ct) * game.def_penalties[t])
    return float(best)


def grid_maximin(game, step=1e-4):
    """Grid check of the worst-case-optimal value for n=2, m=1 games that
    spend the whole budget on the diagonal c2 = 1 - c1."""
    g = np.arange(0.0, 1.0 + step / 2, step)
    d1 = g * game.def_rewards[0] + (1 - g) * game.def_penalties[0]
    d2 = (1 - g) * game.def_rewards[1] + g * game.def_penalties[1]
    return float(np.minimum(d1, d2).max())
