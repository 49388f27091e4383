"""Exact defender-commitment and maximin solvers.

Both solvers exploit the coverage form of the game: for a fixed attacked
target the subproblem is one-dimensional and monotone, so plain bisection
replaces a general LP. The commitment solver is vectorized over attacker
types so large type sets (and large sampling suites) solve in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AttackerType,
    Coverage,
    GameInstance,
    attacker_utilities,
    defender_utilities,
)

_FEAS_EPS = 1e-12
_DEFAULT_CTOL = 1e-13
_MAX_ITERS = 100
_BATCH_CHUNK = 200


@dataclass(frozen=True)
class SseResult:
    """Optimal commitment against one attacker type, ties favoring the defender."""

    coverage: Coverage
    target: int
    def_value: float
    atk_value: float


@dataclass(frozen=True)
class MaximinResult:
    coverage: Coverage
    value: float
    fully_mixed: bool


def _sse_batch_chunk(game: GameInstance, R: np.ndarray, P: np.ndarray, ctol: float):
    """Solve the commitment problem for a (k, n) block of attacker types.

    For candidate attacked target t, bisect on c_t in [0, 1]: with
    v = u^a(c_t, t), the cheapest coverage keeping t a best response is
    c_i = clip((r_i - v) / (r_i - p_i), 0, 1); c_t is feasible when the
    required total fits the budget and no other target forces v < p_i.
    """
    k, n = R.shape
    W = R - P  # > 0 by the type invariant
    rd = game.def_rewards
    pd = game.def_penalties
    m = float(game.m)

    # max_{i != t} p_i: if u^a(c_t, t) drops below it, no feasible completion.
    diag = np.arange(n)
    P_rep = np.broadcast_to(P[:, None, :], (k, n, n)).copy()
    P_rep[:, diag, diag] = -np.inf
    maxp_other = P_rep.max(axis=2)  # (k, n) indexed [type, candidate]
    Rb = R[:, None, :]
    Wb = W[:, None, :]

    def feasible(ct):
        v = R - ct * W  # u^a(c_t, t) per candidate
        req = (Rb - v[:, :, None]) / Wb
        np.maximum(req, 0.0, out=req)
        np.minimum(req, 1.0, out=req)
        req[:, diag, diag] = ct
        return (req.sum(axis=2) <= m + _FEAS_EPS) & (v >= maxp_other - _FEAS_EPS)

    valid = feasible(np.zeros((k, n)))
    lo = np.zeros((k, n))
    hi = np.ones((k, n))
    at_one = feasible(hi) & valid
    lo[at_one] = 1.0

    # the bracket halves every iteration, so the count is fixed by ctol
    iters = min(_MAX_ITERS, int(np.ceil(-np.log2(max(ctol, 2.0 ** -_MAX_ITERS)))))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        ok = feasible(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)

    ct = np.where(valid, lo, 0.0)
    dval = ct * rd + (1.0 - ct) * pd
    dval = np.where(valid, dval, -np.inf)
    best_t = dval.argmax(axis=1)  # first max: defender-favorable, then lowest index

    rows = np.arange(k)
    ct_star = ct[rows, best_t]
    v_star = R[rows, best_t] - ct_star * W[rows, best_t]
    cov = np.clip((R - v_star[:, None]) / W, 0.0, 1.0)
    cov[rows, best_t] = ct_star
    return cov, best_t, dval[rows, best_t], v_star


def sse_batch(game: GameInstance, atk_rewards: np.ndarray, atk_penalties: np.ndarray,
              ctol: float = _DEFAULT_CTOL):
    """Optimal commitments against many attacker types at once.

    `atk_rewards` / `atk_penalties` are (k, n) arrays, one row per type.
    Returns (coverages (k, n), targets (k,), def_values (k,), atk_values (k,)).
    `ctol` bounds the bisection interval on the attacked target's coverage.
    """
    R = np.asarray(atk_rewards, dtype=np.float64)
    P = np.asarray(atk_penalties, dtype=np.float64)
    k = R.shape[0]
    covs = np.empty_like(R)
    tgts = np.empty(k, dtype=np.int64)
    dvals = np.empty(k)
    avals = np.empty(k)
    for s in range(0, k, _BATCH_CHUNK):
        e = min(s + _BATCH_CHUNK, k)
        covs[s:e], tgts[s:e], dvals[s:e], avals[s:e] = _sse_batch_chunk(
            game, R[s:e], P[s:e], ctol)
    return covs, tgts, dvals, avals


def solve_sse(game: GameInstance, theta: AttackerType, tol: float = 1e-10) -> SseResult:
    """Defender-optimal commitment against attacker type `theta`.

    `tol` caps the bisection interval on the attacked target's coverage; the
    defender value is then accurate to within tol * max_i (r_i^d - p_i^d).
    """
    ctol = tol
    cov, tgt, dval, aval = sse_batch(game, theta.atk_rewards[None, :],
                                     theta.atk_penalties[None, :], ctol=ctol)
    return SseResult(Coverage(cov[0]), int(tgt[0]), float(dval[0]), float(aval[0]))


def sse_for_types(game: GameInstance, types, ctol: float = _DEFAULT_CTOL):
    """List of SseResult, one per type in a TypeSet."""
    covs, tgts, dvals, avals = sse_batch(game, types.rewards_matrix(),
                                         types.penalties_matrix(), ctol=ctol)
    return [SseResult(Coverage(covs[j]), int(tgts[j]), float(dvals[j]), float(avals[j]))
            for j in range(len(types))]


def maximin_feasible(game: GameInstance, value: float) -> bool:
    """Whether the defender can guarantee `value` on every target within budget."""
    if value > float(game.def_rewards.min()) + _FEAS_EPS:
        return False
    c = np.maximum(0.0, (value - game.def_penalties) / (game.def_rewards - game.def_penalties))
    return float(c.sum()) <= game.m + _FEAS_EPS


def maximin(game: GameInstance, tol: float = 1e-10, bracket=None) -> MaximinResult:
    """Coverage maximizing the defender's worst-case utility over targets.

    Bisection on the guaranteed value u: the cheapest coverage with
    u^d(c_i, i) >= u for every i is c_i(u) = max(0, (u - p_i^d) / (r_i^d - p_i^d)),
    and feasibility of u is monotone decreasing. `bracket` overrides the
    search interval (used to probe solution uniqueness).
    """
    ctol = min(tol, _DEFAULT_CTOL)
    if bracket is None:
        lo = float(game.def_penalties.min())
        hi = float(game.def_rewards.min())
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        hi = min(hi, float(game.def_rewards.min()))
        lo = max(lo, float(game.def_penalties.min()))
    if maximin_feasible(game, hi):
        lo = hi
    else:
        for _ in range(_MAX_ITERS):
            if hi - lo < ctol * max(1.0, abs(lo), abs(hi)):
                break
            mid = 0.5 * (lo + hi)
            if maximin_feasible(game, mid):
                lo = mid
            else:
                hi = mid
    cov = np.maximum(0.0, (lo - game.def_penalties) / (game.def_rewards - game.def_penalties))
    cov = np.minimum(cov, 1.0)
    value = float(defender_utilities(game, cov).min())
    fully_mixed = bool(np.all(cov > 1e-9) and np.all(cov < 1 - 1e-9))
    return MaximinResult(Coverage(cov), value, fully_mixed)
