"""Game model: instances, attacker types, coverage vectors and utilities.

A security game allocates m resources over n targets. The defender commits
to a coverage vector c (per-target protection probabilities); the attacker
picks one target. All other modules speak the vocabulary defined here.

Targets are 0-indexed internally and 1-indexed in files and CLI output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

#: Absolute tolerance used for best-response ties.
TIE_TOL = 1e-9

#: Slack allowed on coverage bounds (0 <= c_i <= 1, sum c_i <= m).
COV_TOL = 1e-9


class SsgError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(SsgError):
    """Input data violates a model invariant."""


class NotFullyMixed(SsgError):
    """The maximin strategy is not fully mixed, so the zero-sum-report
    shortcut does not come with a uniqueness guarantee."""


class NegativePayoffs(SsgError):
    """Defender payoffs must be non-negative for efficiency ratios."""


class DegenerateSseValue(SsgError):
    """A truthful-play defender value is ~0; the efficiency ratio is undefined."""


def _as_vector(x, n: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (n,):
        raise ValidationError(f"{name} must have length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GameInstance:
    """The public part of the game: target count, budget, defender payoffs."""

    n: int
    m: int
    def_rewards: np.ndarray
    def_penalties: np.ndarray

    def __post_init__(self):
        if self.n <= self.m or self.m < 1:
            raise ValidationError(f"need n > m >= 1, got n={self.n}, m={self.m}")
        object.__setattr__(self, "def_rewards", _as_vector(self.def_rewards, self.n, "def_rewards"))
        object.__setattr__(self, "def_penalties", _as_vector(self.def_penalties, self.n, "def_penalties"))
        bad = np.nonzero(self.def_rewards <= self.def_penalties)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"target {i + 1}: defender reward {self.def_rewards[i]} must exceed "
                f"penalty {self.def_penalties[i]}"
            )


@dataclass(frozen=True)
class AttackerType:
    """Per-target attacker reward (successful attack) and penalty vectors."""

    atk_rewards: np.ndarray
    atk_penalties: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.atk_rewards).shape[0]
        object.__setattr__(self, "atk_rewards", _as_vector(self.atk_rewards, n, "atk_rewards"))
        object.__setattr__(self, "atk_penalties", _as_vector(self.atk_penalties, n, "atk_penalties"))
        bad = np.nonzero(self.atk_rewards <= self.atk_penalties)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"target {i + 1}: attacker reward {self.atk_rewards[i]} must exceed "
                f"penalty {self.atk_penalties[i]}"
            )

    @property
    def n(self) -> int:
        return self.atk_rewards.shape[0]


@dataclass(frozen=True)
class TypeSet:
    """Ordered finite set of attacker types."""

    types: tuple

    def __post_init__(self):
        types = tuple(self.types)
        if not types:
            raise ValidationError("type set must contain at least one type")
        n = types[0].n
        for k, t in enumerate(types):
            if not isinstance(t, AttackerType):
                raise ValidationError(f"type {k} is not an AttackerType")
            if t.n != n:
                raise ValidationError(f"type {k} has {t.n} targets, expected {n}")
        object.__setattr__(self, "types", types)

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def __getitem__(self, k):
        return self.types[k]

    def rewards_matrix(self) -> np.ndarray:
        return np.array([t.atk_rewards for t in self.types])

    def penalties_matrix(self) -> np.ndarray:
        return np.array([t.atk_penalties for t in self.types])


@dataclass(frozen=True)
class Coverage:
    """Defender mixed strategy in coverage form."""

    probs: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.probs).shape[0]
        object.__setattr__(self, "probs", _as_vector(self.probs, n, "coverage"))
        if np.any(self.probs < -COV_TOL) or np.any(self.probs > 1 + COV_TOL):
            i = int(np.argmax(np.abs(self.probs - np.clip(self.probs, 0, 1))))
            raise ValidationError(f"target {i + 1}: coverage {self.probs[i]} outside [0, 1]")

    def check_budget(self, m: int):
        total = float(self.probs.sum())
        if total > m + COV_TOL:
            raise ValidationError(f"coverage sums to {total} > budget {m}")

    @property
    def n(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class Outcome:
    """A (coverage, induced target) pair."""

    coverage: Coverage
    target: int


def defender_utility(game: GameInstance, coverage, i: int) -> float:
    """Expected defender utility when target i is attacked under `coverage`."""
    c = coverage.probs if isinstance(coverage, Coverage) else np.asarray(coverage, dtype=float)
    if not 0 <= i < game.n:
        raise IndexError(f"target index {i} out of range for n={game.n}")
    ci = float(c[i])
    return ci * float(game.def_rewards[i]) + (1.0 - ci) * float(game.def_penalties[i])


def attacker_utility(theta: AttackerType, coverage, i: int) -> float:
    """Expected attacker utility of type `theta` when attacking target i."""
    c = coverage.probs if isinstance(coverage, Coverage) else np.asarray(coverage, dtype=float)
    if not 0 <= i < theta.n:
        raise IndexError(f"target index {i} out of range for n={theta.n}")
    ci = float(c[i])
    return (1.0 - ci) * float(theta.atk_rewards[i]) + ci * float(theta.atk_penalties[i])


def attacker_utilities(theta: AttackerType, coverage) -> np.ndarray:
    """Vector of attacker utilities, one entry per target."""
    c = coverage.probs if isinstance(coverage, Coverage) else np.asarray(coverage, dtype=float)
    return (1.0 - c) * theta.atk_rewards + c * theta.atk_penalties


def defender_utilities(game: GameInstance, coverage) -> np.ndarray:
    c = coverage.probs if isinstance(coverage, Coverage) else np.asarray(coverage, dtype=float)
    return c * game.def_rewards + (1.0 - c) * game.def_penalties


def best_responses(theta: AttackerType, coverage, tie_tol: float = TIE_TOL) -> list:
    """All targets within `tie_tol` of the attacker's best utility, ascending.

    The tolerance-expanded set stands in for the exact argmax; induced
    responses are always selected from it.
    """
    if tie_tol < 0:
        raise ValidationError("tie_tol must be non-negative")
    u = attacker_utilities(theta, coverage)
    return [int(i) for i in np.nonzero(u >= u.max() - tie_tol)[0]]


def induced_response(game: GameInstance, theta: AttackerType, coverage,
                     tie_tol: float = TIE_TOL) -> int:
    """Best response of `theta`, ties broken in the defender's favor, then by index."""
    br = best_responses(theta, coverage, tie_tol)
    dvals = defender_utilities(game, coverage)
    best = max(br, key=lambda i: (dvals[i], -i))
    return int(best)


def zero_sum_type(game: GameInstance) -> AttackerType:
    """The attacker type that makes the game zero-sum: (-p^d, -r^d)."""
    return AttackerType(-game.def_penalties, -game.def_rewards)


def shift_nonnegative(game: GameInstance):
    """Shift defender payoffs by a common offset so that all are >= 0.

    Attacker payoffs are untouched, so best-response structure is preserved
    exactly; all defender utilities shift by the returned offset.
    """
    offset = max(0.0, -float(game.def_penalties.min()))
    shifted = GameInstance(game.n, game.m,
                           game.def_rewards + offset,
                           game.def_penalties + offset)
    return shifted, offset


# ---------------------------------------------------------------------------
# Instance file format (JSON):
#   {"n": int, "m": int, "def_rewards": [...], "def_penalties": [...],
#    "types": [{"atk_rewards": [...], "atk_penalties": [...]}, ...],
#    "meta": {...}?}

def instance_to_dict(game: GameInstance, types: TypeSet, meta: dict | None = None) -> dict:
    d = {
        "n": game.n,
        "m": game.m,
        "def_rewards": game.def_rewards.tolist(),
        "def_penalties": game.def_penalties.tolist(),
        "types": [
            {"atk_rewards": t.atk_rewards.tolist(), "atk_penalties": t.atk_penalties.tolist()}
            for t in types
        ],
    }
    if meta is not None:
        d["meta"] = meta
    return d


def instance_from_dict(d: dict):
    try:
        n = int(d["n"])
        m = int(d["m"])
        raw_types = d["types"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed instance file: {exc}") from exc
    game = GameInstance(n, m, d.get("def_rewards"), d.get("def_penalties"))
    types = []
    for k, t in enumerate(raw_types):
        try:
            types.append(AttackerType(_as_vector(t["atk_rewards"], n, f"types[{k}].atk_rewards"),
                                      _as_vector(t["atk_penalties"], n, f"types[{k}].atk_penalties")))
        except ValidationError as exc:
            raise ValidationError(f"type {k}: {exc}") from exc
    return game, TypeSet(tuple(types)), d.get("meta")


def save_instance(path, game: GameInstance, types: TypeSet, meta: dict | None = None):
    with open(path, "w") as f:
        json.dump(instance_to_dict(game, types, meta), f, indent=2)
        f.write("\n")


def load_instance(path):
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return instance_from_dict(d)
