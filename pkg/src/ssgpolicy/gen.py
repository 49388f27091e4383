"""Random instance generation under the covariance payoff model.

Attacker payoffs are blended toward the zero-sum counterpart of the
defender's payoffs with weight rho; rho=1 makes every type exactly
zero-sum. Defender payoffs are shifted non-negative after the blend so
efficiency ratios are well defined downstream.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    AttackerType,
    GameInstance,
    TypeSet,
    ValidationError,
    shift_nonnegative,
)


@dataclass(frozen=True)
class GenConfig:
    n: int
    m: int
    lam: int
    rho: float
    seed: int
    include_zero_sum: bool = False
    payoff_low: float = 0.0
    payoff_high: float = 1.0

    def __post_init__(self):
        if self.n <= self.m or self.m < 1:
            raise ValidationError(f"need n > m >= 1, got n={self.n}, m={self.m}")
        if self.lam < 1:
            raise ValidationError(f"need at least one type, got lam={self.lam}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValidationError(f"rho must be in [0, 1], got {self.rho}")
        if not self.payoff_high > self.payoff_low >= 0.0:
            raise ValidationError(
                f"need payoff_high > payoff_low >= 0, got "
                f"[{self.payoff_low}, {self.payoff_high}]")


def _uniform_open_low(rng, low, high, size):
    """Uniform on (low, high]: rewards must stay strictly above penalties."""
    return high - rng.random(size) * (high - low)


def generate_instance(cfg: GenConfig, stream: int = 0):
    """Draw one game and type set; deterministic in (cfg.seed, stream).

    Rewards are uniform on (payoff_low, payoff_high], penalties uniform on
    [-payoff_high, -payoff_low). Each attacker type is blended toward the
    zero-sum counterpart of the unshifted defender payoffs; shifting happens
    last and only touches the defender side.
    """
    ss = np.random.SeedSequence([int(cfg.seed), int(stream)])
    rng = np.random.Generator(np.random.Philox(ss))
    n, lam = cfg.n, cfg.lam
    lo, hi = cfg.payoff_low, cfg.payoff_high

    rd = _uniform_open_low(rng, lo, hi, n)
    pd = -_uniform_open_low(rng, lo, hi, n)

    ra = _uniform_open_low(rng, lo, hi, (lam, n))
    pa = -_uniform_open_low(rng, lo, hi, (lam, n))
    yr, yp = -pd, -rd  # zero-sum anchor of the unshifted defender payoffs
    ra = (1.0 - cfg.rho) * ra + cfg.rho * yr
    pa = (1.0 - cfg.rho) * pa + cfg.rho * yp

    types = [AttackerType(ra[j], pa[j]) for j in range(lam)]
    if cfg.include_zero_sum:
        types.append(AttackerType(yr.copy(), yp.copy()))

    game = GameInstance(n, cfg.m, rd, pd)
    shifted, _ = shift_nonnegative(game)
    return shifted, TypeSet(tuple(types))


def config_meta(cfg: GenConfig) -> dict:
    """GenConfig as a plain dict, recorded in instance files for provenance."""
    return {"gen_config": asdict(cfg)}
