"""Batch experiment harness: sweep a parameter grid, emit EoP rows as CSV.

One row per (grid point, run, policy[, phi]). Row content is deterministic
in the master seed and independent of the parallel schedule; rows are
sorted after collection. A failing policy evaluation produces an
error-marker row (policy name suffixed "!error") instead of aborting the
sweep.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import SsgError, ValidationError
from .gen import GenConfig, generate_instance
from .policy import eop, max_eop_policy, qr_eop, sse_policy
from .solvers import sse_for_types

CSV_HEADER = ("seed", "n", "m", "lambda", "rho", "policy", "phi", "eop", "wall_time_ms")

_POLICIES = ("sse", "optimal", "qr")


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: str                  # "rho" or "n"
    grid: tuple
    n: int
    m: int
    lam: int
    rho: float
    phis: tuple = (100.0,)
    include_zero_sum: bool = False
    runs: int = 50
    master_seed: int = 0
    policies: tuple = _POLICIES
    m_ratio: float = None       # overrides m along an n sweep when set

    def __post_init__(self):
        if self.sweep not in ("rho", "n"):
            raise ValidationError(f"sweep must be 'rho' or 'n', got {self.sweep!r}")
        if not self.grid:
            raise ValidationError("grid must be non-empty")
        if self.runs < 1:
            raise ValidationError(f"runs must be >= 1, got {self.runs}")
        bad = [p for p in self.policies if p not in _POLICIES]
        if bad or not self.policies:
            raise ValidationError(f"policies must be a non-empty subset of {_POLICIES}")
        if "qr" in self.policies and not self.phis:
            raise ValidationError("qr policy requested but phi list is empty")

    def point(self, gi: int) -> GenConfig:
        """GenConfig at grid index gi (seed filled in per run)."""
        n, m, rho = self.n, self.m, self.rho
        if self.sweep == "rho":
            rho = float(self.grid[gi])
        else:
            n = int(self.grid[gi])
            if self.m_ratio is not None:
                m = max(1, round(self.m_ratio * n))
        return GenConfig(n=n, m=m, lam=self.lam, rho=rho, seed=self.master_seed,
                         include_zero_sum=self.include_zero_sum)


def _evaluate_run(cfg: ExperimentConfig, gi: int, run: int):
    """All rows for one (grid point, run) pair."""
    gcfg = cfg.point(gi)
    stream = gi * cfg.runs + run
    game, types = generate_instance(gcfg, stream=stream)
    # Per-report commitments are shared across policies; the QR and optimal
    # timings measure the policy layer only, matching how the solver layer
    # would be amortized in repeated use.
    sses = sse_for_types(game, types)
    rows = []

    def emit(policy, phi, fn):
        t0 = time.perf_counter()
        try:
            value = fn()
            name = policy
        except SsgError:
            value = ""
            name = policy + "!error"
        ms = (time.perf_counter() - t0) * 1e3
        rows.append((stream, gcfg.n, gcfg.m, cfg.lam, gcfg.rho, name,
                     phi, value, ms))

    if "sse" in cfg.policies:
        emit("sse", "", lambda: eop(game, types, sse_policy(game, types, sses=sses),
                                    sses=sses).overall)
    if "optimal" in cfg.policies:
        emit("optimal", "", lambda: eop(game, types,
                                        max_eop_policy(game, types, sses=sses)[0],
                                        sses=sses).overall)
    if "qr" in cfg.policies:
        for phi in cfg.phis:
            emit("qr", phi, lambda p=phi: qr_eop(game, types, p, sses=sses).overall)
    return gi, run, rows


def _worker(args):
    return _evaluate_run(*args)


def _max_workers() -> int:
    raw = os.environ.get("SSG_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        raise ValidationError(f"SSG_THREADS must be an integer, got {raw!r}")
    return k if k > 0 else (os.cpu_count() or 1)


def run_experiment(cfg: ExperimentConfig):
    """All result rows for the sweep, sorted by (grid point, run, policy)."""
    jobs = [(cfg, gi, run) for gi in range(len(cfg.grid)) for run in range(cfg.runs)]
    workers = min(_max_workers(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs, chunksize=1))
    else:
        results = [_evaluate_run(*j) for j in jobs]
    results.sort(key=lambda r: (r[0], r[1]))
    out = []
    for _, _, rows in results:
        out.extend(sorted(rows, key=lambda row: (row[5], row[6])))
    return out


def write_csv(path_or_file, rows):
    if hasattr(path_or_file, "write"):
        _write_csv(path_or_file, rows)
    else:
        with open(path_or_file, "w", newline="") as f:
            _write_csv(f, rows)


def _write_csv(f, rows):
    w = csv.writer(f)
    w.writerow(CSV_HEADER)
    for seed, n, m, lam, rho, policy, phi, val, ms in rows:
        w.writerow([seed, n, m, lam, f"{rho:.12g}", policy,
                    "" if phi == "" else f"{phi:.12g}",
                    "" if val == "" else f"{val:.12g}",
                    f"{ms:.3f}"])


# ---------------------------------------------------------------------------
# Config file format: one key=value per line, '#' comments, lists
# comma-separated. Keys: sweep, grid, n, m, m_ratio, lambda, rho, phi,
# include_zero_sum, runs, seed, policies.

def parse_config(text: str) -> ExperimentConfig:
    kv = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val
    known = {"sweep", "grid", "n", "m", "m_ratio", "lambda", "rho", "phi",
             "include_zero_sum", "runs", "seed", "policies"}
    unknown = set(kv) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for req in ("sweep", "grid", "n", "lambda"):
        if req not in kv:
            raise ValidationError(f"missing config key: {req}")

    def num_list(s):
        return tuple(float(x) for x in s.split(",") if x.strip())

    sweep = kv["sweep"]
    try:
        return ExperimentConfig(
            sweep=sweep,
            grid=num_list(kv["grid"]),
            n=int(kv["n"]),
            m=int(kv.get("m", "1")),
            lam=int(kv["lambda"]),
            rho=float(kv.get("rho", "0")),
            phis=num_list(kv["phi"]) if "phi" in kv else (100.0,),
            include_zero_sum=kv.get("include_zero_sum", "false").lower()
            in ("1", "true", "yes"),
            runs=int(kv.get("runs", "50")),
            master_seed=int(kv.get("seed", "0")),
            policies=tuple(p.strip() for p in kv.get("policies", "sse,optimal,qr").split(",")),
            m_ratio=float(kv["m_ratio"]) if "m_ratio" in kv else None,
        )
    except ValueError as exc:
        raise ValidationError(f"malformed config value: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    with open(path) as f:
        return parse_config(f.read())
