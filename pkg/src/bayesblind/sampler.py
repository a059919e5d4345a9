"""Stick-breaking random distributions and Monte Carlo blind-spot estimation.

Sampling is float64 by design: the underlying measure is continuous, and
its almost-sure claims are probed statistically, never asserted exactly.
Exact float ratio equality counts as a collision; near-equality within a
1e-12 relative threshold is reported separately and never flips a verdict.

Reproducibility contract: trials are partitioned into fixed-size chunks and
chunk c draws from ``SeedSequence(entropy=seed, spawn_key=(c,))``.  Workers
process whole chunks and results are reduced in chunk order, so output is
identical for any worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import (
    Distribution,
    FiniteDistribution,
    TruncatedDistribution,
    require_positive_prefix,
)
from .errors import OutOfRange

NEAR_COLLISION_RTOL = 1e-12
CHUNK_TRIALS = 4096


@dataclass(frozen=True)
class StickBase:
    """Base draw on [0, 1): uniform or beta(a, b)."""

    kind: str = "uniform"
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "beta"):
            raise OutOfRange(f"unknown stick base {self.kind!r}")
        if self.kind == "beta" and (self.a <= 0 or self.b <= 0):
            raise OutOfRange("beta parameters must be positive")

    def __str__(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        return f"beta:{self.a},{self.b}"


UNIFORM = StickBase("uniform")


def parse_base(text: str) -> StickBase:
    s = text.strip().lower()
    if s == "uniform":
        return UNIFORM
    if s.startswith("beta:"):
        a, b = (float(t) for t in s[5:].split(","))
        return StickBase("beta", a, b)
    raise OutOfRange(f"unknown stick base {text!r}; expected uniform|beta:a,b")


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,)))


def _unit_draws(rng: np.random.Generator, shape, base: StickBase) -> np.ndarray:
    if base.kind == "uniform":
        u = rng.random(shape)
    else:
        u = rng.beta(base.a, base.b, shape)
    # a draw exactly equal to the remaining mass (u == 1) is re-drawn;
    # the half-open convention keeps every break strictly below the stick
    mask = u >= 1.0
    while mask.any():
        u[mask] = rng.random(int(mask.sum())) if base.kind == "uniform" else rng.beta(
            base.a, base.b, int(mask.sum())
        )
        mask = u >= 1.0
    return u


def _stick_chunk(rng: np.random.Generator, m: int, n: int, base: StickBase):
    """m stick-breaking samples of length n: coordinates and residual mass."""
    u = _unit_draws(rng, (m, n), base)
    kept = np.cumprod(1.0 - u, axis=1)
    prev = np.concatenate([np.ones((m, 1)), kept[:, :-1]], axis=1)
    x = u * prev
    return x, kept[:, -1]


def stick_breaking_matrix(seed: int, trials: int, n: int, base: StickBase = UNIFORM):
    """(trials, n) coordinate matrix plus residuals, chunk-deterministic."""
    xs, residuals = [], []
    done = 0
    chunk = 0
    while done < trials:
        m = min(CHUNK_TRIALS, trials - done)
        x, r = _stick_chunk(_chunk_rng(seed, chunk), m, n, base)
        xs.append(x)
        residuals.append(r)
        done += m
        chunk += 1
    return np.concatenate(xs, axis=0), np.concatenate(residuals, axis=0)


def stick_breaking_sample(seed: int, n: int, base: StickBase = UNIFORM) -> TruncatedDistribution:
    """One stick-breaking sample, deterministic given the seed."""
    if n < 2:
        raise OutOfRange("horizon must be at least 2")
    x, residual = _stick_chunk(_chunk_rng(seed, 0), 1, n, base)
    return TruncatedDistribution(tuple(float(v) for v in x[0]), float(residual[0]))


def finite_stick_sample(seed: int, n: int, base: StickBase = UNIFORM) -> FiniteDistribution:
    """Finite variant: n-1 breaks, last coordinate absorbs the residual."""
    if n < 2:
        raise OutOfRange("need at least 2 components")
    x, residual = _stick_chunk(_chunk_rng(seed, 0), 1, n - 1, base)
    probs = tuple(float(v) for v in x[0]) + (float(residual[0]),)
    return FiniteDistribution(probs)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    in_blindspot: bool
    first_collision: Optional[tuple]  # (i, j) 1-based or None
    residual_mass: float


@dataclass(frozen=True)
class McReport:
    trials: int
    horizon: int
    in_blindspot: int
    exact_float_collisions: int
    near_collisions: int
    mean_residual_mass: float
    seed: int

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "horizon": self.horizon,
            "in_blindspot": self.in_blindspot,
            "exact_float_collisions": self.exact_float_collisions,
            "near_collisions": self.near_collisions,
            "mean_residual_mass": self.mean_residual_mass,
            "seed": self.seed,
        }


def _first_collision(ratios: np.ndarray) -> Optional[tuple]:
    """Lexicographically smallest 1-based pair with exactly equal ratios."""
    groups: dict = {}
    best = None
    for j, r in enumerate(ratios, start=1):
        i = groups.setdefault(float(r), j)
        if i != j and (best is None or (i, j) < best):
            best = (i, j)
    return best


def _mc_chunk(args):
    seed, chunk, m, n, base, p_float, collect, trial_offset = args
    x, residual = _stick_chunk(_chunk_rng(seed, chunk), m, n, base)
    ratios = x / p_float
    s = np.sort(ratios, axis=1)
    eq = s[:, 1:] == s[:, :-1]
    near = (s[:, 1:] - s[:, :-1]) <= NEAR_COLLISION_RTOL * np.abs(s[:, 1:])
    exact_trials = eq.any(axis=1)
    near_trials = (near & ~eq).any(axis=1)
    records = []
    if collect:
        for t in range(m):
            pair = _first_collision(ratios[t]) if exact_trials[t] else None
            records.append(
                TrialRecord(trial_offset + t, not exact_trials[t], pair, float(residual[t]))
            )
    return (
        int(exact_trials.sum()),
        int(near_trials.sum()),
        float(residual.sum()),
        records,
    )


def monte_carlo_blindspot_fraction(
    prior: Distribution,
    trials: int,
    n: int,
    base: StickBase = UNIFORM,
    seed: int = 0,
    workers: int = 1,
    collect_trials: bool = False,
):
    """Monte Carlo frequency of (prefix) blind-spot membership under the
    stick-breaking measure.  Returns an McReport, or (McReport, records)
    when per-trial records are requested."""
    if trials < 1:
        raise OutOfRange("need at least one trial")
    p_float = np.array([float(v) for v in require_positive_prefix(prior, n)])
    tasks = []
    done = 0
    chunk = 0
    while done < trials:
        m = min(CHUNK_TRIALS, trials - done)
        tasks.append((seed, chunk, m, n, base, p_float, collect_trials, done))
        done += m
        chunk += 1
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_mc_chunk, tasks)
    else:
        results = [_mc_chunk(t) for t in tasks]
    exact = sum(r[0] for r in results)
    near = sum(r[1] for r in results)
    residual_sum = 0.0
    for r in results:  # fixed chunk order keeps the float sum reproducible
        residual_sum += r[2]
    records = [rec for r in results for rec in r[3]]
    report = McReport(
        trials=trials,
        horizon=n,
        in_blindspot=trials - exact,
        exact_float_collisions=exact,
        near_collisions=near,
        mean_residual_mass=residual_sum / trials,
        seed=seed,
    )
    if collect_trials:
        return report, records
    return report
