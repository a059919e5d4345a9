"""Constructive generators and perturbation procedures with certified bounds.

Everything here is exact-rational and deterministic given (inputs, seed).
Outputs are never trusted from construction alone: callers re-verify them
through the blindspot and metrics modules, and the result objects carry the
data needed for that re-check (collision pairs, exact l1 move costs).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .blindspot import membership_prefix
from .distributions import (
    Distribution,
    FiniteDistribution,
    TruncatedDistribution,
    require_positive_prefix,
    tail_of,
)
from .errors import (
    DegenerateSecondCoordinate,
    DeltaTooLarge,
    HorizonInsufficient,
    OutOfRange,
    ZeroPrior,
)

#: extra dyadic resolution below the 2^-i envelope for generated coordinates
_DYADIC_BITS = 32


def exclusion_set(
    ms: Sequence[Fraction], prior_prefixes: Sequence[tuple], i: int
) -> set:
    """Forbidden values for coordinate m_i: {m_j * p_i / p_j : j < i, each prior}.

    1-based i; ``ms`` holds m_1..m_{i-1}.  Finite by construction:
    at most (i-1) * K elements.
    """
    forbidden = set()
    for pv in prior_prefixes:
        pi = pv[i - 1]
        for j, mj in enumerate(ms, start=1):
            forbidden.add(mj * pi / pv[j - 1])
    return forbidden


def generate_raw_sequence(
    priors: Sequence[Distribution], n: int, seed: int
) -> tuple:
    """The m_i sequence: m_1 = 1/2, then m_i in (0, 2^-i) avoiding all
    ratio collisions with earlier coordinates, for every prior.

    Candidates are seeded random dyadics k / 2^(i + 32); the exclusion set
    is finite at every step, so a retry loop always terminates.
    """
    if not priors:
        raise ZeroPrior("prior family must be nonempty")
    if n < 2:
        raise OutOfRange("horizon must be at least 2")
    prefixes = [require_positive_prefix(p, n) for p in priors]
    rng = random.Random(seed)
    ms = [Fraction(1, 2)]
    for i in range(2, n + 1):
        forbidden = exclusion_set(ms, prefixes, i)
        denom = 1 << (i + _DYADIC_BITS)
        while True:
            k = rng.randrange(1, 1 << _DYADIC_BITS)
            candidate = Fraction(k, denom)
            if candidate not in forbidden:
                ms.append(candidate)
                break
    return tuple(ms)


def generate_blindspot_member(
    priors: Sequence[Distribution], n: int, seed: int
) -> TruncatedDistribution:
    """Prefix-normalized m sequence: a blind-spot member at horizon n for
    every prior in the family (normalization preserves ratio distinctness)."""
    ms = generate_raw_sequence(priors, n, seed)
    total = sum(ms)
    return TruncatedDistribution(tuple(m / total for m in ms), Fraction(0))


def delta_family(q: TruncatedDistribution, delta: Fraction) -> TruncatedDistribution:
    """The shift (q_1 + delta, q_2 - delta, q_3, ...); mass preserved."""
    if not q.is_exact:
        raise OutOfRange("delta_family requires an exact-rational distribution")
    if not (0 < delta < q.value(2)):
        raise DeltaTooLarge(f"delta must lie in (0, q_2) = (0, {q.value(2)}), got {delta}")
    prefix = (q.prefix[0] + delta, q.prefix[1] - delta) + q.prefix[2:]
    return TruncatedDistribution(prefix, q.tail_mass)


def pick_valid_delta(
    q: TruncatedDistribution,
    priors: Sequence[Distribution],
    eps: Fraction,
    seed: int,
    max_tries: int = 10000,
) -> Fraction:
    """A delta in (0, eps) whose shifted distribution stays prefix-distinct
    for every prior.  Only finitely many deltas fail at a fixed horizon, so
    seeded dyadic retries succeed quickly."""
    if q.value(2) == 0:
        raise DegenerateSecondCoordinate("q_2 = 0: the delta shift is unavailable")
    cap = min(1 - q.value(1), q.value(2))
    if not (0 < eps <= cap):
        raise OutOfRange(f"eps must lie in (0, {cap}], got {eps}")
    n = len(q)
    rng = random.Random(seed)
    for _ in range(max_tries):
        delta = eps * Fraction(rng.randrange(1, 1 << 40), 1 << 40)
        shifted = delta_family(q, delta)
        if all(membership_prefix(p, shifted, n).distinct for p in priors):
            return delta
    raise HorizonInsufficient("no valid delta found within the retry budget")


@dataclass(frozen=True)
class DensifyResult:
    distribution: TruncatedDistribution
    l1_upper: Fraction  # certified upper bound on the full-sequence distance


def densify(
    p: Distribution,
    q_target: Distribution,
    eps: Fraction,
    seed: int = 0,
) -> DensifyResult:
    """A prefix-distinct distribution within l1 distance 4*eps of q_target.

    Coordinate rule: keep q_n when its ratio is new; otherwise nudge up by
    the largest power-of-two fraction of eps below eps / 2^(n+1) whose ratio
    is unused (halving further on the rare repeat).  The nudged vector is
    then normalized by its total mass.  ``seed`` is accepted for interface
    uniformity; the rule itself is deterministic.
    """
    del seed
    if not (0 < eps < Fraction(1, 2)):
        raise OutOfRange(f"eps must lie in (0, 1/2), got {eps}")
    q_target = _as_truncated(q_target)
    if not q_target.is_exact:
        raise OutOfRange("densify requires an exact-rational target")
    n = len(q_target)
    pv = require_positive_prefix(p, n)
    qv = q_target.prefix
    rs = [qv[0]]
    seen = {qv[0] / pv[0]}
    for i in range(1, n):
        value = qv[i]
        if value / pv[i] in seen:
            nudge = eps / (1 << (i + 3))  # < eps / 2^(n+1) with n = i+1 1-based
            while (value + nudge) / pv[i] in seen:
                nudge /= 2
            value = value + nudge
        assert abs(value - qv[i]) < eps / (1 << (i + 1))
        rs.append(value)
        seen.add(value / pv[i])
    total = sum(rs)
    if total == 0:
        raise HorizonInsufficient("target prefix carries no mass to normalize")
    out = TruncatedDistribution(tuple(r / total for r in rs), Fraction(0))
    prefix_dist = sum(abs(a - b) for a, b in zip(out.prefix, qv))
    upper = prefix_dist + tail_of(q_target, n)
    if upper >= 4 * eps:
        raise HorizonInsufficient(
            f"cannot certify the 4*eps bound: upper {upper} vs {4 * eps}"
        )
    return DensifyResult(out, upper)


@dataclass(frozen=True)
class CollisionMoveResult:
    distribution: TruncatedDistribution
    pairs: tuple  # colliding pairs (1, n) created by construction
    branch: str  # "positive" | "negative" for single moves, "mixed" otherwise
    l1_distance: Fraction  # exact: only prefix coordinates moved, tail shared
    fallback_used: bool = False  # q_2 = 0 handled via q_3


def _as_truncated(q: Distribution) -> TruncatedDistribution:
    if isinstance(q, FiniteDistribution):
        return TruncatedDistribution(q.probs, Fraction(0))
    if isinstance(q, TruncatedDistribution):
        return q
    raise OutOfRange("expected a finite or truncated distribution")


def _budget_index(q: TruncatedDistribution) -> int:
    """Coordinate that absorbs negative-branch mass: 2, or 3 when q_2 = 0."""
    if q.value(2) > 0:
        return 2
    if q.value(3) > 0:
        return 3
    raise DegenerateSecondCoordinate("q_2 = q_3 = 0: no budget coordinate")


def _threshold_index(qv, pv, eps: Fraction, n: int) -> int:
    """Smallest n0 <= n-1 with q_i < eps and p_i / p_1 < eps for all i >= n0."""
    ok_from = n + 1
    for i in range(n, 1, -1):
        if qv[i - 1] < eps and pv[i - 1] / pv[0] < eps:
            ok_from = i
        else:
            break
    if ok_from > n - 1:
        raise HorizonInsufficient(
            "no admissible index below the horizon; enlarge the prefix or eps"
        )
    return ok_from


def _collision_move(work, qv, pv, target_idx, dump_idx, budget_idx):
    """Retarget coordinate target_idx onto the prior's ray through q_1.

    Returns (branch, cost): excess mass moves to dump_idx (positive branch)
    or is taken from budget_idx (negative branch).  Cost is the exact l1
    change, < 2*eps by the threshold condition on target_idx.
    """
    t = target_idx - 1
    aligned = qv[0] * pv[t] / pv[0]
    if work[t] > aligned:
        delta = work[t] - aligned
        work[t] = aligned
        work[dump_idx - 1] += delta
        return "positive", 2 * delta
    rho = aligned - work[t]
    if work[budget_idx - 1] < rho:
        raise HorizonInsufficient("budget coordinate exhausted by negative moves")
    work[t] = aligned
    work[budget_idx - 1] -= rho
    return "negative", 2 * rho


def exteriorize(
    p: Distribution, q: Distribution, eps: Fraction
) -> CollisionMoveResult:
    """Minimal perturbation out of the blind spot: coordinate n is retargeted
    so that the pair (1, n) collides exactly, at l1 cost below 2*eps."""
    q = _as_truncated(q)
    if not q.is_exact:
        raise OutOfRange("exteriorize requires an exact-rational distribution")
    n = len(q)
    budget = _budget_index(q)
    if not (0 < eps < q.value(budget)):
        raise OutOfRange(
            f"eps must lie in (0, q_{budget}) = (0, {q.value(budget)}), got {eps}"
        )
    pv = require_positive_prefix(p, n)
    idx = _threshold_index(q.prefix, pv, eps, n)
    work = list(q.prefix)
    branch, cost = _collision_move(work, q.prefix, pv, idx, idx + 1, budget)
    assert cost < 2 * eps
    return CollisionMoveResult(
        TruncatedDistribution(tuple(work), q.tail_mass),
        ((1, idx),),
        branch,
        cost,
        fallback_used=(budget == 3),
    )


def multi_collision_near(
    p: Distribution, q: Distribution, pairs: int, eps: Fraction
) -> CollisionMoveResult:
    """At least ``pairs`` exact ratio collisions within l1 distance 2*pairs*eps.

    Applies the exteriorize move at ``pairs`` disjoint target indices taken
    greedily from the largest admissible ones (every other index, so each
    positive-branch dump coordinate stays untouched by other moves).
    """
    if pairs < 1:
        raise OutOfRange(f"pair count must be positive, got {pairs}")
    q = _as_truncated(q)
    if not q.is_exact:
        raise OutOfRange("multi_collision_near requires an exact-rational distribution")
    n = len(q)
    budget = _budget_index(q)
    if not (0 < pairs * eps < q.value(budget)):
        raise HorizonInsufficient(
            f"pairs * eps = {pairs * eps} must stay below q_{budget} = {q.value(budget)}"
        )
    pv = require_positive_prefix(p, n)
    base = _threshold_index(q.prefix, pv, eps, n)
    targets = list(range(n - 1, base - 1, -2))[:pairs]
    if len(targets) < pairs:
        raise HorizonInsufficient(
            f"only {len(targets)} disjoint moves available at this horizon"
        )
    work = list(q.prefix)
    branches = set()
    total_cost = Fraction(0)
    for t in sorted(targets):
        branch, cost = _collision_move(work, q.prefix, pv, t, t + 1, budget)
        branches.add(branch)
        total_cost += cost
    assert total_cost < 2 * pairs * eps
    return CollisionMoveResult(
        TruncatedDistribution(tuple(work), q.tail_mass),
        tuple((1, t) for t in sorted(targets)),
        branches.pop() if len(branches) == 1 else "mixed",
        total_cost,
        fallback_used=(budget == 3),
    )
