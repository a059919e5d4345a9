"""Shared generators for randomized exact-rational test cases."""

from fractions import Fraction

from bayesblind import BlockWeights, FiniteDistribution, Partition, normalize
from bayesblind.jeffrey import _restricted_growth_strings


def random_positive_dist(rng, n, max_int=20) -> FiniteDistribution:
    values = [Fraction(rng.randint(1, max_int)) for _ in range(n)]
    return normalize(values)


def random_dist(rng, n, max_int=8) -> FiniteDistribution:
    """Random posterior; zeros allowed, small integer grid invites collisions."""
    while True:
        values = [Fraction(rng.randint(0, max_int)) for _ in range(n)]
        if any(values):
            return normalize(values)


def random_partition(rng, n) -> Partition:
    all_rgs = list(_restricted_growth_strings(n))
    rgs = all_rgs[rng.randrange(len(all_rgs))]
    blocks: dict = {}
    for i, label in enumerate(rgs, start=1):
        blocks.setdefault(label, []).append(i)
    return Partition.of(blocks.values())


def random_weights(rng, k, max_int=6) -> BlockWeights:
    """Random block weights; zero weights allowed, sums to exactly 1."""
    while True:
        values = [Fraction(rng.randint(0, max_int)) for _ in range(k)]
        total = sum(values)
        if total:
            return BlockWeights(tuple(v / total for v in values))
