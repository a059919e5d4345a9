"""Exact and truncated probability distributions on countable index sets.

Rational mode (``fractions.Fraction`` entries) is canonical; float entries
only appear in sampler output.  Indices are 1-based in all public reporting
(witness pairs, partition blocks, JSON), 0-based internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    AllZero,
    HorizonTooLarge,
    LengthMismatch,
    NegativeEntry,
    NotNormalized,
    OutOfRange,
    ZeroPrior,
)

#: absolute slack allowed when a float-mode distribution is validated
FLOAT_TOL = 2.0 ** -40

Number = Union[Fraction, float]


def parse_rational(text: str) -> Fraction:
    """Parse "a/b", integer, or decimal (at most 18 fractional digits) exactly."""
    s = text.strip()
    if "/" in s:
        return Fraction(s)
    if "." in s:
        digits = len(s.split(".", 1)[1])
        if digits > 18:
            raise OutOfRange(f"decimal input limited to 18 fractional digits: {text!r}")
        return Fraction(s)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _encode(x: Number):
    return format_rational(x) if isinstance(x, Fraction) else float(x)


def _is_exact(values: Sequence[Number]) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def _check_entries(values: Sequence[Number]) -> None:
    for v in values:
        if v < 0:
            raise NegativeEntry(f"negative probability entry {v}")


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector on a finite index set; exact in rational mode."""

    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(self.probs))
        if len(self.probs) < 2:
            raise OutOfRange("a distribution needs at least 2 components")
        _check_entries(self.probs)
        total = sum(self.probs)
        if _is_exact(self.probs):
            if total != 1:
                raise NotNormalized(f"entries sum to {total}, not 1")
        elif abs(total - 1.0) > FLOAT_TOL:
            raise NotNormalized(f"float entries sum to {total}")

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.probs)

    def value(self, i: int) -> Number:
        """1-based component access."""
        return self.probs[i - 1]


@dataclass(frozen=True)
class TruncatedDistribution:
    """Finite prefix of a distribution on a denumerable set plus tail mass."""

    prefix: tuple
    tail_mass: Number

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if len(self.prefix) < 2:
            raise OutOfRange("prefix needs at least 2 components")
        _check_entries(self.prefix)
        if self.tail_mass < 0:
            raise NegativeEntry(f"negative tail mass {self.tail_mass}")
        total = sum(self.prefix) + self.tail_mass
        if self.is_exact:
            if total != 1:
                raise NotNormalized(f"prefix + tail sums to {total}, not 1")
        elif abs(total - 1.0) > FLOAT_TOL:
            raise NotNormalized(f"float prefix + tail sums to {total}")

    def __len__(self) -> int:
        return len(self.prefix)

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.prefix) and isinstance(self.tail_mass, Fraction)

    def value(self, i: int) -> Number:
        return self.prefix[i - 1]


@dataclass(frozen=True)
class Geometric:
    """Strictly positive parametric family p_i = (1-r) * r^(i-1), i >= 1."""

    ratio: Fraction

    def __post_init__(self):
        if not isinstance(self.ratio, Fraction):
            object.__setattr__(self, "ratio", Fraction(self.ratio))
        if not (0 < self.ratio < 1):
            raise OutOfRange(f"geometric ratio must lie in (0, 1), got {self.ratio}")

    def value(self, i: int) -> Fraction:
        return (1 - self.ratio) * self.ratio ** (i - 1)

    def prefix_values(self, n: int) -> tuple:
        r = self.ratio
        out = []
        term = 1 - r
        for _ in range(n):
            out.append(term)
            term *= r
        return tuple(out)

    def tail_after(self, n: int) -> Fraction:
        return self.ratio ** n


def geometric(r: Fraction) -> Geometric:
    return Geometric(r)


Distribution = Union[FiniteDistribution, TruncatedDistribution, Geometric]


@dataclass(frozen=True)
class RatioProfile:
    """The vector q_i / p_i whose injectivity decides blind-spot membership."""

    ratios: tuple

    def __len__(self) -> int:
        return len(self.ratios)

    def has_repeat(self) -> bool:
        return len(set(self.ratios)) < len(self.ratios)


def finite_from_rationals(values: Iterable[Fraction]) -> FiniteDistribution:
    vals = tuple(Fraction(v) for v in values)
    return FiniteDistribution(vals)


def normalize(values: Iterable[Fraction]) -> FiniteDistribution:
    vals = tuple(Fraction(v) for v in values)
    _check_entries(vals)
    total = sum(vals)
    if total == 0:
        raise AllZero("cannot normalize the zero vector")
    return FiniteDistribution(tuple(v / total for v in vals))


def truncate(d: Geometric, n: int) -> TruncatedDistribution:
    """Exact N-term prefix of a parametric distribution, tail via closed form."""
    if n < 2:
        raise OutOfRange("truncation horizon must be at least 2")
    return TruncatedDistribution(d.prefix_values(n), d.tail_after(n))


def prefix_of(d: Distribution, n: int) -> tuple:
    """First n components of any distribution kind (1..n)."""
    if isinstance(d, Geometric):
        return d.prefix_values(n)
    vals = d.probs if isinstance(d, FiniteDistribution) else d.prefix
    if n > len(vals):
        raise HorizonTooLarge(f"horizon {n} exceeds available prefix length {len(vals)}")
    return tuple(vals[:n])


def tail_of(d: Distribution, n: int) -> Number:
    """Mass beyond index n (exact for geometric/finite, stored for truncated)."""
    if isinstance(d, Geometric):
        return d.tail_after(n)
    if isinstance(d, FiniteDistribution):
        return sum(d.probs[n:], Fraction(0) if d.is_exact else 0.0)
    if n > len(d.prefix):
        raise HorizonTooLarge(f"horizon {n} exceeds available prefix length {len(d.prefix)}")
    zero = Fraction(0) if d.is_exact else 0.0
    return sum(d.prefix[n:], zero) + d.tail_mass


def require_positive_prefix(d: Distribution, n: int) -> tuple:
    vals = prefix_of(d, n)
    for i, v in enumerate(vals, start=1):
        if v <= 0:
            raise ZeroPrior(f"prior has nonpositive component {v} at index {i}")
    return vals


def ratio_profile(q: Distribution, p: Distribution, n: int | None = None) -> RatioProfile:
    """Componentwise q_i / p_i; prior must be strictly positive."""
    if n is None:
        if isinstance(q, Geometric) or isinstance(p, Geometric):
            raise LengthMismatch("horizon required when a parametric distribution is involved")
        n = len(q)
        if len(p) != n:
            raise LengthMismatch(f"lengths differ: {len(q)} vs {len(p)}")
    pv = require_positive_prefix(p, n)
    qv = prefix_of(q, n)
    return RatioProfile(tuple(a / b for a, b in zip(qv, pv)))


def dist_to_json(d: Distribution) -> dict:
    if isinstance(d, FiniteDistribution):
        return {"kind": "finite", "probs": [_encode(v) for v in d.probs]}
    if isinstance(d, TruncatedDistribution):
        return {
            "kind": "truncated",
            "prefix": [_encode(v) for v in d.prefix],
            "tail_mass": _encode(d.tail_mass),
        }
    return {"kind": "geometric", "ratio": format_rational(d.ratio)}


def _decode(v) -> Number:
    if isinstance(v, str):
        return parse_rational(v)
    if isinstance(v, bool):
        raise OutOfRange(f"not a probability value: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise OutOfRange(f"not a probability value: {v!r}")


def dist_from_json(obj: dict) -> Distribution:
    kind = obj.get("kind")
    if kind == "finite":
        return FiniteDistribution(tuple(_decode(v) for v in obj["probs"]))
    if kind == "truncated":
        return TruncatedDistribution(
            tuple(_decode(v) for v in obj["prefix"]), _decode(obj["tail_mass"])
        )
    if kind == "geometric":
        return Geometric(parse_rational(obj["ratio"]))
    raise OutOfRange(f"unknown distribution kind {kind!r}")


def dumps(d: Distribution) -> str:
    return json.dumps(dist_to_json(d), sort_keys=True)


def loads(text: str) -> Distribution:
    return dist_from_json(json.loads(text))
