import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bayesblind import (
    FiniteDistribution,
    TruncatedDistribution,
    finite_from_rationals,
    geometric,
    normalize,
    ratio_profile,
    truncate,
)
from bayesblind.distributions import (
    dist_from_json,
    dist_to_json,
    format_rational,
    parse_rational,
    prefix_of,
)
from bayesblind.errors import (
    AllZero,
    LengthMismatch,
    NegativeEntry,
    NotNormalized,
    OutOfRange,
    ZeroPrior,
)

F = Fraction


class TestFiniteFromRationals:
    def test_valid(self):
        d = finite_from_rationals([F(1, 2), F(1, 4), F(1, 4)])
        assert d.probs == (F(1, 2), F(1, 4), F(1, 4))

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            finite_from_rationals([F(1, 2), F(1, 2), F(1, 4)])

    def test_point_mass_allowed(self):
        d = finite_from_rationals([F(1), F(0), F(0)])
        assert d.value(1) == 1

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            finite_from_rationals([F(3, 2), F(-1, 2)])

    def test_too_short(self):
        with pytest.raises(OutOfRange):
            finite_from_rationals([F(1)])


class TestNormalize:
    def test_integers(self):
        assert normalize([F(1), F(1), F(2)]).probs == (F(1, 4), F(1, 4), F(1, 2))

    def test_already_proportional(self):
        assert normalize([F(1, 2), F(1, 2)]).probs == (F(1, 2), F(1, 2))

    def test_hand_normalization(self):
        # sum = 23/32
        d = normalize([F(1, 2), F(1, 8), F(1, 16), F(1, 32)])
        assert d.probs == (F(16, 23), F(4, 23), F(2, 23), F(1, 23))

    def test_all_zero(self):
        with pytest.raises(AllZero):
            normalize([F(0), F(0)])

    @given(st.lists(st.fractions(min_value=0, max_value=50), min_size=2, max_size=8))
    def test_idempotent(self, values):
        if not any(values):
            return
        once = normalize(values)
        assert normalize(once.probs).probs == once.probs


class TestGeometric:
    def test_half(self):
        g = geometric(F(1, 2))
        assert g.prefix_values(4) == (F(1, 2), F(1, 4), F(1, 8), F(1, 16))
        assert g.tail_after(4) == F(1, 16)

    def test_third(self):
        g = geometric(F(1, 3))
        assert g.value(1) == F(2, 3)
        assert g.value(2) == F(2, 9)

    def test_boundary(self):
        with pytest.raises(OutOfRange):
            geometric(F(1))
        with pytest.raises(OutOfRange):
            geometric(F(0))


class TestTruncate:
    def test_small(self):
        t = truncate(geometric(F(1, 2)), 3)
        assert t.prefix == (F(1, 2), F(1, 4), F(1, 8))
        assert t.tail_mass == F(1, 8)

    def test_closed_form_tail(self):
        t = truncate(geometric(F(1, 2)), 64)
        assert t.tail_mass == F(1, 2 ** 64)

    def test_horizon_too_small(self):
        with pytest.raises(OutOfRange):
            truncate(geometric(F(1, 2)), 1)

    def test_mass_exact_on_grid(self):
        for r in (F(1, 2), F(1, 3), F(2, 5), F(9, 10)):
            g = geometric(r)
            for n in (2, 17, 64, 256):
                t = truncate(g, n)
                assert sum(t.prefix) + t.tail_mass == 1


class TestRatioProfile:
    def test_hand_division(self):
        p = finite_from_rationals([F(1, 2), F(1, 4), F(1, 4)])
        q = finite_from_rationals([F(1, 3), F(1, 3), F(1, 3)])
        assert ratio_profile(q, p).ratios == (F(2, 3), F(4, 3), F(4, 3))

    def test_identity(self):
        p = finite_from_rationals([F(1, 2), F(1, 4), F(1, 4)])
        assert ratio_profile(p, p).ratios == (F(1), F(1), F(1))

    def test_zeros_divide(self):
        p = finite_from_rationals([F(1, 2), F(1, 4), F(1, 4)])
        q = finite_from_rationals([F(1), F(0), F(0)])
        assert ratio_profile(q, p).ratios == (F(2), F(0), F(0))

    def test_zero_prior(self):
        p = finite_from_rationals([F(1), F(0), F(0)])
        q = finite_from_rationals([F(1, 3), F(1, 3), F(1, 3)])
        with pytest.raises(ZeroPrior):
            ratio_profile(q, p)

    def test_length_mismatch(self):
        p = finite_from_rationals([F(1, 2), F(1, 2)])
        q = finite_from_rationals([F(1, 3), F(1, 3), F(1, 3)])
        with pytest.raises(LengthMismatch):
            ratio_profile(q, p)

    def test_multiply_back_recovers_posterior(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(2, 7)
            p = normalize([F(rng.randint(1, 9)) for _ in range(n)])
            q = normalize([F(rng.randint(1, 9)) for _ in range(n)])
            rp = ratio_profile(q, p)
            assert tuple(r * pv for r, pv in zip(rp.ratios, p.probs)) == q.probs


class TestRationalText:
    @pytest.mark.parametrize(
        "text,value",
        [("1/2", F(1, 2)), ("3", F(3)), ("0.125", F(1, 8)), ("-2/4", F(-1, 2))],
    )
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    def test_decimal_digit_limit(self):
        with pytest.raises(OutOfRange):
            parse_rational("0." + "1" * 19)

    def test_format_roundtrip(self):
        for x in (F(1, 2), F(7), F(-3, 8)):
            assert parse_rational(format_rational(x)) == x


class TestJson:
    def test_finite_roundtrip(self):
        d = finite_from_rationals([F(1, 2), F(1, 4), F(1, 4)])
        assert dist_from_json(json.loads(json.dumps(dist_to_json(d)))) == d

    def test_truncated_roundtrip(self):
        t = truncate(geometric(F(1, 3)), 8)
        assert dist_from_json(dist_to_json(t)) == t

    def test_geometric_roundtrip(self):
        g = geometric(F(2, 7))
        assert dist_from_json(dist_to_json(g)) == g

    def test_float_mode_roundtrip(self):
        t = TruncatedDistribution((0.5, 0.25, 0.125), 0.125)
        assert dist_from_json(dist_to_json(t)) == t

    def test_integer_shorthand(self):
        d = dist_from_json({"kind": "finite", "probs": ["1", "0", "0"]})
        assert d.probs == (F(1), F(0), F(0))


class TestFloatMode:
    def test_tolerance_enforced(self):
        with pytest.raises(NotNormalized):
            TruncatedDistribution((0.5, 0.25), 0.2501)

    def test_within_tolerance(self):
        t = TruncatedDistribution((0.5, 0.25), 0.25)
        assert not t.is_exact


def test_prefix_of_geometric_any_horizon():
    g = geometric(F(1, 2))
    assert prefix_of(g, 3) == (F(1, 2), F(1, 4), F(1, 8))
