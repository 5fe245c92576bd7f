"""Rational point sampling used by the verification drivers."""

import random
from fractions import Fraction as QQ

import pytest

from painleve_ds.sampling import (
    DENOMINATOR_RANGE,
    NUMERATOR_RANGE,
    RETRY_CAP,
    nonzero_rational,
    random_rational,
    rational_avoiding,
    rational_satisfying,
)


class TestDraws:
    def test_values_stay_in_the_box(self):
        rng = random.Random(0)
        lo = QQ(NUMERATOR_RANGE[0], DENOMINATOR_RANGE[0])
        hi = QQ(NUMERATOR_RANGE[1], DENOMINATOR_RANGE[0])
        for _ in range(500):
            value = random_rational(rng)
            assert lo <= value <= hi
            assert value.denominator <= DENOMINATOR_RANGE[1]

    def test_deterministic_by_seed(self):
        a = [random_rational(random.Random(42)) for _ in range(10)]
        b = [random_rational(random.Random(42)) for _ in range(10)]
        assert a == b

    def test_nonzero_never_zero(self):
        rng = random.Random(1)
        assert all(nonzero_rational(rng) != 0 for _ in range(300))

    def test_avoiding_respects_exclusions(self):
        rng = random.Random(2)
        banned = (0, 1, QQ(1, 2))
        for _ in range(300):
            assert rational_avoiding(rng, banned) not in banned

    def test_unsatisfiable_predicate_fails_loudly(self):
        rng = random.Random(3)
        with pytest.raises(RuntimeError, match=str(RETRY_CAP)):
            rational_satisfying(rng, lambda value: False)
