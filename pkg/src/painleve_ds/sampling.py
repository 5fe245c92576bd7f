"""Random rational points for the exact verification drivers.

Every randomized identity check draws coordinates as exact fractions with
numerators in [-20, 20] and denominators in [1, 10].  Singular loci are
avoided by rejection with a hard retry cap, so an unsatisfiable predicate
fails loudly instead of spinning.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

NUMERATOR_RANGE = (-20, 20)
DENOMINATOR_RANGE = (1, 10)
RETRY_CAP = 1000


def random_rational(rng: random.Random) -> Fraction:
    """One draw; dense around small fractions, which is what the checks want."""
    return Fraction(
        rng.randint(*NUMERATOR_RANGE), rng.randint(*DENOMINATOR_RANGE)
    )


def rational_satisfying(rng: random.Random, admissible: Callable[[Fraction], bool]) -> Fraction:
    for _ in range(RETRY_CAP):
        value = random_rational(rng)
        if admissible(value):
            return value
    raise RuntimeError("rejection sampling exceeded %d retries" % RETRY_CAP)


def nonzero_rational(rng: random.Random) -> Fraction:
    return rational_satisfying(rng, lambda value: value != 0)


def rational_avoiding(rng: random.Random, excluded) -> Fraction:
    banned = {Fraction(value) for value in excluded}
    return rational_satisfying(rng, lambda value: value not in banned)
