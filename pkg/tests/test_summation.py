import math
from fractions import Fraction

from dequad.summation import CompensatedSum, two_sum


def test_two_sum_is_error_free(rng):
    values = rng.normal(size=(500, 2)) * 10.0 ** rng.integers(-20, 20, size=(500, 2))
    for a, b in values:
        s, e = two_sum(float(a), float(b))
        assert s == float(a) + float(b)
        assert Fraction(s) + Fraction(e) == Fraction(float(a)) + Fraction(float(b))


def test_recovers_cancelled_terms():
    acc = CompensatedSum()
    acc.extend([1e16, 1.0, -1e16])
    assert acc.value == 1.0


def test_matches_fsum(rng):
    terms = list(rng.normal(size=5000) * 10.0 ** rng.integers(-8, 8, size=5000))
    acc = CompensatedSum()
    acc.extend(terms)
    exact = math.fsum(terms)
    assert abs(acc.value - exact) <= math.ulp(exact)


def test_deterministic_for_fixed_order(rng):
    terms = list(rng.uniform(-1.0, 1.0, 1000))
    first, second = CompensatedSum(), CompensatedSum()
    first.extend(terms)
    second.extend(terms)
    assert first.value == second.value
