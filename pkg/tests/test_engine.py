import math

import pytest

from dequad.engine import (
    RESULT_FIELDS,
    TanhSinhEngine,
    choose_truncation,
    integrate,
    plain,
    refine,
    refine_reuse_check,
    trapezoid_sum,
)
from dequad.error_model import global_bound
from dequad.errors import DomainError, NoConvergence, NonFiniteIntegrand, TruncationOverrun
from dequad.registry import REGISTRY
from dequad.transform import Interval, underflow_index

SYMMETRIC = Interval(-1.0, 1.0)
UNIT = Interval(0.0, 1.0)


def one(x, dist_a, dist_b):
    return 1.0


def invsqrt(x, dist_a, dist_b):
    return 1.0 / math.sqrt(dist_a * dist_b)


# ============================================================================
# trapezoid_sum
# ============================================================================


def test_constant_with_truncation_at_weight_underflow():
    h = 0.1
    n = underflow_index(h) - 1
    assert trapezoid_sum(one, SYMMETRIC, h, n, n) == pytest.approx(2.0, abs=1e-12)


def test_inverse_sqrt_with_stable_distances():
    h = 0.05
    n = underflow_index(h) - 1
    assert trapezoid_sum(invsqrt, SYMMETRIC, h, n, n) == pytest.approx(math.pi, abs=1e-10)


def test_collapsed_nodes_are_not_evaluated():
    calls = []

    def spy(x, dist_a, dist_b):
        calls.append((dist_a, dist_b))
        return 1.0

    h = 0.25
    trapezoid_sum(spy, SYMMETRIC, h, 400, 400)
    assert all(da > 0.0 and db > 0.0 for da, db in calls)
    assert len(calls) < 801


def test_non_finite_integrand_reports_index():
    def bad(x, dist_a, dist_b):
        return math.nan if x > 0.5 else 1.0

    with pytest.raises(NonFiniteIntegrand) as info:
        trapezoid_sum(bad, SYMMETRIC, 0.5, 10, 10)
    assert info.value.k > 0
    assert info.value.abscissa > 0.5


def test_trapezoid_sum_domain():
    with pytest.raises(DomainError):
        trapezoid_sum(one, SYMMETRIC, 0.0, 3, 3)
    with pytest.raises(DomainError):
        trapezoid_sum(one, SYMMETRIC, 0.5, -1, 3)


def test_plain_wraps_single_argument_functions():
    f = plain(lambda x: x * x)
    assert f(3.0, 1.0, 1.0) == 9.0


# ============================================================================
# choose_truncation
# ============================================================================


def test_even_integrand_truncates_symmetrically():
    n_minus, n_plus = choose_truncation(one, SYMMETRIC, 0.5, 1e-10)
    assert n_minus == n_plus


def test_constant_truncation_is_short():
    n_minus, n_plus = choose_truncation(one, SYMMETRIC, 0.25, 1e-15)
    assert n_plus <= 30
    assert n_minus == n_plus


def test_sides_truncate_independently():
    def right_singular(x, dist_a, dist_b):
        return 1.0 / math.sqrt(dist_b)

    n_minus, n_plus = choose_truncation(right_singular, SYMMETRIC, 0.1, 1e-12)
    assert n_plus > n_minus


def test_truncation_overrun():
    engine = TanhSinhEngine(max_index=5)
    with pytest.raises(TruncationOverrun):
        engine.choose_truncation(one, SYMMETRIC, 0.01, 1e-15)


@pytest.mark.parametrize("tol", [0.0, -1e-8, 1.0, math.nan])
def test_truncation_tolerance_domain(tol):
    with pytest.raises(DomainError):
        choose_truncation(one, SYMMETRIC, 0.5, tol)


# ============================================================================
# integrate
# ============================================================================


def test_integrate_constant():
    result = integrate(one, SYMMETRIC, tol=1e-12)
    assert result.value == pytest.approx(2.0, abs=1e-12)
    assert result.level <= 5
    assert result.evals == result.n_minus + result.n_plus + 1
    assert result.est_error >= 0.0
    assert result.bound is None
    assert len(result.history) == result.level + 2


def test_integrate_inverse_sqrt():
    result = integrate(invsqrt, SYMMETRIC, tol=1e-10)
    assert result.value == pytest.approx(math.pi, abs=1e-10)


def test_integrate_oscillatory_reference():
    entry = REGISTRY["I1"]
    result = integrate(entry.integrand, entry.interval, tol=1e-10)
    assert abs(result.value - entry.exact) <= 1e-10
    assert result.evals <= 300


def test_result_is_the_level_certified_by_the_next():
    entry = REGISTRY["I1"]
    result = integrate(entry.integrand, entry.interval, tol=1e-10)
    finer = result.history[-1]
    assert finer.level == result.level + 1
    assert result.est_error == abs(finer.value - result.value)
    assert result.est_error <= 1e-10 * (1.0 + abs(finer.value))
    assert result.evals == result.history[-2].evals


def test_integrate_fills_bound_when_c_is_known():
    result = integrate(one, SYMMETRIC, tol=1e-10, c=math.pi / 2)
    assert result.bound == global_bound(result.h, math.pi / 2)


def test_unreachable_tolerance_raises_with_best_result():
    with pytest.raises(NoConvergence) as info:
        integrate(one, SYMMETRIC, tol=1e-30)
    best = info.value.result
    assert best.level == 12
    assert best.value == pytest.approx(2.0, abs=1e-14)


def test_integrate_domain():
    with pytest.raises(DomainError):
        integrate(one, SYMMETRIC, tol=0.0)
    with pytest.raises(DomainError):
        integrate(one, SYMMETRIC, tol=1e-8, max_level=0)
    with pytest.raises(DomainError):
        integrate(one, SYMMETRIC, tol=1e-8, h0=-1.0)


def test_result_serialises_declared_fields():
    result = integrate(one, UNIT, tol=1e-10)
    data = result.to_dict()
    assert tuple(data) == RESULT_FIELDS
    assert data["value"] == pytest.approx(1.0, abs=1e-10)


# ============================================================================
# Refinamiento
# ============================================================================


def test_refine_halves_the_step():
    steps = [est.h for est in refine(one, SYMMETRIC, h0=1.0, max_level=4)]
    assert steps == [1.0, 0.5, 0.25, 0.125, 0.0625]


def test_reuse_is_bit_identical_at_level_zero():
    direct, reused = refine_reuse_check(invsqrt, SYMMETRIC, 1.0, 0)
    assert direct == reused


def test_results_do_not_depend_on_worker_count():
    entry = REGISTRY["I1"]
    serial = TanhSinhEngine(workers=1).integrate(entry.integrand, entry.interval, 1e-10)
    threaded = TanhSinhEngine(workers=4).integrate(entry.integrand, entry.interval, 1e-10)
    assert serial.value == threaded.value
    assert (serial.n_minus, serial.n_plus) == (threaded.n_minus, threaded.n_plus)


def test_repeated_runs_are_identical():
    entry = REGISTRY["log_sing"]
    first = integrate(entry.integrand, entry.interval, tol=1e-12)
    second = integrate(entry.integrand, entry.interval, tol=1e-12)
    assert first == second
