"""Criterios de aceptación sobre las integrales del registro."""

import pytest

from dequad.engine import TanhSinhEngine, choose_truncation, refine_reuse_check, trapezoid_sum
from dequad.error_model import global_bound
from dequad.registry import REGISTRY
from dequad.report import convergence_study, envelope_study, fit_order
from helpers import ulps

ENTRIES = list(REGISTRY.values())
IDS = list(REGISTRY)

STUDY_TOL = 1e-15


def test_reference_bound():
    assert f"{global_bound(1 / 129, 2.0):.4e}" == "3.0451e-05"


def test_reference_experiment(verified_registry):
    entry = REGISTRY["I1"]
    result = TanhSinhEngine().integrate(entry.integrand, entry.interval, 1e-8, entry.h0)
    assert abs(result.value - entry.exact) <= 1e-8
    assert result.evals <= 320


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
def test_convergence_order(entry, verified_registry):
    rows = convergence_study(
        entry.integrand, entry.interval, 8, entry.h0, STUDY_TOL, entry.exact
    )
    order = fit_order(rows)
    assert order is not None
    assert order >= 2.0


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
def test_error_stays_below_bound(entry, verified_registry):
    report = envelope_study(entry.integrand, entry.interval, entry.exact, 8, entry.h0, STUDY_TOL)
    assert report["status"] in ("success", "skipped"), report


def test_envelope_applies_to_constant(verified_registry):
    entry = REGISTRY["const2"]
    report = envelope_study(entry.integrand, entry.interval, entry.exact, 8, entry.h0, STUDY_TOL)
    assert report["status"] == "success"
    assert report["residual"] < 0.1
    assert report["checked"]


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
def test_truncation_is_stable(entry):
    tol = 1e-10
    h = entry.h0 / 4
    n_minus, n_plus = choose_truncation(entry.integrand, entry.interval, h, tol * h)
    base = trapezoid_sum(entry.integrand, entry.interval, h, n_minus, n_plus)
    extended = trapezoid_sum(entry.integrand, entry.interval, h, n_minus + 10, n_plus + 10)
    assert abs(extended - base) <= tol * (1 + abs(base))
    if entry.name == "const2":
        assert abs(extended - base) <= tol * abs(base)


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
@pytest.mark.parametrize("level", range(1, 7))
def test_reuse_matches_direct_sum(entry, level):
    direct, reused = refine_reuse_check(entry.integrand, entry.interval, entry.h0, level)
    assert ulps(direct, reused) <= 8


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
def test_reuse_is_exact_at_level_zero(entry):
    direct, reused = refine_reuse_check(entry.integrand, entry.interval, entry.h0, 0)
    assert direct == reused


@pytest.mark.parametrize("entry", ENTRIES, ids=IDS)
def test_bit_identical_runs(entry):
    runs = [
        TanhSinhEngine(workers=workers).integrate(entry.integrand, entry.interval, 1e-10, entry.h0)
        for workers in (1, 1, 3)
    ]
    assert runs[0] == runs[1] == runs[2]
