import math

import numpy as np
import pytest

from dequad.errors import DomainError
from dequad.expr import evaluate
from dequad.registry import REGISTRY, get_reference, verify_entry


def test_every_entry_is_confirmed(verified_registry):
    assert {item["name"] for item in verified_registry} == set(REGISTRY)
    for item in verified_registry:
        assert item["status"] == "success"
        assert item["rel_error"] <= 1e-25


def test_reference_value_of_oscillatory_integral():
    entry = REGISTRY["I1"]
    assert entry.exact < 0.0
    assert 1.4e-4 < abs(entry.exact) < 1.6e-4


def test_closed_forms():
    assert REGISTRY["const2"].exact == 2.0
    assert REGISTRY["invsqrt"].exact == math.pi
    assert REGISTRY["sqrt_sing"].exact == math.pi / 2
    assert REGISTRY["log_sing"].exact == 1.0


@pytest.mark.parametrize("name", list(REGISTRY))
def test_stable_integrand_matches_expression(name):
    entry = REGISTRY[name]
    iv = entry.interval
    for x in np.linspace(iv.a, iv.b, 41)[1:-1]:
        x = float(x)
        stable = entry.integrand(x, x - iv.a, iv.b - x)
        assert stable == pytest.approx(evaluate(entry.ast, x), rel=1e-12, abs=1e-15)


def test_get_reference():
    assert get_reference("I1") is REGISTRY["I1"]
    with pytest.raises(DomainError):
        get_reference("I2")


def test_verify_entry_reports_mismatch():
    entry = REGISTRY["const2"]
    wrong = type(entry)(
        name="wrong",
        expr=entry.expr,
        interval=entry.interval,
        exact_mp=entry.exact_mp + 1,
        integrand=entry.integrand,
    )
    report = verify_entry(wrong)
    assert report["status"] == "error"
    assert "error_message" in report
