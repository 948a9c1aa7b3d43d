import logging

import pytest

from dequad.config import Settings, configure_logging, get_settings
from dequad.errors import DomainError


def test_defaults():
    settings = get_settings()
    assert settings == Settings()
    assert settings.tol == 1e-10
    assert settings.max_level == 12
    assert settings.output_format == "text"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("DEQUAD_TOL", "1e-8")
    monkeypatch.setenv("DEQUAD_H0", "0.5")
    monkeypatch.setenv("DEQUAD_MAX_LEVEL", "9")
    monkeypatch.setenv("DEQUAD_WORKERS", "4")
    monkeypatch.setenv("DEQUAD_FORMAT", "CSV")
    monkeypatch.setenv("DEQUAD_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.tol == 1e-8
    assert settings.h0 == 0.5
    assert settings.max_level == 9
    assert settings.workers == 4
    assert settings.output_format == "csv"
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize(
    "name, value",
    [
        ("DEQUAD_TOL", "abc"),
        ("DEQUAD_TOL", "0"),
        ("DEQUAD_TOL", "2"),
        ("DEQUAD_H0", "-1"),
        ("DEQUAD_MAX_LEVEL", "1.5"),
        ("DEQUAD_MAX_LEVEL", "0"),
        ("DEQUAD_WORKERS", "0"),
        ("DEQUAD_STUDY_TOL", "1"),
        ("DEQUAD_FORMAT", "xml"),
    ],
)
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(DomainError):
        get_settings()


def test_configure_logging_levels():
    configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    configure_logging("inexistente")
    assert logging.getLogger().level == logging.WARNING
    configure_logging(logging.INFO)
    assert logging.getLogger().level == logging.INFO
