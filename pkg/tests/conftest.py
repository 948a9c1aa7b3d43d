import numpy as np
import pytest

from dequad.registry import verify_registry


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Aísla las pruebas de un .env local."""
    for name in (
        "DEQUAD_TOL",
        "DEQUAD_H0",
        "DEQUAD_MAX_LEVEL",
        "DEQUAD_WORKERS",
        "DEQUAD_STUDY_TOL",
        "DEQUAD_FORMAT",
        "DEQUAD_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def verified_registry():
    """Comprobación multiprecisión del registro antes de usarlo."""
    report = verify_registry()
    failures = [item for item in report if item["status"] != "success"]
    if failures:
        pytest.fail(f"Valores exactos del registro sin confirmar: {failures}")
    return report


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)

