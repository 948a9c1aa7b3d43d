"""Configuración de dequad desde variables de entorno (.env)."""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass

from dotenv import load_dotenv

from .errors import DomainError

# Cargar variables del archivo .env
load_dotenv()

OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class Settings:
    """Valores por defecto de la línea de comandos y del motor."""

    tol: float = 1e-10
    h0: float = 1.0
    max_level: int = 12
    workers: int = 1
    study_tol: float = 1e-15
    output_format: str = "text"
    log_level: str = "WARNING"

    def __post_init__(self):
        if not 0.0 < self.tol < 1.0:
            raise DomainError(f"DEQUAD_TOL fuera de rango: {self.tol!r}")
        if not self.h0 > 0.0:
            raise DomainError(f"DEQUAD_H0 debe ser positivo: {self.h0!r}")
        if self.max_level < 1:
            raise DomainError(f"DEQUAD_MAX_LEVEL debe ser >= 1: {self.max_level!r}")
        if self.workers < 1:
            raise DomainError(f"DEQUAD_WORKERS debe ser >= 1: {self.workers!r}")
        if not 0.0 < self.study_tol < 1.0:
            raise DomainError(f"DEQUAD_STUDY_TOL fuera de rango: {self.study_tol!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError(f"DEQUAD_FORMAT desconocido: {self.output_format!r}")


def _read(name: str, default: str, cast):
    raw = os.getenv(name, default)
    try:
        return cast(raw)
    except ValueError as e:
        raise DomainError(f"{name} inválida: {raw!r}") from e


def get_settings() -> Settings:
    """Construye la configuración a partir del entorno.

    Returns:
        Settings: configuración validada.

    Raises:
        DomainError: si alguna variable no se puede interpretar o está fuera
            de rango.
    """
    return Settings(
        tol=_read("DEQUAD_TOL", "1e-10", float),
        h0=_read("DEQUAD_H0", "1.0", float),
        max_level=_read("DEQUAD_MAX_LEVEL", "12", int),
        workers=_read("DEQUAD_WORKERS", "1", int),
        study_tol=_read("DEQUAD_STUDY_TOL", "1e-15", float),
        output_format=os.getenv("DEQUAD_FORMAT", "text").lower(),
        log_level=os.getenv("DEQUAD_LOG_LEVEL", "WARNING").upper(),
    )


def configure_logging(level: str | int = "WARNING") -> None:
    """Envía el log a stderr; stdout queda reservado para los datos."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


__all__ = ["Settings", "get_settings", "configure_logging", "OUTPUT_FORMATS"]
