"""Estudios de convergencia y formato de salida (texto, JSON, CSV)."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .engine import DEFAULT_ENGINE, Integrand, TanhSinhEngine
from .error_model import fit_estimate, global_bound, h0_limit
from .errors import FitFailed
from .transform import Interval

logger = logging.getLogger(__name__)

# Filas que entran en el ajuste del orden de convergencia
ORDER_FIT_WINDOW = (1e-12, 1e-2)

# Cola del plano t donde se ajusta c para comparar con la cota
_TAIL = np.linspace(3.0, 6.0, 25)
ENVELOPE_T_SAMPLES = np.concatenate([-_TAIL[::-1], _TAIL])
ENVELOPE_MAX_RESIDUAL = 0.1


@dataclass(frozen=True, slots=True)
class ConvergenceRow:
    """Fila de un estudio de convergencia."""

    level: int
    h: float
    evals: int
    value: float
    abs_error: float | None = None
    bound: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def convergence_study(
    f: Integrand,
    iv: Interval,
    levels: int,
    h0: float = 1.0,
    tol: float = 1e-15,
    exact: float | None = None,
    c: float | None = None,
    engine: TanhSinhEngine = DEFAULT_ENGINE,
) -> list[ConvergenceRow]:
    """Calcula ``levels`` niveles de refinamiento (0..levels−1).

    Args:
        f: Integrando.
        iv: Intervalo.
        levels: Número de filas.
        h0: Paso inicial.
        tol: Tolerancia de truncamiento.
        exact: Valor exacto, para la columna abs_error.
        c: Constante de decaimiento, para la columna bound.
        engine: Motor a usar.

    Returns:
        list[ConvergenceRow]: una fila por nivel.
    """
    rows = []
    for est in engine.refine(f, iv, h0, levels - 1, tol):
        rows.append(
            ConvergenceRow(
                level=est.level,
                h=est.h,
                evals=est.evals,
                value=est.value,
                abs_error=None if exact is None else abs(est.value - exact),
                bound=None if c is None else global_bound(est.h, c),
            )
        )
    return rows


def fit_order(rows: Sequence[ConvergenceRow]) -> float | None:
    """Pendiente de log|error| frente a log h en la ventana [1e-12, 1e-2].

    Returns:
        float | None: orden p, o None con menos de dos filas en la ventana.
    """
    lo, hi = ORDER_FIT_WINDOW
    points = [
        (row.h, row.abs_error)
        for row in rows
        if row.abs_error is not None and lo <= row.abs_error <= hi
    ]
    if len(points) < 2:
        logger.info(f"orden no ajustable: {len(points)} filas en la ventana")
        return None
    h, err = np.array(points).T
    slope, _ = np.polyfit(np.log(h), np.log(err), 1)
    return float(slope)


def envelope_study(
    f: Integrand,
    iv: Interval,
    exact: float,
    levels: int = 8,
    h0: float = 1.0,
    tol: float = 1e-15,
    engine: TanhSinhEngine = DEFAULT_ENGINE,
    t_samples: Sequence[float] = ENVELOPE_T_SAMPLES,
) -> dict:
    """Comprueba |I − I_h| <= global_bound(h, c) con la c ajustada.

    Solo se usan los niveles con h < h0_limit(c) y solo si el ajuste de c
    tiene residuo menor que ``ENVELOPE_MAX_RESIDUAL``.

    Returns:
        dict: status "success", "error" (hay niveles que violan la cota) o
        "skipped" (ajuste de c no fiable), con c, residual, niveles
        comprobados y niveles que violan la cota.
    """
    try:
        fit = fit_estimate(f, iv, t_samples)
    except FitFailed as e:
        logger.info(f"envolvente: sin ajuste de c ({e})")
        return {"status": "skipped", "error_message": str(e)}
    if fit.residual >= ENVELOPE_MAX_RESIDUAL:
        logger.info(f"envolvente: residuo {fit.residual:.3g} demasiado alto")
        return {"status": "skipped", "c": fit.c, "residual": fit.residual}

    limit = h0_limit(fit.c)
    rows = convergence_study(f, iv, levels, h0, tol, exact, fit.c, engine)
    checked = [row for row in rows if row.h < limit]
    violations = []
    for row in checked:
        if row.abs_error > row.bound:
            violations.append(row.level)
            logger.warning(
                f"envolvente violada en nivel {row.level}: "
                f"|error|={row.abs_error!r} > cota={row.bound!r} (c={fit.c!r})"
            )
    return {
        "status": "error" if violations else "success",
        "c": fit.c,
        "residual": fit.residual,
        "checked": [row.level for row in checked],
        "violations": violations,
    }


# ============================================================================
# FORMATO
# ============================================================================


def format_value(value: Any) -> str:
    """Texto: científica con 5 cifras significativas."""
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "sí" if value else "no"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.4e}"
    return str(value)


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    # str(float) es la repr más corta que reproduce el valor
    return str(value)


def _csv(columns: Sequence[str], records: Sequence[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([_csv_value(record.get(col)) for col in columns])
    return buffer.getvalue()


def render_table(
    records: Sequence[Mapping[str, Any]],
    columns: Sequence[str],
    fmt: str,
    headers: Mapping[str, str] | None = None,
) -> str:
    """Serializa una lista de registros.

    Args:
        records: Filas como diccionarios.
        columns: Claves a mostrar, en orden.
        fmt: "text", "json" o "csv".
        headers: Etiquetas de columna para el modo texto.
    """
    if fmt == "json":
        return json.dumps([{col: rec.get(col) for col in columns} for rec in records])
    if fmt == "csv":
        return _csv(columns, records)
    headers = headers or {}
    lines = [" | ".join(headers.get(col, col) for col in columns)]
    lines += [" | ".join(format_value(rec.get(col)) for col in columns) for rec in records]
    return "\n".join(lines) + "\n"


def render_mapping(
    data: Mapping[str, Any], fmt: str, labels: Mapping[str, str] | None = None
) -> str:
    """Serializa un único registro ("etiqueta = valor" en modo texto)."""
    if fmt == "json":
        return json.dumps(dict(data))
    if fmt == "csv":
        return _csv(list(data), [data])
    labels = labels or {}
    return "".join(
        f"{labels.get(key, key)} = {format_value(value)}\n" for key, value in data.items()
    )


__all__ = [
    "ConvergenceRow",
    "ORDER_FIT_WINDOW",
    "convergence_study",
    "fit_order",
    "envelope_study",
    "ENVELOPE_T_SAMPLES",
    "format_value",
    "render_table",
    "render_mapping",
]
