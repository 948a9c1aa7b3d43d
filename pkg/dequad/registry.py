"""Integrales de referencia con valor exacto conocido.

Cada entrada lleva el texto de la expresión, un integrando estable escrito
sobre las distancias a los extremos y el valor exacto con 50 dígitos
(mpmath). ``verify_registry`` contrasta ese valor con una cuadratura
multiprecisión de la expresión.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import mpmath

from .engine import Integrand
from .errors import DomainError
from .expr import MPMATH, ExprAst, evaluate, parse
from .transform import Interval

logger = logging.getLogger(__name__)

EXACT_DPS = 50

# Con h0 = 0.7 dos niveles seguidos quedan dentro de la ventana del ajuste
# del orden de convergencia
STUDY_H0 = 0.7


@dataclass(frozen=True)
class ReferenceIntegral:
    """Integral de referencia.

    Attributes:
        name: Identificador corto (se usa en la CLI).
        expr: Integrando en la gramática de ``dequad.expr``.
        interval: Intervalo de integración.
        exact_mp: Valor exacto con ``EXACT_DPS`` dígitos.
        integrand: Versión estable cerca de los extremos.
        c_nominal: Constante de decaimiento de referencia, si se conoce.
        h0: Paso inicial de las ejecuciones sobre esta integral.
        pieces: Subintervalos de la comprobación multiprecisión.
        description: Texto libre.
    """

    name: str
    expr: str
    interval: Interval
    exact_mp: Any
    integrand: Integrand = field(repr=False)
    c_nominal: float | None = None
    h0: float = 1.0
    pieces: int = 1
    description: str = ""

    @property
    def exact(self) -> float:
        return float(self.exact_mp)

    @functools.cached_property
    def ast(self) -> ExprAst:
        return parse(self.expr)


# ============================================================================
# INTEGRANDOS ESTABLES
# ============================================================================


def _const2(x: float, dist_a: float, dist_b: float) -> float:
    return 1.0


def _invsqrt(x: float, dist_a: float, dist_b: float) -> float:
    # En (−1, 1): 1 − x² = (1 + x)(1 − x) = dist_a·dist_b
    return 1.0 / math.sqrt(dist_a * dist_b)


def _sqrt_sing(x: float, dist_a: float, dist_b: float) -> float:
    return math.sqrt(dist_a * dist_b)


def _log_sing(x: float, dist_a: float, dist_b: float) -> float:
    # En (0, 1) dist_a = x sin pérdida cerca de 0
    return -math.log(dist_a)


def _i1(x: float, dist_a: float, dist_b: float) -> float:
    return math.exp(-20.0 * dist_b) * math.sin(256.0 * x)


def _i1_exact():
    s, c = mpmath.sin(256), mpmath.cos(256)
    return (20 * s - 256 * c + 256 * mpmath.exp(-20)) / 65936


def _build() -> dict[str, ReferenceIntegral]:
    with mpmath.workdps(EXACT_DPS):
        entries = [
            ReferenceIntegral(
                name="const2",
                expr="1",
                interval=Interval(-1.0, 1.0),
                exact_mp=mpmath.mpf(2),
                integrand=_const2,
                c_nominal=math.pi / 2,
                h0=STUDY_H0,
                description="Constante 1 en (−1, 1)",
            ),
            ReferenceIntegral(
                name="invsqrt",
                expr="1/sqrt(1-x^2)",
                interval=Interval(-1.0, 1.0),
                exact_mp=+mpmath.pi,
                integrand=_invsqrt,
                c_nominal=math.pi / 4,
                h0=STUDY_H0,
                description="Singularidad 1/√ en ambos extremos",
            ),
            ReferenceIntegral(
                name="sqrt_sing",
                expr="sqrt(1-x^2)",
                interval=Interval(-1.0, 1.0),
                exact_mp=mpmath.pi / 2,
                integrand=_sqrt_sing,
                c_nominal=3 * math.pi / 4,
                h0=STUDY_H0,
                description="Derivada singular en ambos extremos",
            ),
            ReferenceIntegral(
                name="log_sing",
                expr="log(1/x)",
                interval=Interval(0.0, 1.0),
                exact_mp=mpmath.mpf(1),
                integrand=_log_sing,
                c_nominal=math.pi / 2,
                h0=STUDY_H0,
                description="Singularidad logarítmica en 0",
            ),
            ReferenceIntegral(
                name="I1",
                expr="exp(20*(x-1))*sin(256*x)",
                interval=Interval(0.0, 1.0),
                exact_mp=_i1_exact(),
                integrand=_i1,
                c_nominal=2.0,
                pieces=32,
                description="Integrando oscilatorio del experimento de referencia",
            ),
        ]
    return {entry.name: entry for entry in entries}


REGISTRY: dict[str, ReferenceIntegral] = _build()


def get_reference(name: str) -> ReferenceIntegral:
    """Busca una integral por nombre.

    Raises:
        DomainError: si el nombre no está registrado.
    """
    try:
        return REGISTRY[name]
    except KeyError:
        known = ", ".join(REGISTRY)
        raise DomainError(f"Integral desconocida '{name}' (disponibles: {known})") from None


# ============================================================================
# COMPROBACIÓN MULTIPRECISIÓN
# ============================================================================


def _mp_integrand(ast: ExprAst):
    def f(x):
        try:
            return evaluate(ast, x, MPMATH)
        except ZeroDivisionError:
            # Nodo que redondea sobre una singularidad del extremo
            return mpmath.mpf(0)

    return f


def verify_entry(entry: ReferenceIntegral, dps: int = 60, rel_tol: float = 1e-25) -> dict:
    """Cuadratura mpmath de ``entry.expr`` frente a ``entry.exact_mp``.

    Returns:
        dict: status ("success" o "error"), error relativo y valor obtenido.
    """
    try:
        with mpmath.workdps(dps):
            iv = entry.interval
            points = mpmath.linspace(mpmath.mpf(iv.a), mpmath.mpf(iv.b), entry.pieces + 1)
            value = mpmath.quad(_mp_integrand(entry.ast), points)
            exact = +entry.exact_mp
            rel_error = abs(value - exact) / abs(exact)
            text = mpmath.nstr(value, 30)
    except Exception as e:
        return {"name": entry.name, "status": "error", "error_message": str(e)}
    if rel_error <= rel_tol:
        return {
            "name": entry.name,
            "status": "success",
            "rel_error": float(rel_error),
            "result": text,
        }
    return {
        "name": entry.name,
        "status": "error",
        "rel_error": float(rel_error),
        "error_message": f"Valor exacto de '{entry.name}' no confirmado ({float(rel_error):.3g})",
    }


def verify_registry(dps: int = 60, rel_tol: float = 1e-25) -> list[dict]:
    """Comprueba todas las entradas del registro."""
    report = [verify_entry(entry, dps, rel_tol) for entry in REGISTRY.values()]
    for item in report:
        if item["status"] != "success":
            logger.warning(f"registro: {item['name']}: {item['error_message']}")
    return report


__all__ = [
    "ReferenceIntegral",
    "REGISTRY",
    "get_reference",
    "verify_entry",
    "verify_registry",
]
