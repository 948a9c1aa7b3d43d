"""Excepciones del paquete dequad.

Todas heredan de ``DequadError`` y, cuando tiene sentido, también de la
excepción estándar equivalente (``ValueError``, ``RuntimeError``...), para
que el código cliente pueda capturarlas de cualquiera de las dos formas.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .engine import QuadratureResult


class DequadError(Exception):
    """Error base de dequad."""


class DomainError(DequadError, ValueError):
    """Argumento fuera de su dominio (h <= 0, c <= 0, a >= b, tol <= 0...)."""


class NonFiniteIntegrand(DequadError, ArithmeticError):
    """El integrando devolvió NaN o infinito en un nodo interior.

    Args:
        k: Índice del nodo en el nivel actual.
        t: Abscisa en el plano transformado (k·h).
        abscissa: Punto del intervalo original donde se evaluó.
        value: Valor devuelto por el integrando.
    """

    def __init__(self, k: int, t: float, abscissa: float, value: Any):
        self.k = k
        self.t = t
        self.abscissa = abscissa
        self.value = value
        super().__init__(
            f"Integrando no finito en k={k} (t={t!r}, x={abscissa!r}): {value!r}"
        )


class TruncationOverrun(DequadError, RuntimeError):
    """La búsqueda de truncamiento superó el índice máximo permitido."""

    def __init__(self, side: int, limit: int, h: float, tol: float):
        self.side = side
        self.limit = limit
        self.h = h
        self.tol = tol
        lado = "negativo" if side < 0 else "positivo"
        super().__init__(
            f"Truncamiento sin cerrar en el lado {lado} tras {limit} índices "
            f"(h={h!r}, tol={tol!r})"
        )


class NoConvergence(DequadError, RuntimeError):
    """No se alcanzó la tolerancia pedida antes del nivel máximo.

    El mejor resultado disponible queda en ``result``.
    """

    def __init__(self, result: QuadratureResult, tol: float):
        self.result = result
        self.tol = tol
        super().__init__(
            f"Sin convergencia a tol={tol!r} tras {result.level} niveles "
            f"(valor={result.value!r}, error estimado={result.est_error!r})"
        )


class FitFailed(DequadError, ValueError):
    """El ajuste de la constante de decaimiento c no es fiable."""

    def __init__(self, message: str, n_valid: int = 0, residual: float | None = None):
        self.n_valid = n_valid
        self.residual = residual
        super().__init__(message)


class ParseError(DequadError, ValueError):
    """Error de sintaxis en una expresión.

    Args:
        offset: Desplazamiento en bytes (UTF-8) donde se detectó el error.
        expected: Descripción de lo que se esperaba en esa posición.
    """

    def __init__(self, offset: int, expected: str, message: str | None = None):
        self.offset = offset
        self.expected = expected
        super().__init__(message or f"posición {offset}: se esperaba {expected}")


class UnknownFunction(ParseError):
    """Llamada a una función fuera del conjunto permitido."""

    def __init__(self, offset: int, name: str):
        self.name = name
        super().__init__(
            offset,
            "una función conocida",
            f"posición {offset}: función desconocida '{name}'",
        )


class UsageError(DequadError):
    """Argumentos de línea de comandos inválidos."""


__all__ = [
    "DequadError",
    "DomainError",
    "NonFiniteIntegrand",
    "TruncationOverrun",
    "NoConvergence",
    "FitFailed",
    "ParseError",
    "UnknownFunction",
    "UsageError",
]
