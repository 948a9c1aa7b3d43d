"""Evaluación de expresiones.

Con el backend ``FLOAT`` la aritmética es binary64 de numpy con los avisos
de coma flotante silenciados: 0^0 = 1, base negativa con exponente no
entero da NaN, el desbordamiento da ±∞. El backend ``MPMATH`` evalúa el
mismo árbol con la precisión activa de mpmath.
"""

from __future__ import annotations

import math
import operator
import threading
from collections.abc import Callable, Mapping
from contextlib import AbstractContextManager, nullcontext
from dataclasses import dataclass
from typing import Any

import mpmath
import numpy as np

from ..transform import Interval
from .nodes import Binary, Call, Constant, ExprAst, Number, Unary, Variable


@dataclass(frozen=True)
class Backend:
    """Tabla de operaciones con la que se recorre el árbol."""

    name: str
    number: Callable[[float], Any]
    constants: Mapping[str, Callable[[], Any]]
    functions: Mapping[str, Callable[[Any], Any]]
    binary: Mapping[str, Callable[[Any, Any], Any]]
    negate: Callable[[Any], Any]
    context: Callable[[], AbstractContextManager]


FLOAT = Backend(
    name="float64",
    number=np.float64,
    constants={"pi": lambda: np.float64(np.pi), "e": lambda: np.float64(np.e)},
    functions={
        "sin": np.sin,
        "cos": np.cos,
        "tan": np.tan,
        "exp": np.exp,
        "log": np.log,
        "sqrt": np.sqrt,
        "sinh": np.sinh,
        "cosh": np.cosh,
        "tanh": np.tanh,
        "abs": np.abs,
    },
    binary={
        "+": np.add,
        "-": np.subtract,
        "*": np.multiply,
        "/": np.divide,
        "^": np.power,
    },
    negate=np.negative,
    context=lambda: np.errstate(all="ignore"),
)

MPMATH = Backend(
    name="mpmath",
    number=mpmath.mpf,
    constants={"pi": lambda: +mpmath.mp.pi, "e": lambda: +mpmath.mp.e},
    functions={
        "sin": mpmath.sin,
        "cos": mpmath.cos,
        "tan": mpmath.tan,
        "exp": mpmath.exp,
        "log": mpmath.log,
        "sqrt": mpmath.sqrt,
        "sinh": mpmath.sinh,
        "cosh": mpmath.cosh,
        "tanh": mpmath.tanh,
        "abs": mpmath.fabs,
    },
    binary={
        "+": operator.add,
        "-": operator.sub,
        "*": operator.mul,
        "/": operator.truediv,
        "^": mpmath.power,
    },
    negate=operator.neg,
    context=nullcontext,
)


# Operadores asociativos por la izquierda; sus cadenas se recorren sin recursión
_CHAIN_OPS = frozenset("+-*/")


def _eval_chain(node: Binary, x: Any, backend: Backend) -> Any:
    links: list[Binary] = []
    current: ExprAst = node
    while isinstance(current, Binary) and current.op in _CHAIN_OPS:
        links.append(current)
        current = current.left
    value = _eval(current, x, backend)
    for link in reversed(links):
        value = backend.binary[link.op](value, _eval(link.right, x, backend))
    return value


def _eval(node: ExprAst, x: Any, backend: Backend) -> Any:
    match node:
        case Number(value):
            return backend.number(value)
        case Variable():
            return x
        case Constant(name):
            return backend.constants[name]()
        case Unary(_, operand):
            return backend.negate(_eval(operand, x, backend))
        case Binary(op, _, _) if op in _CHAIN_OPS:
            return _eval_chain(node, x, backend)
        case Binary(op, left, right):
            return backend.binary[op](_eval(left, x, backend), _eval(right, x, backend))
        case Call(name, arg):
            return backend.functions[name](_eval(arg, x, backend))
    raise TypeError(f"Nodo desconocido: {node!r}")


def evaluate(ast: ExprAst, x: Any, backend: Backend = FLOAT) -> Any:
    """Evalúa el árbol en x.

    Args:
        ast: Árbol devuelto por ``parse``.
        x: Valor de la variable.
        backend: ``FLOAT`` (por defecto) o ``MPMATH``.

    Returns:
        float con ``FLOAT``; mpf con ``MPMATH``.
    """
    with backend.context():
        value = _eval(ast, backend.number(x), backend)
    if backend is FLOAT:
        return float(value)
    return value


# Distancia relativa al extremo por debajo de la cual la abscisa binary64
# conserva menos de 33 bits de la distancia
NEAR_ENDPOINT = 2.0**-20
_GUARD_BITS = 32
# La precisión de mpmath es global al proceso
_MP_LOCK = threading.Lock()


def _evaluate_near(ast: ExprAst, end: float, offset: float) -> float:
    gap = max(0, math.frexp(end)[1] - math.frexp(offset)[1])
    with _MP_LOCK, mpmath.workprec(53 + gap + _GUARD_BITS):
        try:
            value = evaluate(ast, mpmath.mpf(end) + mpmath.mpf(offset), MPMATH)
        except (ZeroDivisionError, ValueError, OverflowError):
            return math.nan
    if isinstance(value, mpmath.mpc):
        return math.nan if value.imag else float(value.real)
    return float(value)


def compile_integrand(ast: ExprAst, iv: Interval) -> Callable[[float, float, float], float]:
    """Adapta una expresión a la firma de integrando del motor.

    Lejos de los extremos evalúa en la abscisa binary64. Cuando la distancia
    al extremo más cercano cae por debajo de ``NEAR_ENDPOINT``·|extremo|, la
    abscisa redondeada ya no la representa: la expresión se evalúa con el
    backend ``MPMATH`` en x = a + dist_a (o b − dist_b), con bits de sobra
    para que esa suma sea exacta. Un resultado complejo o una división por
    cero de mpmath dan NaN, como en binary64.

    Args:
        ast: Árbol devuelto por ``parse``.
        iv: Intervalo de integración.

    Returns:
        Callable: integrando f(x, dist_a, dist_b) -> float.
    """

    def integrand(x: float, dist_a: float, dist_b: float) -> float:
        if dist_a <= dist_b:
            end, offset = iv.a, dist_a
        else:
            end, offset = iv.b, -dist_b
        if abs(offset) >= abs(end) * NEAR_ENDPOINT:
            return evaluate(ast, x)
        return _evaluate_near(ast, end, offset)

    return integrand


__all__ = ["Backend", "FLOAT", "MPMATH", "NEAR_ENDPOINT", "evaluate", "compile_integrand"]
