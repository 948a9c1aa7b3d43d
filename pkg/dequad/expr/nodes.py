"""Árbol sintáctico de las expresiones en una variable x."""

from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "abs")
CONSTANTS = ("pi", "e")
VARIABLE = "x"
BINARY_OPS = ("+", "-", "*", "/", "^")
_ADDITIVE = ("+", "-")
_MULTIPLICATIVE = ("*", "/")


@dataclass(frozen=True, slots=True)
class Number:
    value: float


@dataclass(frozen=True, slots=True)
class Variable:
    name: str = VARIABLE


@dataclass(frozen=True, slots=True)
class Constant:
    name: str


@dataclass(frozen=True, slots=True)
class Unary:
    op: str
    operand: ExprAst


@dataclass(frozen=True, slots=True)
class Binary:
    op: str
    left: ExprAst
    right: ExprAst


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    arg: ExprAst


ExprAst = Number | Variable | Constant | Unary | Binary | Call


def to_source(ast: ExprAst) -> str:
    """Imprime el árbol con paréntesis explícitos; ``parse`` lo reconstruye.

    Raises:
        ValueError: si contiene un número no finito (no tiene literal).
    """
    match ast:
        case Number(value):
            if not math.isfinite(value):
                raise ValueError(f"Número sin representación literal: {value!r}")
            text = repr(float(value))
            return f"({text})" if text.startswith("-") else text
        case Variable(name):
            return name
        case Constant(name):
            return name
        case Unary(op, operand):
            return f"({op}{to_source(operand)})"
        case Binary(op, _, _) if op in _ADDITIVE or op in _MULTIPLICATIVE:
            # Una cadena del mismo nivel de precedencia va en un solo paréntesis
            group = _ADDITIVE if op in _ADDITIVE else _MULTIPLICATIVE
            parts: list[str] = []
            current: ExprAst = ast
            while isinstance(current, Binary) and current.op in group:
                parts.append(f" {current.op} {to_source(current.right)}")
                current = current.left
            return "(" + to_source(current) + "".join(reversed(parts)) + ")"
        case Binary(op, left, right):
            return f"({to_source(left)} {op} {to_source(right)})"
        case Call(name, arg):
            return f"{name}({to_source(arg)})"
    raise TypeError(f"Nodo desconocido: {ast!r}")


__all__ = [
    "FUNCTIONS",
    "CONSTANTS",
    "VARIABLE",
    "BINARY_OPS",
    "Number",
    "Variable",
    "Constant",
    "Unary",
    "Binary",
    "Call",
    "ExprAst",
    "to_source",
]
