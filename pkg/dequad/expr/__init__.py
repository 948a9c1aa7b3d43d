"""
Expresiones en una variable para integrandos de la línea de comandos.

Módulos:
- lexer: tokens con desplazamientos en bytes
- nodes: árbol sintáctico y ``to_source``
- parser: analizador descendente recursivo
- evaluate: evaluación en binary64 (numpy) o con mpmath

Uso rápido:
    from dequad.expr import parse, evaluate

    ast = parse("exp(20*(x-1))*sin(256*x)")
    evaluate(ast, 0.5)
"""

from .evaluate import FLOAT, MPMATH, Backend, compile_integrand, evaluate
from .lexer import Token, TokenKind, tokenize
from .nodes import (
    CONSTANTS,
    FUNCTIONS,
    Binary,
    Call,
    Constant,
    ExprAst,
    Number,
    Unary,
    Variable,
    to_source,
)
from .parser import parse

__all__ = [
    # Árbol
    "ExprAst",
    "Number",
    "Variable",
    "Constant",
    "Unary",
    "Binary",
    "Call",
    "FUNCTIONS",
    "CONSTANTS",
    # Operaciones
    "tokenize",
    "Token",
    "TokenKind",
    "parse",
    "to_source",
    "evaluate",
    "compile_integrand",
    "Backend",
    "FLOAT",
    "MPMATH",
]
