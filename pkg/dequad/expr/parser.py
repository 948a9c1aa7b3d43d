"""Analizador descendente recursivo.

Gramática (de menor a mayor precedencia)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-'* power
    power   := primary ('^' unary)?
    primary := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'

'^' es asociativo por la derecha y liga más que el menos unario:
"-x^2" es −(x²) y "2^-1" vale 0.5. No hay multiplicación implícita.
"""

from __future__ import annotations

from collections.abc import Callable

from ..errors import ParseError, UnknownFunction
from .lexer import Token, TokenKind, tokenize
from .nodes import (
    CONSTANTS,
    FUNCTIONS,
    VARIABLE,
    Binary,
    Call,
    Constant,
    ExprAst,
    Number,
    Unary,
    Variable,
)

# Paréntesis, llamadas y exponentes anidados
MAX_NESTING = 64
# Profundidad máxima del árbol resultante; una cadena de + - * / cuenta
# como un solo nivel
MAX_TREE_DEPTH = 200
# Operandos por cadena
MAX_CHAIN_LENGTH = 10_000

_PRIMARY = "un número, 'x', una constante, una función o '('"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0
        self._nesting = 0

    @property
    def _tok(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind is not TokenKind.END:
            self._pos += 1
        return tok

    def _expect(self, kind: TokenKind) -> Token:
        if self._tok.kind is not kind:
            raise ParseError(self._tok.offset, kind.value)
        return self._advance()

    def _enter(self) -> None:
        self._nesting += 1
        if self._nesting > MAX_NESTING:
            raise ParseError(self._tok.offset, "una expresión menos anidada")

    def _leave(self) -> None:
        self._nesting -= 1

    def _node(self, node: ExprAst, depth: int) -> tuple[ExprAst, int]:
        if depth > MAX_TREE_DEPTH:
            raise ParseError(self._tok.offset, "una expresión menos profunda")
        return node, depth

    # Cada regla devuelve (nodo, profundidad del subárbol)

    def parse(self) -> ExprAst:
        node, _ = self._expr()
        if self._tok.kind is not TokenKind.END:
            raise ParseError(self._tok.offset, "un operador o el fin de la expresión")
        return node

    def _chain(
        self, operand: Callable[[], tuple[ExprAst, int]], kinds: tuple[TokenKind, ...]
    ) -> tuple[ExprAst, int]:
        node, depth = operand()
        length = 1
        while self._tok.kind in kinds:
            op = self._advance().text
            length += 1
            if length > MAX_CHAIN_LENGTH:
                raise ParseError(self._tok.offset, "una cadena de operaciones más corta")
            right, rdepth = operand()
            node, depth = Binary(op, node, right), max(depth, rdepth)
        if length == 1:
            return node, depth
        return self._node(node, depth + 1)

    def _expr(self) -> tuple[ExprAst, int]:
        return self._chain(self._term, (TokenKind.PLUS, TokenKind.MINUS))

    def _term(self) -> tuple[ExprAst, int]:
        return self._chain(self._unary, (TokenKind.STAR, TokenKind.SLASH))

    def _unary(self) -> tuple[ExprAst, int]:
        negations = 0
        while self._tok.kind is TokenKind.MINUS:
            self._advance()
            negations += 1
        node, depth = self._power()
        # Un número par de signos se anula
        if negations % 2:
            return self._node(Unary("-", node), depth + 1)
        return node, depth

    def _power(self) -> tuple[ExprAst, int]:
        base, depth = self._primary()
        if self._tok.kind is not TokenKind.CARET:
            return base, depth
        self._advance()
        self._enter()
        exponent, edepth = self._unary()
        self._leave()
        return self._node(Binary("^", base, exponent), max(depth, edepth) + 1)

    def _primary(self) -> tuple[ExprAst, int]:
        tok = self._tok
        if tok.kind is TokenKind.NUMBER:
            self._advance()
            return Number(float(tok.text)), 1
        if tok.kind is TokenKind.LPAREN:
            self._advance()
            self._enter()
            node, depth = self._expr()
            self._leave()
            self._expect(TokenKind.RPAREN)
            return node, depth
        if tok.kind is TokenKind.NAME:
            self._advance()
            name = tok.text
            if self._tok.kind is TokenKind.LPAREN:
                if name not in FUNCTIONS:
                    raise UnknownFunction(tok.offset, name)
                self._advance()
                self._enter()
                arg, depth = self._expr()
                self._leave()
                self._expect(TokenKind.RPAREN)
                return self._node(Call(name, arg), depth + 1)
            if name == VARIABLE:
                return Variable(), 1
            if name in CONSTANTS:
                return Constant(name), 1
            if name in FUNCTIONS:
                raise ParseError(self._tok.offset, f"'(' tras {name}")
            raise ParseError(tok.offset, "'x', 'pi', 'e' o una función")
        raise ParseError(tok.offset, _PRIMARY)


def parse(src: str | bytes) -> ExprAst:
    """Convierte el texto de una expresión en su árbol.

    Args:
        src: Texto (str) o bytes UTF-8 de la expresión.

    Returns:
        ExprAst: árbol sintáctico.

    Raises:
        ParseError: con el desplazamiento en bytes y lo que se esperaba.
        UnknownFunction: si se llama a una función no permitida.
    """
    return _Parser(tokenize(src)).parse()


__all__ = ["parse", "MAX_NESTING", "MAX_TREE_DEPTH", "MAX_CHAIN_LENGTH"]
