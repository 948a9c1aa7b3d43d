"""Análisis léxico de expresiones.

Los desplazamientos de los tokens se dan en bytes UTF-8 del texto original.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from ..errors import ParseError

NUMBER_RE = re.compile(r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")

# U+2212 (signo menos tipográfico) se acepta como '-'
_MINUS_SIGNS = ("-", "−")


class TokenKind(enum.Enum):
    NUMBER = "número"
    NAME = "nombre"
    PLUS = "'+'"
    MINUS = "'-'"
    STAR = "'*'"
    SLASH = "'/'"
    CARET = "'^'"
    LPAREN = "'('"
    RPAREN = "')'"
    END = "fin de la expresión"


_SINGLE = {
    "+": TokenKind.PLUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "^": TokenKind.CARET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
}


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    offset: int


def decode_source(src: str | bytes) -> tuple[str, str]:
    """Devuelve (texto, manejador de errores para volver a bytes)."""
    if isinstance(src, (bytes, bytearray)):
        return bytes(src).decode("utf-8", "surrogateescape"), "surrogateescape"
    return src, "surrogatepass"


def tokenize(src: str | bytes) -> list[Token]:
    """Divide la expresión en tokens; el último siempre es END.

    Raises:
        ParseError: ante un carácter que no empieza ningún token.
    """
    text, errors = decode_source(src)
    tokens: list[Token] = []
    i = 0
    offset = 0
    n = len(text)
    while i < n:
        ch = text[i]
        start = i
        if ch.isspace():
            i += 1
        elif number := NUMBER_RE.match(text, i):
            tokens.append(Token(TokenKind.NUMBER, number.group(), offset))
            i = number.end()
        elif name := NAME_RE.match(text, i):
            tokens.append(Token(TokenKind.NAME, name.group(), offset))
            i = name.end()
        elif ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, offset))
            i += 1
        elif ch in _MINUS_SIGNS:
            tokens.append(Token(TokenKind.MINUS, "-", offset))
            i += 1
        else:
            raise ParseError(offset, "un número, un nombre, un operador o un paréntesis")
        offset += len(text[start:i].encode("utf-8", errors))
    tokens.append(Token(TokenKind.END, "", offset))
    return tokens


__all__ = ["TokenKind", "Token", "tokenize", "decode_source", "NUMBER_RE", "NAME_RE"]
