"""Suma compensada con transformaciones libres de error.

El acumulador guarda la suma como un par no evaluado (s, t) con |t| por
debajo de medio ulp de s, al estilo del ``Accumulator`` de GeographicLib.
El resultado depende solo del orden en que se añaden los términos.
"""

from __future__ import annotations

from collections.abc import Iterable


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Devuelve (s, e) con s = fl(a + b) y a + b = s + e exactamente."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


class CompensatedSum:
    """Acumulador de doble palabra.

    Uso rápido:
        acc = CompensatedSum()
        for term in terms:
            acc.add(term)
        total = acc.value
    """

    __slots__ = ("_s", "_t")

    def __init__(self, value: float = 0.0):
        self._s = float(value)
        self._t = 0.0

    def add(self, y: float) -> None:
        y, u = two_sum(y, self._t)
        self._s, self._t = two_sum(y, self._s)
        # Si s se anula, el residuo u pasa a ser la parte principal
        if self._s == 0.0:
            self._s = u
        else:
            self._t += u

    def extend(self, values: Iterable[float]) -> None:
        for y in values:
            self.add(y)

    @property
    def value(self) -> float:
        return self._s + self._t

    def __repr__(self) -> str:
        return f"CompensatedSum({self.value!r})"


__all__ = ["two_sum", "CompensatedSum"]
