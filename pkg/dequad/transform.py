"""Transformación tanh-sinh y generación de nodos.

φ(t) = tanh((π/2)·sinh t) lleva la recta real al intervalo (−1, 1) y su
derivada φ′(t) = (π/2)·cosh t·sech²((π/2)·sinh t) decae doblemente
exponencial. Todo se calcula en binary64 sin desbordamientos: sech² se
evalúa en la forma 4e^{−2|u|}/(1+e^{−2|u|})² y la cantidad 1 − x² se
expone aparte, porque cerca de los extremos x redondea a ±1 mucho antes de
que los pesos se anulen.

Las funciones son puras y se pueden llamar desde varios hilos.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

HALF_PI = 0.5 * math.pi

# Mayor valor representable por debajo de 1; φ nunca devuelve ±1 exacto
_SATURATED = math.nextafter(1.0, 0.0)


# ============================================================================
# TIPOS
# ============================================================================


@dataclass(frozen=True, slots=True)
class Interval:
    """Intervalo finito (a, b) con a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"Extremos no finitos: ({self.a!r}, {self.b!r})")
        if not self.a < self.b:
            raise DomainError(f"Se requiere a < b, recibido ({self.a!r}, {self.b!r})")

    @property
    def half_width(self) -> float:
        return 0.5 * self.b - 0.5 * self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * self.a + 0.5 * self.b


@dataclass(frozen=True, slots=True)
class TransformNode:
    """Nodo del plano t.

    Attributes:
        k: Índice entero del nodo.
        t: k·h.
        x: φ(t), en (−1, 1).
        w: φ′(t); 0.0 cuando ya no es representable.
        one_minus_x2: 1 − x² calculado como sech²(u), sin cancelación.
    """

    k: int
    t: float
    x: float
    w: float
    one_minus_x2: float


@dataclass(frozen=True, slots=True)
class MappedNode:
    """Nodo llevado al intervalo (a, b)."""

    abscissa: float
    weight: float
    dist_a: float
    dist_b: float

    @property
    def collapsed(self) -> bool:
        """El nodo ya no aporta: peso o distancia al extremo nulos."""
        return self.weight == 0.0 or self.dist_a == 0.0 or self.dist_b == 0.0


# ============================================================================
# FUNCIONES DE LA TRANSFORMACIÓN
# ============================================================================


def _u(abs_t: float) -> float:
    """(π/2)·sinh|t|, con +∞ en lugar de OverflowError."""
    try:
        return HALF_PI * math.sinh(abs_t)
    except OverflowError:
        return math.inf


def _sech2(u: float) -> float:
    e = math.exp(-2.0 * abs(u))
    return 4.0 * e / ((1.0 + e) * (1.0 + e))


def phi(t: float) -> float:
    """Calcula x = tanh((π/2)·sinh t).

    Impar bit a bit; satura en ±(1 − 2⁻⁵³) en lugar de devolver ±1.

    Args:
        t: Abscisa finita del plano transformado.

    Returns:
        float: valor en (−1, 1).
    """
    x = math.tanh(_u(abs(t)))
    return math.copysign(min(x, _SATURATED), t)


def phi_prime(t: float) -> float:
    """Calcula φ′(t) = (π/2)·cosh t·sech²((π/2)·sinh t), par bit a bit."""
    a = abs(t)
    s = _sech2(_u(a))
    if s == 0.0:
        return 0.0
    return HALF_PI * math.cosh(a) * s


def node_at(k: int, t: float) -> TransformNode:
    """Nodo en una abscisa t ya calculada (t = k·h)."""
    a = abs(t)
    u = _u(a)
    s = _sech2(u)
    x = math.copysign(min(math.tanh(u), _SATURATED), t)
    w = HALF_PI * math.cosh(a) * s if s > 0.0 else 0.0
    return TransformNode(k=k, t=t, x=x, w=w, one_minus_x2=s)


def node(k: int, h: float) -> TransformNode:
    """Genera el nodo k de la malla de paso h.

    Args:
        k: Índice entero (puede ser negativo).
        h: Paso de la malla, h > 0.

    Returns:
        TransformNode: nodo con t = k·h.

    Raises:
        DomainError: si h no es positivo y finito.
    """
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"El paso h debe ser positivo y finito: {h!r}")
    return node_at(k, k * h)


def map_affine(nd: TransformNode, iv: Interval) -> MappedNode:
    """Lleva un nodo de (−1, 1) a (a, b).

    Las distancias a los extremos salen de one_minus_x2:
    1 − x = (1 − x²)/(1 + x) si x ≥ 0 y 1 + x = (1 − x²)/(1 − x) si x < 0.
    La abscisa se forma desde el extremo más cercano.

    Args:
        nd: Nodo de la transformación.
        iv: Intervalo de destino.

    Returns:
        MappedNode: abscisa, peso y distancias a a y b.
    """
    half = iv.half_width
    x = nd.x
    if x >= 0.0:
        one_plus = 1.0 + x
        one_minus = nd.one_minus_x2 / one_plus
    else:
        one_minus = 1.0 - x
        one_plus = nd.one_minus_x2 / one_minus
    dist_a = half * one_plus
    dist_b = half * one_minus
    # Puede coincidir con un extremo aunque la distancia siga siendo > 0
    abscissa = iv.a + dist_a if x < 0.0 else iv.b - dist_b
    return MappedNode(
        abscissa=abscissa, weight=half * nd.w, dist_a=dist_a, dist_b=dist_b
    )


def underflow_index(h: float) -> int:
    """Primer k ≥ 0 con φ′(k·h) == 0."""
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"El paso h debe ser positivo y finito: {h!r}")
    lo, hi = 0, 1
    while phi_prime(hi * h) > 0.0:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if phi_prime(mid * h) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


__all__ = [
    "HALF_PI",
    "Interval",
    "TransformNode",
    "MappedNode",
    "phi",
    "phi_prime",
    "node",
    "node_at",
    "map_affine",
    "underflow_index",
]
