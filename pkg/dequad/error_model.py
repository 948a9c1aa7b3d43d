"""Cota a priori O(h²) del error de la regla tanh-sinh.

Se supone que el integrando transformado F(t) = f(φ(t))·φ′(t) decae como
e^{−c·e^{|t|}} para cierta constante c > 0. Con esa hipótesis:

* |F″(t)| <= (c + c²)·e^{2|t| − c·e^{|t|}}
* |I − I_h| <= (h²/3)(1 + c)(e^{−4−c/2} + c/4)

La cota no depende de los índices de truncamiento. El término de la cola
(case1) exige h por debajo de h0_limit(c), la raíz de e^{−ch/2} = 1 − ch/4.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitFailed
from .transform import Interval, map_affine, node_at

logger = logging.getLogger(__name__)

# Ventana de |F| usada al ajustar c
FIT_MIN = 1e-300
FIT_MAX = 1e-2
FIT_MAX_RESIDUAL = 0.5
FIT_MIN_SAMPLES = 4

_EXP_LIMIT = 709.0


def _check(h: float, c: float) -> None:
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"El paso h debe ser positivo y finito: {h!r}")
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"La constante c debe ser positiva y finita: {c!r}")


def _prefactor(h: float, c: float) -> float:
    # (h·h)·(1+c)/3: al dividir h por dos el valor se divide por 4 exactamente
    return h * h * (1.0 + c) / 3.0


def _tail_exp(c: float) -> float:
    return math.exp(-4.0 - 0.5 * c)


# ============================================================================
# COTA GLOBAL
# ============================================================================


def global_bound(h: float, c: float, *, literal: bool = False) -> float:
    """Cota global del error, (h²/3)(1 + c)(e^{−4−c/2} + c/4).

    Args:
        h: Paso de la malla, h > 0.
        c: Constante de decaimiento, c > 0.
        literal: Si es True devuelve el producto de los dos términos tal
            como aparece escrito en la fórmula original,
            h²·(e^{−4}(1+c)/3·e^{−c/2}·(c+c²)/12). Solo para comparar; no es
            una cota válida.

    Returns:
        float: la cota (siempre positiva).

    Raises:
        DomainError: si h <= 0 o c <= 0.
    """
    _check(h, c)
    if literal:
        return h * h * (
            math.exp(-4.0) * (1.0 + c) / 3.0 * math.exp(-0.5 * c) * (c + c * c) / 12.0
        )
    return _prefactor(h, c) * (_tail_exp(c) + 0.25 * c)


def case1_term(h: float, c: float) -> float:
    """Aportación de la cola k >= k0: (e^{−4}(1+c)/3)·e^{−c/2}·h².

    Raises:
        DomainError: si h > h0_limit(c) o los argumentos no son positivos.
    """
    _check(h, c)
    limit = h0_limit(c)
    if h > limit:
        raise DomainError(f"h={h!r} supera h0_limit({c!r})={limit!r}")
    return _prefactor(h, c) * _tail_exp(c)


def case2_term(h: float, c: float) -> float:
    """Aportación de la parte central k < k0: h²(c + c²)/12."""
    _check(h, c)
    return _prefactor(h, c) * (0.25 * c)


def f_second_derivative_envelope(t: float, c: float) -> float:
    """Envolvente (c + c²)·e^{2|t| − c·e^{|t|}} de |F″(t)|."""
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"La constante c debe ser positiva y finita: {c!r}")
    a = abs(t)
    if a > _EXP_LIMIT:
        return 0.0
    return (c + c * c) * math.exp(2.0 * a - c * math.exp(a))


def decay_samples(c: float, t_max: float, n_half: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Muestras simétricas de e^{−c·e^{|t|}} en [−t_max, t_max].

    Se generan 2·n_half + 1 puntos; t(−j) = −t(j) exactamente.
    """
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"La constante c debe ser positiva y finita: {c!r}")
    if not (t_max > 0.0 and math.isfinite(t_max)):
        raise DomainError(f"t_max debe ser positivo y finito: {t_max!r}")
    t = np.arange(-n_half, n_half + 1) / n_half * t_max
    with np.errstate(over="ignore", under="ignore"):
        values = np.exp(-c * np.exp(np.abs(t)))
    return t, values


# ============================================================================
# UMBRALES
# ============================================================================


def k0_threshold(c: float, h: float) -> int:
    """Menor k con k·c·h > 8, es decir floor(8/(c·h)) + 1."""
    _check(h, c)
    return math.floor(8.0 / (c * h)) + 1


def _g(u: float) -> float:
    # e^{−u/2} − (1 − u/4) sin cancelación cerca de 0
    return math.expm1(-0.5 * u) + 0.25 * u


@functools.lru_cache(maxsize=1)
def _u_star() -> float:
    """Raíz positiva de e^{−u/2} = 1 − u/4 (u = c·h), por bisección."""
    lo, hi = 1e-12, 8.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    logger.debug(f"raíz de la condición de la cola: u*={lo!r}")
    return lo


def h0_limit(c: float) -> float:
    """Mayor h para el que e^{−ch/2} <= 1 − ch/4.

    La condición solo depende de u = c·h, así que la raíz u* se calcula una
    vez y h0_limit(c) = u*/c.
    """
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"La constante c debe ser positiva y finita: {c!r}")
    return _u_star() / c


@dataclass(frozen=True, slots=True)
class BoundParams:
    """Parámetros de la cota para un par (h, c)."""

    h: float
    c: float
    k0: int
    h0_limit: float

    @classmethod
    def from_step(cls, h: float, c: float) -> BoundParams:
        _check(h, c)
        return cls(h=h, c=c, k0=k0_threshold(c, h), h0_limit=h0_limit(c))

    @property
    def below_h0_limit(self) -> bool:
        return self.h < self.h0_limit

    def as_dict(self, literal: bool = False) -> dict:
        """Resumen de la cota con el formato de los informes."""
        data = {
            "h": self.h,
            "c": self.c,
            "global_bound": global_bound(self.h, self.c),
            "case1_term": case1_term(self.h, self.c) if self.h <= self.h0_limit else None,
            "case2_term": case2_term(self.h, self.c),
            "k0": self.k0,
            "h0_limit": self.h0_limit,
            "below_h0_limit": self.below_h0_limit,
        }
        if literal:
            data["literal_bound"] = global_bound(self.h, self.c, literal=True)
        return data


# ============================================================================
# DESIGUALDADES AUXILIARES
# ============================================================================


def tail_dominated(k: int, h: float, c: float) -> bool:
    """e^{2kh − c·e^{kh}} < e^{−(c/2)·e^{kh}}, comparado en los exponentes.

    Restando −c·e^{kh} a ambos lados queda 2kh < (c/2)·e^{kh}.
    """
    s = k * h
    e = math.exp(s) if s < _EXP_LIMIT else math.inf
    return 2.0 * s < 0.5 * c * e


def exp_exceeds_linear(a: float, t: float) -> bool:
    """e^t > a·t (se usa para t > 2a)."""
    if a <= 0.0 or t <= 0.0:
        return True
    return t > math.log(a) + math.log(t)


def step_condition_holds(h: float, c: float) -> bool:
    """e^{−ch/2} <= 1 − ch/4."""
    _check(h, c)
    return _g(c * h) <= 0.0


# ============================================================================
# AJUSTE DE c
# ============================================================================


@dataclass(frozen=True, slots=True)
class DecayFit:
    """Ajuste ln(−ln|F|) = ln c + |t| con pendiente fijada a 1.

    Attributes:
        c: Constante estimada.
        residual: RMS de los residuos del ajuste.
        slope: Pendiente libre por mínimos cuadrados (diagnóstico).
        n_samples: Muestras válidas usadas.
    """

    c: float
    residual: float
    slope: float
    n_samples: int


def transformed_integrand(
    f: Callable[[float, float, float], float], iv: Interval, t: float
) -> float:
    """F(t) = f(x(t))·peso(t) en el intervalo iv; 0 en nodos colapsados."""
    mapped = map_affine(node_at(0, t), iv)
    if mapped.collapsed:
        return 0.0
    return float(f(mapped.abscissa, mapped.dist_a, mapped.dist_b)) * mapped.weight


def fit_decay(t_samples: Sequence[float], values: Sequence[float]) -> DecayFit:
    """Ajusta c a partir de muestras de F(t).

    Solo se usan las muestras con 1e-300 < |F| < 1e-2.

    Raises:
        FitFailed: con menos de 4 muestras válidas o residuo RMS > 0.5.
    """
    t = np.asarray(t_samples, dtype=float)
    F = np.abs(np.asarray(values, dtype=float))
    if t.shape != F.shape:
        raise DomainError("t_samples y values deben tener la misma longitud")
    mask = np.isfinite(F) & np.isfinite(t) & (F > FIT_MIN) & (F < FIT_MAX)
    n = int(mask.sum())
    if n < FIT_MIN_SAMPLES:
        raise FitFailed(f"Muestras válidas insuficientes para ajustar c: {n}", n_valid=n)
    a = np.abs(t[mask])
    y = np.log(-np.log(F[mask]))
    shifted = y - a
    ln_c = float(shifted.mean())
    residual = float(np.sqrt(np.mean((shifted - ln_c) ** 2)))
    slope = float(np.polyfit(a, y, 1)[0]) if np.ptp(a) > 0.0 else math.nan
    if residual > FIT_MAX_RESIDUAL:
        raise FitFailed(
            f"Ajuste de c poco fiable (residuo {residual:.3g})",
            n_valid=n,
            residual=residual,
        )
    return DecayFit(c=math.exp(ln_c), residual=residual, slope=slope, n_samples=n)


def estimate_c(
    f: Callable[[float, float, float], float],
    iv: Interval,
    t_samples: Sequence[float],
) -> float:
    """Estima la constante de decaimiento de f en iv.

    Args:
        f: Integrando con firma (abscisa, dist_a, dist_b).
        iv: Intervalo.
        t_samples: Abscisas del plano t donde muestrear F.

    Returns:
        float: c estimada.

    Raises:
        FitFailed: si el ajuste no es fiable.
    """
    return fit_estimate(f, iv, t_samples).c


def fit_estimate(
    f: Callable[[float, float, float], float],
    iv: Interval,
    t_samples: Sequence[float],
) -> DecayFit:
    """Como ``estimate_c`` pero devuelve el ajuste completo."""
    values = [transformed_integrand(f, iv, float(t)) for t in t_samples]
    return fit_decay(t_samples, values)


__all__ = [
    "BoundParams",
    "DecayFit",
    "global_bound",
    "case1_term",
    "case2_term",
    "f_second_derivative_envelope",
    "decay_samples",
    "k0_threshold",
    "h0_limit",
    "tail_dominated",
    "exp_exceeds_linear",
    "step_condition_holds",
    "transformed_integrand",
    "fit_decay",
    "fit_estimate",
    "estimate_c",
]
