"""Regla trapezoidal truncada sobre la transformación tanh-sinh.

El motor elige el truncamiento de forma automática y refina a la mitad el
paso reutilizando todas las evaluaciones del integrando ya hechas.

Uso rápido:
    from dequad.engine import integrate, plain
    from dequad.transform import Interval

    result = integrate(plain(lambda x: 1.0), Interval(-1.0, 1.0), tol=1e-12)
    print(result.value, result.evals)
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Any

from .error_model import global_bound
from .errors import DomainError, NoConvergence, NonFiniteIntegrand, TruncationOverrun
from .summation import CompensatedSum
from .transform import Interval, MappedNode, map_affine, node_at

logger = logging.getLogger(__name__)

# Firma: f(abscisa, distancia a a, distancia a b) -> valor real
Integrand = Callable[[float, float, float], float]

MAX_INDEX = 10**6
CONFIRM_TERMS = 3


def plain(fn: Callable[[float], Any]) -> Integrand:
    """Adapta una función f(x) a la firma de Integrand (ignora distancias)."""

    @functools.wraps(fn)
    def integrand(x: float, dist_a: float, dist_b: float) -> float:
        return fn(x)

    return integrand


# ============================================================================
# RESULTADOS
# ============================================================================


@dataclass(frozen=True, slots=True)
class LevelEstimate:
    """Suma trapezoidal de un nivel de refinamiento."""

    level: int
    h: float
    n_minus: int
    n_plus: int
    value: float

    @property
    def evals(self) -> int:
        return self.n_minus + self.n_plus + 1


RESULT_FIELDS = ("value", "h", "level", "n_minus", "n_plus", "evals", "est_error", "bound")


@dataclass(frozen=True)
class QuadratureResult:
    """Resultado de ``integrate``.

    Attributes:
        value: Aproximación de la integral.
        h: Paso final.
        level: Nivel devuelto (h = h0·2^−level).
        n_minus: Índices usados por el lado negativo.
        n_plus: Índices usados por el lado positivo.
        evals: n_minus + n_plus + 1.
        est_error: Diferencia con el nivel siguiente, que lo certifica.
        bound: Cota a priori O(h²) si se conoce c.
        history: Estimaciones de cada nivel calculado, incluido el que certifica.
    """

    value: float
    h: float
    level: int
    n_minus: int
    n_plus: int
    evals: int
    est_error: float
    bound: float | None = None
    history: tuple[LevelEstimate, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in RESULT_FIELDS}


def _ordered(n_minus: int, n_plus: int) -> Iterator[int]:
    """Orden fijo de suma: 0, −1, +1, −2, +2, ..."""
    yield 0
    for j in range(1, max(n_minus, n_plus) + 1):
        if j <= n_minus:
            yield -j
        if j <= n_plus:
            yield j


def _check_step(h: float) -> None:
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"El paso h debe ser positivo y finito: {h!r}")


# ============================================================================
# TABLA DE EVALUACIONES
# ============================================================================


class _TermTable:
    """Caché de términos f(x_k)·w_k indexada por t = k·h.

    Al dividir h por dos, t = k·h coincide en binary64 con el t del nivel
    anterior para los k pares, así que la clave es exacta.
    """

    def __init__(self, f: Integrand, iv: Interval, executor: Executor | None = None):
        self._f = f
        self._iv = iv
        self._executor = executor
        self._cache: dict[float, tuple[MappedNode, Any]] = {}
        self.calls = 0

    @property
    def parallel(self) -> bool:
        return self._executor is not None

    def _evaluate(self, item: tuple[int, float]) -> tuple[MappedNode, Any]:
        k, t = item
        mapped = map_affine(node_at(k, t), self._iv)
        if mapped.collapsed:
            return mapped, None
        return mapped, self._f(mapped.abscissa, mapped.dist_a, mapped.dist_b)

    def _store(self, t: float, entry: tuple[MappedNode, Any]) -> None:
        if entry[1] is not None:
            self.calls += 1
        self._cache[t] = entry

    def prefetch(self, ks: Iterable[int], h: float) -> None:
        """Evalúa en paralelo los nodos que aún no están en caché."""
        pending = [(k, k * h) for k in ks if k * h not in self._cache]
        if not pending:
            return
        if self._executor is None:
            results = map(self._evaluate, pending)
        else:
            results = self._executor.map(self._evaluate, pending)
        for (_, t), entry in zip(pending, results):
            self._store(t, entry)

    def term(self, k: int, h: float) -> float | None:
        """Término sin escalar por h; None si el nodo está colapsado."""
        t = k * h
        entry = self._cache.get(t)
        if entry is None:
            entry = self._evaluate((k, t))
            self._store(t, entry)
        mapped, raw = entry
        if raw is None:
            return None
        value = float(raw)
        term = value * mapped.weight
        if not (math.isfinite(value) and math.isfinite(term)):
            raise NonFiniteIntegrand(k, t, mapped.abscissa, raw)
        return term

    def terms(self, ks: Iterable[int], h: float) -> Iterator[float]:
        """Términos de los nodos ks que no están colapsados."""
        for k in ks:
            term = self.term(k, h)
            if term is not None:
                yield term


# ============================================================================
# MOTOR
# ============================================================================


@dataclass(frozen=True)
class TanhSinhEngine:
    """Motor de cuadratura tanh-sinh.

    Inmutable tras construirse; cada llamada crea su propia caché, así que
    una misma instancia se puede usar desde varios hilos.

    Args:
        workers: Hilos para evaluar el integrando (1 = secuencial). El
            integrando debe ser seguro entre hilos si workers > 1.
        max_index: Máximo |k| explorado al truncar.
        confirm: Términos pequeños consecutivos que cierran un lado.
        batch: Anillos evaluados por lote en modo paralelo.
    """

    workers: int = 1
    max_index: int = MAX_INDEX
    confirm: int = CONFIRM_TERMS
    batch: int = 32

    def __post_init__(self):
        if self.workers < 1:
            raise DomainError(f"workers debe ser >= 1: {self.workers!r}")
        if self.confirm < 1 or self.max_index < 1 or self.batch < 1:
            raise DomainError("confirm, max_index y batch deben ser >= 1")

    def _pool(self):
        if self.workers > 1:
            return ThreadPoolExecutor(max_workers=self.workers)
        return nullcontext(None)

    # ------------------------------------------------------------------
    # Truncamiento
    # ------------------------------------------------------------------

    def _scan(self, table: _TermTable, h: float, tol: float) -> tuple[int, int]:
        acc = CompensatedSum()
        centre = table.term(0, h)
        if centre is not None:
            acc.add(centre)
        last = {-1: 0, 1: 0}
        quiet = {-1: 0, 1: 0}
        active = [-1, 1]
        k = 0
        while active:
            k += 1
            if k > self.max_index:
                raise TruncationOverrun(active[0], self.max_index, h, tol)
            if table.parallel and (k - 1) % self.batch == 0:
                table.prefetch(
                    (side * j for j in range(k, k + self.batch) for side in active), h
                )
            # Umbral común a los dos lados del anillo
            threshold = tol * (1.0 + abs(h * acc.value))
            for side in tuple(active):
                term = table.term(side * k, h)
                if term is None:
                    active.remove(side)
                    continue
                acc.add(term)
                last[side] = k
                if abs(h * term) < threshold:
                    quiet[side] += 1
                    if quiet[side] >= self.confirm:
                        active.remove(side)
                else:
                    quiet[side] = 0
        return last[-1], last[1]

    def choose_truncation(
        self, f: Integrand, iv: Interval, h: float, tol: float
    ) -> tuple[int, int]:
        """Elige (n_minus, n_plus) para el paso h.

        Cada lado se cierra tras ``confirm`` términos seguidos con
        |h·término| < tol·(1 + |suma parcial|), o cuando el siguiente nodo
        colapsa (peso o distancia al extremo nulos).

        Args:
            f: Integrando.
            iv: Intervalo de integración.
            h: Paso de la malla.
            tol: Tolerancia relativa del truncamiento, 0 < tol < 1.

        Returns:
            tuple[int, int]: (n_minus, n_plus).

        Raises:
            DomainError: si h o tol están fuera de dominio.
            TruncationOverrun: si un lado no cierra antes de ``max_index``.
        """
        _check_step(h)
        if not 0.0 < tol < 1.0:
            raise DomainError(f"Se requiere 0 < tol < 1: {tol!r}")
        with self._pool() as pool:
            return self._scan(_TermTable(f, iv, pool), h, tol)

    # ------------------------------------------------------------------
    # Suma directa
    # ------------------------------------------------------------------

    def trapezoid_sum(
        self, f: Integrand, iv: Interval, h: float, n_minus: int, n_plus: int
    ) -> float:
        """Calcula h·Σ f(x_k)·w_k para k en [−n_minus, n_plus].

        Los nodos colapsados aportan 0 y no llaman al integrando.

        Raises:
            DomainError: si h <= 0 o algún índice es negativo.
            NonFiniteIntegrand: si f devuelve NaN o ±∞ en un nodo.
        """
        _check_step(h)
        if n_minus < 0 or n_plus < 0:
            raise DomainError(f"Índices negativos: ({n_minus}, {n_plus})")
        with self._pool() as pool:
            table = _TermTable(f, iv, pool)
            if table.parallel:
                table.prefetch(_ordered(n_minus, n_plus), h)
            acc = CompensatedSum()
            acc.extend(table.terms(_ordered(n_minus, n_plus), h))
            return h * acc.value

    # ------------------------------------------------------------------
    # Refinamiento
    # ------------------------------------------------------------------

    def _levels(
        self, table: _TermTable, h0: float, max_level: int, tol: float
    ) -> Iterator[LevelEstimate]:
        # Suma sin escalar; I_ℓ = h_ℓ·acc = I_{ℓ−1}/2 + h_ℓ·Σ nuevos
        acc = CompensatedSum()
        previous: tuple[int, int] | None = None
        for level in range(max_level + 1):
            h = math.ldexp(h0, -level)
            n_minus, n_plus = self._scan(table, h, tol * min(h, 1.0))
            if previous is None:
                acc.extend(table.terms(_ordered(n_minus, n_plus), h))
            else:
                old_minus, old_plus = 2 * previous[0], 2 * previous[1]
                for k in _ordered(max(n_minus, old_minus), max(n_plus, old_plus)):
                    in_new = -n_minus <= k <= n_plus
                    in_old = k % 2 == 0 and -old_minus <= k <= old_plus
                    if in_new == in_old:
                        continue
                    term = table.term(k, h)
                    if term is not None:
                        acc.add(term if in_new else -term)
            previous = (n_minus, n_plus)
            estimate = LevelEstimate(level, h, n_minus, n_plus, h * acc.value)
            logger.debug(
                f"nivel {level}: h={h!r} n=({n_minus}, {n_plus}) "
                f"I={estimate.value!r} llamadas={table.calls}"
            )
            yield estimate

    def refine(
        self,
        f: Integrand,
        iv: Interval,
        h0: float = 1.0,
        max_level: int = 12,
        tol: float = 1e-10,
    ) -> Iterator[LevelEstimate]:
        """Genera las sumas de los niveles 0..max_level sin criterio de parada.

        Args:
            f: Integrando.
            iv: Intervalo.
            h0: Paso inicial.
            max_level: Último nivel generado.
            tol: Tolerancia de truncamiento (se aplica tol·h en cada nivel).

        Yields:
            LevelEstimate: una por nivel.
        """
        _check_step(h0)
        if max_level < 0:
            raise DomainError(f"max_level debe ser >= 0: {max_level!r}")
        if not 0.0 < tol < 1.0:
            raise DomainError(f"Se requiere 0 < tol < 1: {tol!r}")
        with self._pool() as pool:
            yield from self._levels(_TermTable(f, iv, pool), h0, max_level, tol)

    def integrate(
        self,
        f: Integrand,
        iv: Interval,
        tol: float = 1e-10,
        h0: float = 1.0,
        max_level: int = 12,
        c: float | None = None,
    ) -> QuadratureResult:
        """Integra f en iv hasta |I_ℓ − I_{ℓ−1}| <= tol·(1 + |I_ℓ|).

        La diferencia entre dos niveles estima el error del nivel grueso: el
        resultado es I_{ℓ−1}, con su paso y sus índices, y ``est_error`` =
        |I_ℓ − I_{ℓ−1}|. El nivel ℓ solo lo certifica y queda en ``history``.

        Una banda de tolerancia menor que un ulp del valor no se puede
        certificar en binary64 y no cuenta como convergencia.

        Args:
            f: Integrando.
            iv: Intervalo finito.
            tol: Tolerancia, 0 < tol < 1.
            h0: Paso inicial.
            max_level: Nivel máximo (>= 1).
            c: Constante de decaimiento; si se da, se rellena ``bound``.

        Returns:
            QuadratureResult: el nivel certificado por el siguiente.

        Raises:
            DomainError: si tol, h0 o max_level están fuera de dominio.
            NoConvergence: con el resultado del último nivel en ``result``.
            NonFiniteIntegrand: si el integrando no es finito en algún nodo.
        """
        if not 0.0 < tol < 1.0:
            raise DomainError(f"Se requiere 0 < tol < 1: {tol!r}")
        if max_level < 1:
            raise DomainError(f"max_level debe ser >= 1: {max_level!r}")
        history: list[LevelEstimate] = []
        diff = math.inf
        for estimate in self.refine(f, iv, h0, max_level, tol):
            history.append(estimate)
            if len(history) < 2:
                continue
            certified = history[-2]
            diff = abs(estimate.value - certified.value)
            band = tol * (1.0 + abs(estimate.value))
            if diff <= band and band >= math.ulp(estimate.value):
                result = self._result(certified, diff, c, history)
                logger.info(
                    f"convergencia en nivel {certified.level} (confirmada en {estimate.level}): "
                    f"I={result.value!r} evals={result.evals}"
                )
                return result
        result = self._result(history[-1], diff, c, history)
        logger.warning(f"sin convergencia a tol={tol!r}; mejor valor {result.value!r}")
        raise NoConvergence(result, tol)

    @staticmethod
    def _result(
        estimate: LevelEstimate,
        diff: float,
        c: float | None,
        history: list[LevelEstimate],
    ) -> QuadratureResult:
        return QuadratureResult(
            value=estimate.value,
            h=estimate.h,
            level=estimate.level,
            n_minus=estimate.n_minus,
            n_plus=estimate.n_plus,
            evals=estimate.evals,
            est_error=diff,
            bound=None if c is None else global_bound(estimate.h, c),
            history=tuple(history),
        )

    def refine_reuse_check(
        self,
        f: Integrand,
        iv: Interval,
        h0: float,
        level: int,
        tol: float = 1e-10,
    ) -> tuple[float, float]:
        """Compara la suma reutilizada del nivel ``level`` con la directa.

        Returns:
            tuple[float, float]: (directa, reutilizada) sobre los mismos índices.
        """
        last = None
        for last in self.refine(f, iv, h0, level, tol):
            pass
        direct = self.trapezoid_sum(f, iv, last.h, last.n_minus, last.n_plus)
        return direct, last.value


# ============================================================================
# API DE MÓDULO
# ============================================================================

DEFAULT_ENGINE = TanhSinhEngine()


def trapezoid_sum(f: Integrand, iv: Interval, h: float, n_minus: int, n_plus: int) -> float:
    return DEFAULT_ENGINE.trapezoid_sum(f, iv, h, n_minus, n_plus)


def choose_truncation(f: Integrand, iv: Interval, h: float, tol: float) -> tuple[int, int]:
    return DEFAULT_ENGINE.choose_truncation(f, iv, h, tol)


def refine(
    f: Integrand, iv: Interval, h0: float = 1.0, max_level: int = 12, tol: float = 1e-10
) -> Iterator[LevelEstimate]:
    return DEFAULT_ENGINE.refine(f, iv, h0, max_level, tol)


def integrate(
    f: Integrand,
    iv: Interval,
    tol: float = 1e-10,
    h0: float = 1.0,
    max_level: int = 12,
    c: float | None = None,
) -> QuadratureResult:
    return DEFAULT_ENGINE.integrate(f, iv, tol, h0, max_level, c)


def refine_reuse_check(
    f: Integrand, iv: Interval, h0: float, level: int, tol: float = 1e-10
) -> tuple[float, float]:
    return DEFAULT_ENGINE.refine_reuse_check(f, iv, h0, level, tol)


__all__ = [
    # Tipos
    "Integrand",
    "LevelEstimate",
    "QuadratureResult",
    "TanhSinhEngine",
    "RESULT_FIELDS",
    # Operaciones
    "plain",
    "trapezoid_sum",
    "choose_truncation",
    "refine",
    "integrate",
    "refine_reuse_check",
    "DEFAULT_ENGINE",
]
