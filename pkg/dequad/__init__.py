"""
dequad: cuadratura doble exponencial (tanh-sinh) con cota de error a priori.

Módulos:
- transform: φ, φ′, nodos y cambio afín a (a, b)
- engine: suma trapezoidal, truncamiento y refinamiento con reutilización
- error_model: cota O(h²), umbrales y ajuste de la constante c
- expr: expresiones en x para la línea de comandos
- registry: integrales de referencia con valor exacto
- report: estudios de convergencia y formatos de salida
- cli: comando ``dequad``

Uso rápido:
    from dequad import Interval, integrate, plain

    result = integrate(plain(lambda x: 1.0), Interval(-1.0, 1.0), tol=1e-12)
    result.value, result.evals
"""

from .engine import (
    LevelEstimate,
    QuadratureResult,
    TanhSinhEngine,
    choose_truncation,
    integrate,
    plain,
    refine,
    refine_reuse_check,
    trapezoid_sum,
)
from .error_model import (
    BoundParams,
    case1_term,
    case2_term,
    estimate_c,
    f_second_derivative_envelope,
    global_bound,
    h0_limit,
    k0_threshold,
)
from .errors import (
    DequadError,
    DomainError,
    FitFailed,
    NoConvergence,
    NonFiniteIntegrand,
    ParseError,
    TruncationOverrun,
    UnknownFunction,
)
from .transform import Interval, TransformNode, map_affine, node, phi, phi_prime

__version__ = "0.1.0"

__all__ = [
    # Transformación
    "Interval",
    "TransformNode",
    "phi",
    "phi_prime",
    "node",
    "map_affine",
    # Motor
    "LevelEstimate",
    "QuadratureResult",
    "TanhSinhEngine",
    "plain",
    "trapezoid_sum",
    "choose_truncation",
    "refine",
    "integrate",
    "refine_reuse_check",
    # Modelo de error
    "BoundParams",
    "global_bound",
    "case1_term",
    "case2_term",
    "f_second_derivative_envelope",
    "k0_threshold",
    "h0_limit",
    "estimate_c",
    # Errores
    "DequadError",
    "DomainError",
    "NonFiniteIntegrand",
    "TruncationOverrun",
    "NoConvergence",
    "FitFailed",
    "ParseError",
    "UnknownFunction",
]
