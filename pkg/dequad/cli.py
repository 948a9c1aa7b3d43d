"""Línea de comandos ``dequad``.

Los datos se escriben en stdout y los diagnósticos en stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from collections.abc import Sequence

import numpy as np

from .config import OUTPUT_FORMATS, Settings, configure_logging, get_settings
from .engine import TanhSinhEngine
from .error_model import (
    BoundParams,
    decay_samples,
    fit_estimate,
    global_bound,
    transformed_integrand,
)
from .errors import (
    DequadError,
    DomainError,
    FitFailed,
    NoConvergence,
    NonFiniteIntegrand,
    ParseError,
    TruncationOverrun,
    UsageError,
)
from .expr import compile_integrand, parse
from .help_text import get_help
from .registry import REGISTRY, get_reference
from .report import (
    convergence_study,
    envelope_study,
    fit_order,
    format_value,
    render_mapping,
    render_table,
)
from .transform import Interval

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO_CONVERGENCE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4

TABLE1_TOL = 1e-8
TABLE1_H = 1.0 / 129.0
TABLE1_C = 2.0
MIN_LEVELS, MAX_LEVELS = 2, 15

# Muestras del plano t para estimar c
C_SAMPLES = np.linspace(-6.0, 6.0, 97)

RESULT_LABELS = {
    "value": "valor",
    "evals": "evaluaciones",
    "est_error": "error estimado",
    "bound": "cota",
}
BOUND_LABELS = {
    "global_bound": "GError",
    "case1_term": "case1",
    "case2_term": "case2",
    "below_h0_limit": "h < h0_limit",
    "literal_bound": "producto literal",
}
TABLE1_HEADERS = {
    "integral": "INTEGRAL",
    "n_evals": "N",
    "abs_error": "abs. error",
    "ubge": "ubge",
}
CONVERGE_COLUMNS = ("level", "h", "evals", "value", "abs_error", "bound")


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser que lanza UsageError en lugar de salir con código 2."""

    def error(self, message):
        raise UsageError(message)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _interval(args: argparse.Namespace) -> Interval:
    if args.a is None or args.b is None:
        raise UsageError("--expr necesita --a y --b")
    return Interval(args.a, args.b)


def _estimated_c(f, iv: Interval) -> float | None:
    try:
        fit = fit_estimate(f, iv, C_SAMPLES)
    except (FitFailed, NonFiniteIntegrand) as e:
        logger.warning(f"no se pudo estimar c: {e}")
        return None
    logger.info(f"c estimada = {fit.c!r} (residuo {fit.residual:.3g})")
    return fit.c


# ============================================================================
# COMANDOS
# ============================================================================


def cmd_integrate(args: argparse.Namespace, settings: Settings) -> int:
    ast = parse(args.expr)
    iv = Interval(args.a, args.b)
    if args.c is not None and not args.c > 0.0:
        raise DomainError(f"La constante c debe ser positiva: {args.c!r}")
    f = compile_integrand(ast, iv)
    engine = TanhSinhEngine(workers=args.workers)
    code = EXIT_OK
    try:
        result = engine.integrate(f, iv, args.tol, args.h0, args.max_level, args.c)
    except NoConvergence as e:
        print(f"aviso: {e}", file=sys.stderr)
        result = e.result
        code = EXIT_NO_CONVERGENCE
    if args.c is None:
        c = _estimated_c(f, iv)
        if c is not None:
            result = dataclasses.replace(result, bound=global_bound(result.h, c))
    data = result.to_dict()
    if args.format == "text":
        data = {key: data[key] for key in ("value", "evals", "est_error", "bound")}
    _emit(render_mapping(data, args.format, RESULT_LABELS))
    return code


def cmd_bound(args: argparse.Namespace, settings: Settings) -> int:
    params = BoundParams.from_step(args.h, args.c)
    _emit(render_mapping(params.as_dict(literal=args.literal), args.format, BOUND_LABELS))
    return EXIT_OK


def cmd_converge(args: argparse.Namespace, settings: Settings) -> int:
    if not MIN_LEVELS <= args.levels <= MAX_LEVELS:
        raise DomainError(f"--levels debe estar en [{MIN_LEVELS}, {MAX_LEVELS}]: {args.levels}")
    if args.name is not None:
        entry = get_reference(args.name)
        f, iv, exact = entry.integrand, entry.interval, entry.exact
        h0 = args.h0 if args.h0 is not None else entry.h0
        c = args.c if args.c is not None else entry.c_nominal
    else:
        iv = _interval(args)
        f = compile_integrand(parse(args.expr), iv)
        exact = None
        h0 = args.h0 if args.h0 is not None else settings.h0
        c = args.c
    engine = TanhSinhEngine(workers=args.workers)
    rows = convergence_study(f, iv, args.levels, h0, settings.study_tol, exact, c, engine)
    records = [row.to_dict() for row in rows]
    order = fit_order(rows) if exact is not None else None
    envelope = None
    if args.check_envelope:
        if exact is None:
            raise UsageError("--check-envelope necesita --name")
        envelope = envelope_study(f, iv, exact, args.levels, h0, settings.study_tol, engine)
    if args.format == "json":
        data = {"rows": records, "order": order}
        if envelope is not None:
            data["envelope"] = envelope
        _emit(render_mapping(data, "json"))
    else:
        _emit(render_table(records, CONVERGE_COLUMNS, args.format))
        # En CSV los resúmenes van como comentarios tras las filas
        prefix = "# " if args.format == "csv" else ""
        if exact is not None:
            _emit(f"{prefix}p = {format_value(order)}\n")
        if envelope is not None:
            _emit(f"{prefix}envolvente = {envelope['status']}\n")
    return EXIT_OK


def cmd_table1(args: argparse.Namespace, settings: Settings) -> int:
    entry = REGISTRY["I1"]
    engine = TanhSinhEngine(workers=args.workers)
    code = EXIT_OK
    try:
        result = engine.integrate(
            entry.integrand, entry.interval, TABLE1_TOL, entry.h0, settings.max_level
        )
    except NoConvergence as e:
        print(f"aviso: {e}", file=sys.stderr)
        result = e.result
        code = EXIT_NO_CONVERGENCE
    record = {
        "integral": entry.name,
        "n_evals": result.evals,
        "abs_error": abs(result.value - entry.exact),
        "ubge": global_bound(TABLE1_H, TABLE1_C),
    }
    _emit(render_table([record], list(TABLE1_HEADERS), args.format, TABLE1_HEADERS))
    return code


def cmd_sample_decay(args: argparse.Namespace, settings: Settings) -> int:
    t, values = decay_samples(args.c, args.t_max)
    columns = ["t", "value"]
    integrand = None
    if args.name is not None:
        entry = get_reference(args.name)
        integrand, iv = entry.integrand, entry.interval
    elif args.expr is not None:
        iv = _interval(args)
        integrand = compile_integrand(parse(args.expr), iv)
    records = [{"t": float(ti), "value": float(vi)} for ti, vi in zip(t, values)]
    if integrand is not None:
        columns.append("integrand")
        for record in records:
            record["integrand"] = abs(transformed_integrand(integrand, iv, record["t"]))
    _emit(render_table(records, columns, args.format))
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================


def _registry_epilog() -> str:
    width = max(len(name) for name in REGISTRY)
    lines = [f"  {name:<{width}}  {entry.description}" for name, entry in REGISTRY.items()]
    return "\nIntegrales registradas (--name):\n" + "\n".join(lines) + "\n"


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    """Construye el parser con los valores por defecto de ``settings``."""
    common = _ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument(
        "--format", choices=OUTPUT_FORMATS, default=settings.output_format,
        help="formato de salida (por defecto: %(default)s)",
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="más detalle en stderr (-v info, -vv depuración)",
    )
    common.add_argument(
        "--workers", type=int, default=settings.workers,
        help="hilos para evaluar el integrando (por defecto: %(default)s)",
    )

    parser = _ArgumentParser(
        prog="dequad",
        description=get_help("main"),
        epilog=get_help("epilog"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMANDO")

    def add(name: str, handler, summary: str, named: bool = False) -> argparse.ArgumentParser:
        epilog = get_help("epilog") + (_registry_epilog() if named else "")
        p = sub.add_parser(
            name,
            parents=[common],
            help=summary,
            description=get_help(name),
            epilog=epilog,
            formatter_class=argparse.RawDescriptionHelpFormatter,
            allow_abbrev=False,
        )
        p.set_defaults(handler=handler)
        return p

    p = add("integrate", cmd_integrate, "integra una expresión en (a, b)")
    p.add_argument("--expr", required=True, help="integrando en x")
    p.add_argument("--a", type=float, required=True, help="extremo inferior")
    p.add_argument("--b", type=float, required=True, help="extremo superior")
    p.add_argument("--tol", type=float, default=settings.tol)
    p.add_argument("--h0", type=float, default=settings.h0)
    p.add_argument("--max-level", type=int, default=settings.max_level)
    p.add_argument("--c", type=float, default=None, help="constante de decaimiento")

    p = add("bound", cmd_bound, "cota a priori del error")
    p.add_argument("--h", type=float, required=True, help="paso h > 0")
    p.add_argument("--c", type=float, required=True, help="constante c > 0")
    p.add_argument(
        "--literal", action="store_true",
        help="muestra también el producto literal de los dos términos",
    )

    p = add("converge", cmd_converge, "estudio de convergencia por niveles", named=True)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--name", help=f"integral registrada ({', '.join(REGISTRY)})")
    target.add_argument("--expr", help="integrando en x")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--h0", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument(
        "--check-envelope", action="store_true",
        help="compara el error con la cota usando c ajustada en la cola",
    )

    add("table1", cmd_table1, "tabla del experimento de referencia (I1)")

    p = add("sample-decay", cmd_sample_decay, "muestras de e^(-c·e^|t|)", named=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    target = p.add_mutually_exclusive_group()
    target.add_argument("--name", help="integral registrada")
    target.add_argument("--expr", help="integrando en x")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)

    return parser


def _log_level(verbose: int, settings: Settings) -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    return settings.log_level


def main(argv: Sequence[str] | None = None) -> int:
    """Punto de entrada; devuelve el código de salida."""
    try:
        settings = get_settings()
        args = build_parser(settings).parse_args(argv)
        configure_logging(_log_level(args.verbose, settings))
        if args.workers < 1:
            raise DomainError(f"--workers debe ser >= 1: {args.workers}")
        return args.handler(args, settings)
    except ParseError as e:
        print(f"error de sintaxis: {e}", file=sys.stderr)
        return EXIT_PARSE
    except NoConvergence as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (DomainError, UsageError, NonFiniteIntegrand, TruncationOverrun) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except DequadError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
