import json
import logging
import traceback
from typing import Callable, Dict, Optional, Type

import click

from app.core.exceptions import (
    BaseAppException,
    DomainError,
    EmptySublevelSet,
    HypothesisFailure,
    InfeasibleWindow,
    NoInteriorCritical,
    QuadratureError,
    SmallParameterError,
    ValidationError,
    VerificationFailed,
)
from app.core.exceptions.base_exception import ErrorDocument
from app.core.middlewares.run_context_middleware import (
    get_command,
    get_point,
    get_run_id,
)
from config.settings import settings

logger = logging.getLogger("ymreduce.errors")

Handler = Callable[[click.Context, BaseException], int]


def _report(ctx: Optional[click.Context], exc: BaseException, title: str, exit_code: int, **error_data) -> int:
    """Print the one-line message and, with --format json, the error document on stderr"""
    message = getattr(exc, "message", None) or str(exc) or type(exc).__name__
    click.echo(f"Error: {title}: {message}", err=True)

    run_config = getattr(ctx, "obj", None) if ctx is not None else None
    if getattr(run_config, "fmt", None) == "json":
        document = ErrorDocument(
            error=type(exc).__name__,
            message=message,
            exit_code=exit_code,
            run_id=get_run_id(),
            command=get_command(),
            details=getattr(exc, "details", None),
            error_data={k: v for k, v in error_data.items() if v is not None},
        )
        click.echo(json.dumps(document.model_dump(exclude_none=True), sort_keys=True), err=True)

    if settings.app.is_debug:
        click.echo("".join(traceback.format_exception(exc)), err=True)
    return exit_code


def _warn(title: str, exc: BaseException, **fields) -> None:
    logger.warning(
        title,
        extra={
            "run_id": get_run_id(),
            "command": get_command(),
            "point": get_point(),
            "error_type": type(exc).__name__,
            "error_message": str(exc),
            **fields,
        },
    )


def validation_error_handler(ctx: click.Context, exc: ValidationError) -> int:
    """Bad input or inconsistent flags"""
    _warn("Validation error", exc)
    return _report(ctx, exc, "invalid input", exc.exit_code)


def domain_error_handler(ctx: click.Context, exc: DomainError) -> int:
    _warn("Point outside the admissible region", exc)
    return _report(ctx, exc, "domain error", exc.exit_code)


def small_parameter_handler(ctx: click.Context, exc: SmallParameterError) -> int:
    _warn("Small-|p| branch needed but disabled", exc)
    return _report(ctx, exc, "small parameter", exc.exit_code)


def quadrature_error_handler(ctx: click.Context, exc: QuadratureError) -> int:
    """Non-finite integrand; the offending node goes into the error document"""
    _warn("Quadrature failed", exc, node=exc.node)
    return _report(ctx, exc, "quadrature failure", exc.exit_code, node=exc.node)


def hypothesis_failure_handler(ctx: click.Context, exc: HypothesisFailure) -> int:
    _warn("Hypothesis does not hold", exc)
    return _report(ctx, exc, "hypothesis failure", exc.exit_code)


def infeasible_window_handler(ctx: click.Context, exc: InfeasibleWindow) -> int:
    _warn("Infeasible window", exc)
    return _report(ctx, exc, "infeasible window", exc.exit_code)


def empty_sublevel_handler(ctx: click.Context, exc: EmptySublevelSet) -> int:
    _warn("Empty sublevel set", exc)
    return _report(ctx, exc, "empty sublevel set", exc.exit_code)


def no_interior_critical_handler(ctx: click.Context, exc: NoInteriorCritical) -> int:
    _warn("Search attracted to a window face", exc, face=exc.face)
    return _report(ctx, exc, "no interior critical point", exc.exit_code, face=exc.face)


def verification_failed_handler(ctx: click.Context, exc: VerificationFailed) -> int:
    _warn("Verification failed", exc)
    return _report(ctx, exc, "verification failed", exc.exit_code)


def app_exception_handler(ctx: click.Context, exc: BaseAppException) -> int:
    _warn("Command failed", exc)
    return _report(ctx, exc, "error", exc.exit_code)


def general_exception_handler(ctx: click.Context, exc: Exception) -> int:
    """Unexpected failures are logged with their traceback"""
    logger.error(
        "Unhandled exception",
        extra={
            "run_id": get_run_id(),
            "command": get_command(),
            "point": get_point(),
            "error_type": type(exc).__name__,
            "error_message": str(exc),
        },
        exc_info=True,
    )
    return _report(ctx, exc, "internal error", 1)


def register_exception_handlers(group) -> None:
    """Register all exception handlers with the command group"""
    handlers: Dict[Type[BaseException], Handler] = {
        SmallParameterError: small_parameter_handler,
        DomainError: domain_error_handler,
        ValidationError: validation_error_handler,
        QuadratureError: quadrature_error_handler,
        HypothesisFailure: hypothesis_failure_handler,
        InfeasibleWindow: infeasible_window_handler,
        EmptySublevelSet: empty_sublevel_handler,
        NoInteriorCritical: no_interior_critical_handler,
        VerificationFailed: verification_failed_handler,
        BaseAppException: app_exception_handler,
        Exception: general_exception_handler,
    }
    for exc_type, handler in handlers.items():
        group.add_exception_handler(exc_type, handler)
