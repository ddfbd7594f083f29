import logging
from typing import Callable, Dict, Type

import click

from app.core.middlewares.run_context_middleware import run_context

logger = logging.getLogger("ymreduce.cli")

_CLICK_FLOW = (click.exceptions.Exit, click.exceptions.Abort, click.ClickException)


class CommandGroup(click.Group):
    """Root click group that owns the run context and maps exceptions to exit codes"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.exception_handlers: Dict[Type[BaseException], Callable] = {}

    def add_exception_handler(self, exc_type: Type[BaseException], handler: Callable) -> None:
        self.exception_handlers[exc_type] = handler

    def handler_for(self, exc: BaseException) -> Callable:
        for cls in type(exc).__mro__:
            if cls in self.exception_handlers:
                return self.exception_handlers[cls]
        raise exc

    def invoke(self, ctx: click.Context):
        with run_context(ctx.info_name or "ymreduce"):
            try:
                return super().invoke(ctx)
            except _CLICK_FLOW:
                raise
            except Exception as exc:
                code = self.handler_for(exc)(ctx, exc)
            logger.debug("Command failed", extra={"exit_code": code})
            ctx.exit(code)
