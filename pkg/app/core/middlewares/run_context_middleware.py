import logging
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional, Sequence

# ContextVars for the run context - inherited by worker threads started with copy_context
run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
command_var: ContextVar[Optional[str]] = ContextVar("command", default=None)
point_var: ContextVar[Optional[str]] = ContextVar("point", default=None)

logger = logging.getLogger("ymreduce.context")


@contextmanager
def run_context(command: str, run_id: Optional[str] = None) -> Iterator[str]:
    """Bind a run identifier and command name for the duration of a command"""
    run_id = run_id or uuid.uuid4().hex[:12]

    run_token = run_id_var.set(run_id)
    command_token = command_var.set(command)

    logger.debug(
        "Run context initialized",
        extra={"run_id": run_id, "command": command},
    )

    try:
        yield run_id
    finally:
        # Clean up context variables
        point_var.set(None)
        command_var.reset(command_token)
        run_id_var.reset(run_token)


@contextmanager
def bind_command(command: str) -> Iterator[str]:
    """Name the running command inside an existing run context.

    The binding is left in place when the body raises, so exception
    handlers further out still see which command failed.
    """
    token = command_var.set(command)
    yield command
    command_var.reset(token)


def get_run_id() -> Optional[str]:
    """Get current run ID from context"""
    return run_id_var.get()


def get_command() -> Optional[str]:
    """Get current command name from context"""
    return command_var.get()


def get_point() -> Optional[str]:
    """Get the evaluation point currently being worked on"""
    return point_var.get()


def set_point(p: Optional[Sequence[float]]) -> None:
    """Set the evaluation point in context"""
    if p is None:
        point_var.set(None)
        return
    point_var.set("(" + ",".join(f"{float(v):.6g}" for v in p) + ")")


def context_extra(**fields) -> dict:
    """Logging extras carrying the run context plus the given fields"""
    extra = {
        "run_id": get_run_id(),
        "command": get_command(),
        "point": get_point(),
    }
    extra.update(fields)
    return extra
