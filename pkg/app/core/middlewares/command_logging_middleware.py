import contextlib
import functools
import logging
import time
from typing import Callable

from app.core.middlewares.run_context_middleware import (
    bind_command,
    get_run_id,
    run_context,
)

logger = logging.getLogger("ymreduce.commands")


def log_command(name: str) -> Callable:
    """Wrap a CLI callback with start/completion logging under a run context"""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            # the root group normally opened the run context already
            outer = contextlib.nullcontext() if get_run_id() else run_context(name)
            with outer, bind_command(name):
                run_id = get_run_id()

                # Log command start
                start_time = time.perf_counter()
                logger.info(
                    "Command started",
                    extra={
                        "run_id": run_id,
                        "command": name,
                        "options": {k: v for k, v in kwargs.items() if v is not None},
                    },
                )

                # Run command
                result = func(*args, **kwargs)

                # Log command completion
                elapsed = time.perf_counter() - start_time
                logger.info(
                    "Command completed",
                    extra={
                        "run_id": run_id,
                        "command": name,
                        "process_time": f"{elapsed:.4f}s",
                    },
                )

                return result

        return wrapper

    return decorator
