import logging
import os
import sys
from typing import Optional


class RunLogFormatter(logging.Formatter):
    """Custom formatter for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        # Copy so a second handler does not prefix twice
        record = logging.makeLogRecord(record.__dict__)

        # Add run context
        if getattr(record, "point", None) is not None:
            record.msg = f"[p={record.point}] {record.msg}"
        if getattr(record, "command", None) is not None:
            record.msg = f"[command={record.command}] {record.msg}"
        if getattr(record, "run_id", None) is not None:
            record.msg = f"[run_id={record.run_id}] {record.msg}"

        return super().format(record)


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Setup application logging"""
    # Map environment names to logging levels
    level_mapping = {
        "DEVELOPMENT": "DEBUG",
        "DEV": "DEBUG",
        "TESTING": "WARNING",
        "TEST": "WARNING",
        "PRODUCTION": "WARNING",
        "DEBUG": "DEBUG",
        "INFO": "INFO",
        "WARNING": "WARNING",
        "ERROR": "ERROR",
    }

    # Get the appropriate logging level
    mapped_level = level_mapping.get(log_level.upper(), "INFO")

    # stdout carries command output, logs go to stderr
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, mode="a"))

    logging.basicConfig(
        level=getattr(logging, mapped_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )

    # Set custom formatter
    for handler in logging.getLogger().handlers:
        handler.setFormatter(
            RunLogFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
