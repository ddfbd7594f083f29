from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    """Application settings.

    Environment values:
    - APP_ENV: Current environment (test, dev, prod)
    - DEBUG: Print full tracebacks on command failures
    - LOG_LEVEL: Explicit log level, overrides the environment mapping
    - LOG_FILE: Optional path of a log file
    """

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    # Environment
    APP_ENV: str = Field(
        default="production",
        description="Current environment (test, dev, prod)",
        validation_alias="APP_ENV",
    )

    # Debug
    DEBUG: bool = Field(
        default=False,
        description="Print full tracebacks on command failures",
        validation_alias="DEBUG",
    )

    LOG_LEVEL: Optional[str] = Field(
        default=None,
        description="Explicit log level (DEBUG, INFO, WARNING, ERROR)",
        validation_alias="LOG_LEVEL",
    )

    LOG_FILE: Optional[str] = Field(
        default=None,
        description="Append logs to this file in addition to stderr",
        validation_alias="LOG_FILE",
    )

    @property
    def is_debug(self) -> bool:
        """Check if debug mode is enabled either explicitly or by environment"""
        return self.DEBUG or self.APP_ENV.lower() in ["development", "dev", "debug"]

    @property
    def log_level(self) -> str:
        """Level handed to setup_logging"""
        return self.LOG_LEVEL or self.APP_ENV
