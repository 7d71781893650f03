import os
import logging
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, field_validator

# Pick up a local .env before reading any HYPERROOT_* variable
load_dotenv()

# Set HYPERROOT_LOG_LEVEL environment variable to control logging level
# Valid values: "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"
# Default level: "INFO"
log_level_map = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL
}

_module_loggers = set()


def resolve_log_level(name: str) -> int:
    """Map a level name to a logging constant, defaulting to INFO if invalid."""
    return log_level_map.get(str(name).upper(), logging.INFO)


def get_logger(name: str) -> logging.Logger:
    """Module logger with the level taken from HYPERROOT_LOG_LEVEL."""
    logger = logging.getLogger(name)
    logger.setLevel(resolve_log_level(os.environ.get('HYPERROOT_LOG_LEVEL', 'INFO')))
    _module_loggers.add(name)
    return logger


def set_log_level(name: str) -> int:
    """Apply a level to the root logger and every logger handed out by get_logger."""
    level = resolve_log_level(name)
    logging.getLogger().setLevel(level)
    for module in _module_loggers:
        logging.getLogger(module).setLevel(level)
    return level


class Config(BaseModel):
    """Runtime configuration settings."""

    model_config = {"frozen": True}

    # Multiplicity table cache
    cache_dir: str = "./cache"

    # Series and table limits
    truncation_order: int = 256
    height_limit: int = 20

    # Report format
    output: Literal["json", "csv", "pretty"] = "pretty"

    # Worker threads for shell-parallel Peterson computation
    threads: int = 1

    # Logging
    log_level: str = "INFO"

    @field_validator("truncation_order", "height_limit", "threads")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("limits must be positive")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in log_level_map:
            return "INFO"
        return value

    @classmethod
    def from_env(cls) -> "Config":
        """Build the configuration from HYPERROOT_* environment variables."""
        return cls(
            cache_dir=os.getenv("HYPERROOT_CACHE_DIR", "./cache"),
            truncation_order=int(os.getenv("HYPERROOT_TRUNCATION_ORDER", "256")),
            height_limit=int(os.getenv("HYPERROOT_HEIGHT_LIMIT", "20")),
            output=os.getenv("HYPERROOT_OUTPUT", "pretty"),
            threads=int(os.getenv("HYPERROOT_THREADS", "1")),
            log_level=os.getenv("HYPERROOT_LOG_LEVEL", "INFO"),
        )

    def with_overrides(self, **overrides) -> "Config":
        """Copy with the given non-None fields replaced (command-line flags)."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return self.model_validate({**self.model_dump(), **changes})


config = Config.from_env()
