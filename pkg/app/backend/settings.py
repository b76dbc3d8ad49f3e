"""
Runtime configuration loaded from the environment (and a local .env file outside production).
"""
import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger("condorcet")

LAW_ORDER_ID = "lex-aN2aN3bN1bN3cN1cN2"
COMPARATOR_ID = "lexmax-sorted-ranks"

_dotenv_loaded = False


class Settings(BaseModel):
    jobs: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "INFO"
    frontier_factor: int = Field(default=8, ge=1)
    dedup_memory_limit: int = Field(default=5_000_000, ge=1)
    checkpoint_dir: str = "checkpoints"
    max_degree: int = Field(default=7, ge=3)

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value}")
        return value


def _env(name: str) -> Optional[str]:
    value = os.environ.get(name)
    return value if value not in (None, "") else None


def load_settings() -> Settings:
    """Build Settings from CONDORCET_* variables; loads .env once when not in production"""
    global _dotenv_loaded
    if not _dotenv_loaded and os.getenv("RUNNING_IN_PRODUCTION", "false").lower() != "true":
        logger.debug("Running in development mode, loading from .env file")
        load_dotenv()
        _dotenv_loaded = True

    values = {
        "jobs": _env("CONDORCET_JOBS"),
        "log_level": _env("CONDORCET_LOG_LEVEL"),
        "frontier_factor": _env("CONDORCET_FRONTIER_FACTOR"),
        "dedup_memory_limit": _env("CONDORCET_DEDUP_MEMORY_LIMIT"),
        "checkpoint_dir": _env("CONDORCET_CHECKPOINT_DIR"),
        "max_degree": _env("CONDORCET_MAX_DEGREE"),
    }
    return Settings(**{key: value for key, value in values.items() if value is not None})
