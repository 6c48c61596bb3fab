"""
Tunable defaults, read from the environment (and a `.env` file if present).

    NFBISIM_FUEL        reduction steps per evaluation      (1000)
    NFBISIM_DEPTH       closure search / expansion depth    (6)
    NFBISIM_MAX_PAIRS   witness size bound for `prove`      (32)
    NFBISIM_WORKERS     threads for pairs and corpus        (1)
    NFBISIM_LOG_LEVEL   root logger level                   (WARNING)
    NFBISIM_CORPUS      corpus directory                    (bundled corpus)
    NFBISIM_ENV_FILE    dotenv file to load                 (nearest .env upwards from cwd)

The bounds agree with the command line: every count is at least 1.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import find_dotenv, load_dotenv

load_dotenv(os.getenv("NFBISIM_ENV_FILE") or find_dotenv(usecwd=True))

PACKAGE_DIR = Path(__file__).resolve().parent
SCHEMAS = PACKAGE_DIR / "schemas"
CORPUS = Path(os.getenv("NFBISIM_CORPUS") or PACKAGE_DIR / "corpus").resolve()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _int_env(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    fuel: int = 1000
    depth: int = 6
    max_pairs: int = 32
    workers: int = 1
    log_level: str = "WARNING"

    @property
    def log_level_value(self) -> int:
        return getattr(logging, self.log_level)


def load_settings() -> Settings:
    level = (os.getenv("NFBISIM_LOG_LEVEL") or "WARNING").strip().upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"NFBISIM_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {level!r}")
    return Settings(
        fuel=_int_env("NFBISIM_FUEL", 1000),
        depth=_int_env("NFBISIM_DEPTH", 6),
        max_pairs=_int_env("NFBISIM_MAX_PAIRS", 32),
        workers=_int_env("NFBISIM_WORKERS", 1),
        log_level=level,
    )
