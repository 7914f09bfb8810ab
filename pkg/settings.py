"""
Reflectwist Settings
====================
Size gates and runtime knobs, read from the environment (and an optional
.env file written by quick_setup.sh).
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError, SizeLimitExceeded

load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Gates for every exhaustive search in the package"""
    size_gate: int = 1_000_000      # max materialized states
    word_gate: int = 10_000         # max words for exhaustive sweeps
    max_order: int = 8              # groups / skew braces
    jobs: int = 1
    log_level: str = "WARNING"


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}", {"variable": name})
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {value}", {"variable": name})
    return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process"""
    return Settings(
        size_gate=_positive_int("REFLECTWIST_SIZE_GATE", Settings.size_gate),
        word_gate=_positive_int("REFLECTWIST_WORD_GATE", Settings.word_gate),
        max_order=_positive_int("REFLECTWIST_MAX_ORDER", Settings.max_order),
        jobs=_positive_int("REFLECTWIST_JOBS", Settings.jobs),
        log_level=os.getenv("REFLECTWIST_LOG_LEVEL", Settings.log_level).upper(),
    )


def check_gate(states: int, what: str, gate: Optional[int] = None) -> None:
    """Raise SizeLimitExceeded when a search would materialize too many states"""
    limit = gate if gate is not None else get_settings().size_gate
    if states > limit:
        raise SizeLimitExceeded(
            f"{what}: {states} states exceed the gate of {limit}",
            {"states": int(states), "gate": int(limit), "what": what},
        )
