"""
Environment-driven defaults for the command line.

Values come from the process environment, after loading a .env file from the
working directory if one exists. Command-line flags always win.
Without ATM_ROUTING_TIME_LIMIT searches run without a wall-clock cap.
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

ENV_PREFIX = "ATM_ROUTING_"


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    time_limit: Optional[float] = None
    output_dir: str = "."
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Raises:
            ValueError: a variable is set but cannot be parsed
        """
        load_dotenv()
        defaults = cls()

        def read(name: str, cast, default):
            raw = os.getenv(ENV_PREFIX + name)
            if raw is None or raw.strip() == "":
                return default
            try:
                return cast(raw.strip())
            except ValueError as exc:
                raise ValueError(f"{ENV_PREFIX}{name}={raw!r} is not a valid value") from exc

        settings = cls(
            seed=read("SEED", int, defaults.seed),
            time_limit=read("TIME_LIMIT", float, defaults.time_limit),
            output_dir=read("OUTPUT_DIR", str, defaults.output_dir),
            log_level=read("LOG_LEVEL", str.upper, defaults.log_level),
        )
        if settings.seed < 0:
            raise ValueError(f"{ENV_PREFIX}SEED must be >= 0")
        if settings.time_limit is not None and settings.time_limit <= 0:
            raise ValueError(f"{ENV_PREFIX}TIME_LIMIT must be positive")
        return settings
