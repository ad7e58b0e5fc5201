"""Resource caps, overridable through the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_MAX_ENUM = "STRONGGRADE_MAX_ENUM"
ENV_MAX_DEPTH = "STRONGGRADE_MAX_DEPTH"


@dataclass(frozen=True)
class Limits:
    max_enum: int = 200_000
    max_depth: int = 8


def limits() -> Limits:
    """Read the current caps; unset or empty variables keep the defaults."""
    base = Limits()
    enum = os.environ.get(ENV_MAX_ENUM) or base.max_enum
    depth = os.environ.get(ENV_MAX_DEPTH) or base.max_depth
    return Limits(max_enum=int(enum), max_depth=int(depth))
