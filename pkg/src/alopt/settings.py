"""Environment fallbacks for seeds and worker counts."""

from __future__ import annotations

import os

from alopt.exceptions import SpecError

SEED_ENV = "ALOPT_SEED"
THREADS_ENV = "ALOPT_THREADS"
DEFAULT_SEED = 0
DEFAULT_THREADS = 1


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise SpecError(name, f"expected an integer, got {raw!r}") from e


def resolve_seed(seed: int | None = None) -> int:
    """Explicit seed, else ALOPT_SEED, else 0."""
    if seed is not None:
        return seed
    env = _env_int(SEED_ENV)
    return env if env is not None else DEFAULT_SEED


def resolve_threads(threads: int | None = None) -> int:
    """Explicit worker cap, else ALOPT_THREADS, else 1."""
    value = threads if threads is not None else _env_int(THREADS_ENV)
    if value is None:
        return DEFAULT_THREADS
    if value < 1:
        raise SpecError("threads", f"must be >= 1, got {value}")
    return value
