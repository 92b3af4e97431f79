"""Random benchmark instances drawn from truncated two-mode Gaussians."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from alopt.exceptions import GenerationError, SpecError
from alopt.settings import resolve_seed
from alopt.types import SIZES, Container, ContainerSize, Payload

logger = logging.getLogger(__name__)

# Masses are drawn at 20 bins and scaled by 20/N
BASE_BIN_COUNT = 20


@dataclass(frozen=True, slots=True)
class ModeMixture:
    """Equal-weight mixture of two Gaussians sharing sigma = (high - low) / 3,
    truncated to the open interval (window_low, window_high)."""

    low_mode: float
    high_mode: float
    window_low: float
    window_high: float

    def __post_init__(self) -> None:
        if not self.window_low < self.low_mode <= self.high_mode < self.window_high:
            raise SpecError(
                "mixture",
                f"window ({self.window_low}, {self.window_high}) must contain both modes "
                f"{self.low_mode} and {self.high_mode}",
            )

    @property
    def sigma(self) -> float:
        return (self.high_mode - self.low_mode) / 3

    def scaled_window(self, bin_count: int) -> tuple[float, float]:
        scale = BASE_BIN_COUNT / bin_count
        return self.window_low * scale, self.window_high * scale


DEFAULT_MIXTURES: dict[ContainerSize, ModeMixture] = {
    1: ModeMixture(1500, 3500, 1300, 3700),
    2: ModeMixture(700, 1800, 500, 2000),
    3: ModeMixture(3200, 7000, 3000, 7200),
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Counts per size, bin count, seed and per-size mass distributions."""

    DEFAULT_OVERSAMPLE = 1000
    DEFAULT_MAX_EXTRA_DRAWS = 10**6

    n1: int
    n2: int
    n3: int
    bin_count: int
    seed: int | None = None
    mixtures: dict[ContainerSize, ModeMixture] = field(default_factory=lambda: dict(DEFAULT_MIXTURES))
    oversample: int = DEFAULT_OVERSAMPLE
    max_extra_draws: int = DEFAULT_MAX_EXTRA_DRAWS

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "n3"):
            if getattr(self, name) < 0:
                raise SpecError(name, f"must be >= 0, got {getattr(self, name)}")
        if self.n1 + self.n2 + self.n3 < 1:
            raise SpecError("counts", "need at least one container")
        if self.bin_count < 2:
            raise SpecError("bin_count", f"need at least 2 bins, got {self.bin_count}")
        if self.oversample < 1:
            raise SpecError("oversample", f"must be >= 1, got {self.oversample}")
        if set(self.mixtures) != set(SIZES):
            raise SpecError("mixtures", "need one mixture per size 1, 2, 3")
        object.__setattr__(self, "seed", resolve_seed(self.seed))

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.n1, self.n2, self.n3

    @property
    def n(self) -> int:
        return self.n1 + self.n2 + self.n3


def round_half_away(values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Round to integers with halves away from zero."""
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def split_sizes(n: int) -> tuple[int, int, int]:
    """Split n containers into about n/2, n/3 and n/6 per size, summing to n.

    Each share is floored, then the remaining units go to the largest
    fractional remainders; ties favor the smaller size.
    """
    if n < 1:
        raise SpecError("n", f"must be >= 1, got {n}")
    shares = (n / 2, n / 3, n / 6)
    counts = [math.floor(s) for s in shares]
    remainders = [s - c for s, c in zip(shares, counts, strict=True)]
    order = sorted(range(3), key=lambda i: (-round(remainders[i], 9), i))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return counts[0], counts[1], counts[2]


def sample_masses(
    rng: np.random.Generator,
    mixture: ModeMixture,
    count: int,
    bin_count: int,
    *,
    oversample: int = GeneratorConfig.DEFAULT_OVERSAMPLE,
    max_extra_draws: int = GeneratorConfig.DEFAULT_MAX_EXTRA_DRAWS,
    size: int = 0,
) -> npt.NDArray[np.int64]:
    """Draw ``count`` integer masses for one size class.

    Each round draws ``oversample * count`` values around each mode, keeps
    those whose scaled and rounded mass lies strictly inside the scaled
    window, and finally samples ``count`` of the pool without replacement.

    Raises:
        GenerationError: If the window cannot be filled within the retry cap
    """
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    scale = BASE_BIN_COUNT / bin_count
    lo, hi = mixture.scaled_window(bin_count)
    per_mode = oversample * count
    pool: list[npt.NDArray[np.float64]] = []
    accepted = 0
    extra = 0
    while True:
        draws = np.concatenate(
            [
                rng.normal(mixture.low_mode, mixture.sigma, per_mode),
                rng.normal(mixture.high_mode, mixture.sigma, per_mode),
            ]
        )
        inside = draws[(draws > mixture.window_low) & (draws < mixture.window_high)]
        scaled = round_half_away(inside * scale)
        kept = scaled[(scaled > lo) & (scaled < hi) & (scaled >= 1)]
        pool.append(kept)
        accepted += kept.size
        if accepted >= count:
            break
        extra += 2 * per_mode
        if extra > max_extra_draws:
            raise GenerationError(size, count, accepted)
        logger.debug("Size %d: %d of %d accepted, drawing again", size, accepted, count)
    values = np.concatenate(pool)
    chosen = rng.choice(values.size, size=count, replace=False)
    return values[chosen].astype(np.int64)


def generate_masses(config: GeneratorConfig) -> Payload:
    """Generate a payload; ids run 1..n1 for size 1, then size 2, then size 3.

    Each size class draws from its own stream, spawned from the seed in size
    order, so adding containers of one size leaves the others unchanged.
    """
    assert config.seed is not None
    streams = np.random.SeedSequence(config.seed).spawn(len(SIZES))
    containers: list[Container] = []
    next_id = 1
    for size, count, stream in zip(SIZES, config.counts, streams, strict=True):
        rng = np.random.Generator(np.random.PCG64(stream))
        masses = sample_masses(
            rng,
            config.mixtures[size],
            count,
            config.bin_count,
            oversample=config.oversample,
            max_extra_draws=config.max_extra_draws,
            size=size,
        )
        for mass in masses.tolist():
            containers.append(Container(next_id, size, int(mass)))
            next_id += 1
    logger.debug(
        "Generated n=%d (%d, %d, %d) for N=%d, seed=%d",
        config.n,
        *config.counts,
        config.bin_count,
        config.seed,
    )
    return Payload(tuple(containers))
