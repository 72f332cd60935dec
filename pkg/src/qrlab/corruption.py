"""Random corruption of the encoding region: uniform bit flips and 3x3 bursts.

Randomness comes from numpy's PCG64 generator seeded through
``SeedSequence(seed, spawn_key=keys)``; :func:`derive_rng` is the only way
this package turns a user seed into a stream, so a ``(seed, keys)`` pair
recorded next to a dataset is enough to regenerate it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import ConfigError, CountExceedsRegion
from .symbol_model import (
    Region,
    RegionMap,
    _layout,
    as_matrix,
    check_version,
    region_map,
    version_for_side,
)

RNG_ALGORITHM = "numpy-PCG64/SeedSequence"
BURST_SIZE = 3
SEED_BITS = 64


class CorruptionKind(str, enum.Enum):
    FLIP = "flip"
    BURST = "burst"

    @classmethod
    def parse(cls, value: "CorruptionKind | str") -> "CorruptionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown corruption kind {value!r}; expected flip or burst") from None


@dataclass(frozen=True)
class CorruptionSpec:
    kind: CorruptionKind
    count: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", CorruptionKind.parse(self.kind))
        if int(self.count) != self.count or self.count < 0:
            raise ConfigError(f"corruption count must be a non-negative integer, got {self.count!r}")
        check_seed(self.seed)

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "count": int(self.count), "seed": int(self.seed)}


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 1 << SEED_BITS:
        raise ConfigError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``(seed, *keys)``.

    Streams for different key tuples are statistically independent, which is
    how per-trial, per-chunk and per-record randomness is split.
    """
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))


@lru_cache(maxsize=None)
def encoding_cells(version: int) -> np.ndarray:
    """(row, col) of every encoding-region cell in row-major order."""
    cells = np.argwhere(region_map(check_version(version)).encoding).astype(np.intp)
    cells.flags.writeable = False
    return cells


@lru_cache(maxsize=None)
def cell_labels(version: int) -> np.ndarray:
    """Label per encoding cell (same order as :func:`encoding_cells`).

    Data/ECC cells carry the index of their codeword in transmission order,
    format cells -1 (first copy) or -2 (second copy), remainder cells -3.
    """
    lay = _layout(check_version(version))
    side = lay.side
    grid = np.full((side, side), -3, dtype=np.int32)
    data = lay.regions.classes[lay.positions[:, 0], lay.positions[:, 1]] == Region.DATA_ECC
    pos = lay.positions[data]
    grid[pos[:, 0], pos[:, 1]] = np.arange(len(pos), dtype=np.int32) // 8
    grid[lay.format1[:, 0], lay.format1[:, 1]] = -1
    grid[lay.format2[:, 0], lay.format2[:, 1]] = -2
    cells = encoding_cells(version)
    labels = grid[cells[:, 0], cells[:, 1]]
    labels.flags.writeable = False
    return labels


@lru_cache(maxsize=None)
def burst_windows(version: int) -> np.ndarray:
    """Top-left corners of 3x3 windows inside the symbol touching the encoding region."""
    enc = region_map(check_version(version)).encoding
    side = enc.shape[0]
    span = side - BURST_SIZE + 1
    hits = np.zeros((span, span), dtype=bool)
    for dr in range(BURST_SIZE):
        for dc in range(BURST_SIZE):
            hits |= enc[dr : dr + span, dc : dc + span]
    windows = np.argwhere(hits).astype(np.intp)
    windows.flags.writeable = False
    return windows


def sample_flips(rng: np.random.Generator, population: int, n: int, trials: int) -> np.ndarray:
    """``(trials, n)`` distinct indices per row, uniform without replacement."""
    if n > population:
        raise CountExceedsRegion(f"cannot flip {n} of {population} encoding-region cells")
    bounds = population - np.arange(n, dtype=np.int64)
    draws = rng.integers(0, bounds, size=(trials, n), dtype=np.int64) if n else np.empty((trials, 0), np.int64)
    return kernels.partial_shuffle(draws, population)


def _check_map(m: np.ndarray, regions: RegionMap) -> int:
    if m.shape[0] != regions.side:
        raise ConfigError(f"matrix side {m.shape[0]} does not match region map side {regions.side}")
    return regions.version


def flip_errors(
    matrix: np.ndarray, regions: RegionMap, n: int, seed: int
) -> tuple[np.ndarray, frozenset[tuple[int, int]]]:
    """Invert ``n`` distinct encoding-region cells chosen uniformly at random."""
    m = as_matrix(matrix)
    version = _check_map(m, regions)
    cells = encoding_cells(version)
    if n < 0:
        raise ConfigError("flip count must be non-negative")
    picks = cells[sample_flips(derive_rng(seed), len(cells), int(n), 1)[0]]
    out = m.copy()
    out[picks[:, 0], picks[:, 1]] ^= 1
    return out, frozenset((int(r), int(c)) for r, c in picks)


def burst_errors(
    matrix: np.ndarray, regions: RegionMap, k: int, seed: int
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Darken the encoding-region cells of ``k`` random 3x3 windows (overlaps allowed)."""
    m = as_matrix(matrix)
    version = _check_map(m, regions)
    if k < 0:
        raise ConfigError("burst count must be non-negative")
    windows = burst_windows(version)
    picks = windows[derive_rng(seed).integers(0, len(windows), size=int(k))]
    out = m.copy()
    darken_windows(out, regions.encoding, picks)
    return out, [(int(r), int(c)) for r, c in picks]


def darken_windows(matrix: np.ndarray, encoding: np.ndarray, corners: np.ndarray) -> None:
    for r, c in corners:
        block = (slice(r, r + BURST_SIZE), slice(c, c + BURST_SIZE))
        matrix[block] |= encoding[block]


def corrupt(matrix: np.ndarray, spec: CorruptionSpec) -> tuple[np.ndarray, dict]:
    """Apply ``spec`` and return the result with a JSON-ready sidecar record."""
    m = as_matrix(matrix)
    regions = region_map(version_for_side(m.shape[0]))
    meta = spec.as_dict()
    meta["rng"] = RNG_ALGORITHM
    if spec.kind is CorruptionKind.FLIP:
        out, flipped = flip_errors(m, regions, spec.count, spec.seed)
        meta["flipped"] = sorted([r, c] for r, c in flipped)
    else:
        out, windows = burst_errors(m, regions, spec.count, spec.seed)
        meta["windows"] = [[r, c] for r, c in windows]
    return out, meta
