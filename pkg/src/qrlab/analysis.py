"""Monte-Carlo validation, payload sensitivity and string-match metrics."""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._backend import kernels
from .codec import AUTO, byte_capacity, decode, encode
from .corruption import (
    CorruptionKind,
    CorruptionSpec,
    burst_windows,
    cell_labels,
    check_seed,
    darken_windows,
    derive_rng,
    encoding_cells,
    sample_flips,
)
from .errors import BothEmpty, ConfigError, DecodeFailure, EmptyCorpus, LengthMismatch
from .symbol_model import MASKS, CodeGeometry, EccLevel, check_mask, geometry, region_map
from .theory import FORMAT_CAPACITY

CHUNK = 8192
DEFAULT_TEXT = "example.com"


class DecoderMode(str, enum.Enum):
    IDEAL = "ideal"
    FULL = "full"

    @classmethod
    def parse(cls, value: "DecoderMode | str") -> "DecoderMode":
        try:
            return value if isinstance(value, cls) else cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown decoder mode {value!r}; expected ideal or full") from None


@dataclass(frozen=True)
class TrialReport:
    geometry: str
    mask: int
    kind: str
    count: int
    trials: int
    successes: int
    rate: float
    stderr: float
    mode: str
    seed: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> dict:
        return asdict(self)


def _stderr(rate: float, trials: int) -> float:
    return math.sqrt(rate * (1.0 - rate) / trials)


def _kind_key(kind: CorruptionKind) -> int:
    return 0 if kind is CorruptionKind.FLIP else 1


def _chunk(args) -> int:
    version, level, mask, kind, count, seed, index, size, mode, text = args
    geom = geometry(version, level)
    # the stream depends on the corruption only, so both modes see the same errors
    rng = derive_rng(seed, _kind_key(kind), count, index)
    if kind is CorruptionKind.FLIP:
        picks = sample_flips(rng, len(encoding_cells(version)), count, size)
        if mode is DecoderMode.IDEAL:
            outcome = kernels.ideal_outcomes(picks, cell_labels(version), geom.t, FORMAT_CAPACITY)
            return int(outcome.sum())
    else:
        windows = burst_windows(version)
        picks = windows[rng.integers(0, len(windows), size=(size, count))]

    clean, _ = encode(text, version, level, mask)
    cells = encoding_cells(version)
    encoding = region_map(version).encoding
    wins = 0
    for row in picks:
        m = clean.copy()
        if kind is CorruptionKind.FLIP:
            hit = cells[row]
            m[hit[:, 0], hit[:, 1]] ^= 1
        else:
            darken_windows(m, encoding, row)
        try:
            wins += decode(m)[0] == text
        except DecodeFailure:
            pass
    return wins


def simulate(
    geom: CodeGeometry,
    mask: int,
    spec: CorruptionSpec,
    trials: int,
    seed: int | None = None,
    mode: DecoderMode | str = DecoderMode.IDEAL,
    *,
    text: str | None = None,
    jobs: int = 1,
) -> TrialReport:
    """Estimate the decoding success rate under ``spec``.

    Ideal mode counts a trial as a success when at most ``t`` codewords and at
    most three bits of one format copy are hit. Full mode corrupts an encoded
    symbol of ``text`` and requires :func:`qrlab.codec.decode` to return it
    exactly. ``seed`` defaults to ``spec.seed``; the result does not depend on
    ``jobs``.
    """
    mode = DecoderMode.parse(mode)
    mask = check_mask(mask)
    seed = check_seed(spec.seed if seed is None else seed)
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    if mode is DecoderMode.IDEAL:
        if spec.kind is not CorruptionKind.FLIP:
            raise ConfigError("ideal mode only models flip errors")
        if not geom.single_block:
            raise ConfigError(f"ideal mode needs a single-block geometry, {geom.name} has {len(geom.blocks)}")
    if spec.kind is CorruptionKind.FLIP and spec.count > geom.N:
        raise ConfigError(f"cannot flip {spec.count} of {geom.N} encoding-region bits")
    if text is None:
        text = DEFAULT_TEXT[: byte_capacity(geom)]
    jobs = max(1, int(jobs))

    tasks = []
    for index, start in enumerate(range(0, trials, CHUNK)):
        size = min(CHUNK, trials - start)
        tasks.append((geom.version, geom.level, mask, spec.kind, spec.count, seed, index, size, mode, text))
    if jobs == 1 or len(tasks) == 1:
        successes = sum(map(_chunk, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            successes = sum(pool.map(_chunk, tasks))
    rate = successes / trials
    return TrialReport(
        geometry=geom.name,
        mask=mask,
        kind=spec.kind.value,
        count=spec.count,
        trials=trials,
        successes=successes,
        rate=rate,
        stderr=_stderr(rate, trials),
        mode=mode.value,
        seed=seed,
    )


@dataclass(frozen=True)
class SensitivityReport:
    version: int
    level: str
    pairs: int
    skipped: int
    mean_bit_changes: float
    std: float
    minimum: int
    median: float
    maximum: int
    mask: int
    seed: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> dict:
        return asdict(self)


LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _letter_spots(text: str) -> list[int]:
    """Letter positions in the second-level label (the whole text if it has no dot)."""
    labels = text.split(".")
    k = max(len(labels) - 2, 0)
    start = sum(len(x) + 1 for x in labels[:k])
    return [start + i for i, ch in enumerate(labels[k]) if ch.isascii() and ch.isalpha()]


def mutate_label(text: str, rng: np.random.Generator) -> str:
    """Replace one letter of the second-level label with a different lowercase letter."""
    spots = _letter_spots(text)
    if not spots:
        raise ValueError(f"{text!r} has no letter in its second-level label")
    pos = spots[int(rng.integers(len(spots)))]
    choices = LETTERS.replace(text[pos].lower(), "")
    return text[:pos] + choices[int(rng.integers(len(choices)))] + text[pos + 1 :]


def bit_changes(a: str, b: str, version: int, level: EccLevel | str, mask: int = 0) -> int:
    """Encoding-region cells that differ between the symbols of ``a`` and ``b``."""
    ma, _ = encode(a, version, level, mask)
    mb, _ = encode(b, version, level, mask)
    return int((ma != mb)[region_map(version).encoding].sum())


def sensitivity(
    version: int,
    level: EccLevel | str,
    corpus: Sequence[str],
    pairs: int,
    seed: int,
    mask: int = 0,
) -> SensitivityReport:
    """Mean bit changes caused by a single-letter edit, at a fixed mask.

    Usable corpus entries are taken in order, cycling when ``pairs`` exceeds
    their number. Entries over capacity or without a letter to change are
    skipped and counted in the report.
    """
    level = EccLevel.parse(level)
    geom = geometry(version, level)
    seed = check_seed(seed)
    cap = byte_capacity(geom)
    usable = [s for s in corpus if s.isascii() and 0 < len(s) <= cap and _letter_spots(s)]
    if not usable:
        raise EmptyCorpus(f"no corpus entry fits {geom.name} ({cap} bytes) with a letter to change")
    if pairs < 1:
        raise ConfigError("pairs must be at least 1")
    counts = []
    for i in range(pairs):
        text = usable[i % len(usable)]
        mutant = mutate_label(text, derive_rng(seed, i))
        counts.append(bit_changes(text, mutant, version, level, mask))
    arr = np.array(counts)
    return SensitivityReport(
        version=geom.version,
        level=level.name,
        pairs=len(counts),
        skipped=len(corpus) - len(usable),
        mean_bit_changes=float(arr.mean()),
        std=float(arr.std()),
        minimum=int(arr.min()),
        median=float(np.median(arr)),
        maximum=int(arr.max()),
        mask=mask,
        seed=seed,
    )


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit-cost insertions, deletions and substitutions."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str) -> float:
    """1 - Levenshtein(a, b) / max(len(a), len(b))."""
    longest = max(len(a), len(b))
    if longest == 0:
        raise BothEmpty("similarity is undefined for two empty strings")
    return 1.0 - levenshtein(a, b) / longest


def success_rate(predictions: Sequence[str], truths: Sequence[str]) -> float:
    if len(predictions) != len(truths):
        raise LengthMismatch(f"{len(predictions)} predictions for {len(truths)} truths")
    if not truths:
        raise LengthMismatch("success rate of an empty list is undefined")
    return sum(p == t for p, t in zip(predictions, truths)) / len(truths)


def mask_distribution(
    corpus: Sequence[str],
    version: int,
    level: EccLevel | str,
    *,
    scoring: str = "iso",
    padding: str = "iso",
) -> dict[int, Fraction]:
    """Share of each mask under automatic selection, as exact fractions."""
    if not corpus:
        raise EmptyCorpus("mask distribution of an empty corpus")
    counts = dict.fromkeys(MASKS, 0)
    for text in corpus:
        _, mask = encode(text, version, level, AUTO, padding=padding, scoring=scoring)
        counts[mask] += 1
    return {m: Fraction(c, len(corpus)) for m, c in counts.items()}


__all__ = [
    "CHUNK",
    "DecoderMode",
    "SensitivityReport",
    "TrialReport",
    "bit_changes",
    "levenshtein",
    "mask_distribution",
    "mutate_label",
    "sensitivity",
    "similarity",
    "simulate",
    "success_rate",
]
