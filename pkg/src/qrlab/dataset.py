"""Corpora, evaluation-set generators, symbol linearization and JSONL export."""
from __future__ import annotations

import enum
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .codec import AUTO, byte_capacity, encode
from .corruption import CorruptionSpec, check_seed, corrupt, derive_rng
from .errors import CapacityExceeded, ConfigError, EmptyCorpus, InvalidText, MissingWordlist
from .symbol_model import EccLevel, as_matrix, check_mask, check_version, geometry

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TLDS = (
    "com", "org", "co", "net", "io", "jp", "de", "fr", "me",
    "site", "cc", "info", "bet", "global", "ua", "gov", "ru",
)
LEET_MAP = {"a": "4", "e": "3", "i": "1", "o": "0", "s": "5", "t": "7", "b": "8", "g": "9"}
LETTERS = "abcdefghijklmnopqrstuvwxyz"
RANDOM_WORD_LENGTHS = (3, 8)


class LinearizationOrder(str, enum.Enum):
    """Flattening of a symbol into a bit string.

    A: row-major. B: column-major. C: rows alternating left-to-right and
    right-to-left. D: the two-column bands of codeword placement, right to
    left, alternating upward and downward and covering every cell; the
    timing column 6 is read downward on its own.
    """

    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @classmethod
    def parse(cls, value: "LinearizationOrder | str") -> "LinearizationOrder":
        try:
            return value if isinstance(value, cls) else cls(str(value).strip().upper())
        except ValueError:
            raise ConfigError(f"unknown linearization order {value!r}; expected A, B, C or D") from None


@lru_cache(maxsize=None)
def order_indices(side: int, order: LinearizationOrder | str) -> np.ndarray:
    """Flat cell index (``row * side + col``) at each position of the bit string."""
    order = LinearizationOrder.parse(order)
    grid = np.arange(side * side).reshape(side, side)
    if order is LinearizationOrder.A:
        seq = grid.ravel()
    elif order is LinearizationOrder.B:
        seq = grid.T.ravel()
    elif order is LinearizationOrder.C:
        rows = [grid[r] if r % 2 == 0 else grid[r, ::-1] for r in range(side)]
        seq = np.concatenate(rows)
    else:
        parts = []
        right = side - 1
        while right >= 1:
            if right == 6:
                parts.append(grid[:, 6])
                right = 5
            upward = ((right + 1) & 2) == 0
            band = grid[:, [right, right - 1]]
            parts.append((band[::-1] if upward else band).ravel())
            right -= 2
        seq = np.concatenate(parts)
    seq = seq.astype(np.intp)
    seq.flags.writeable = False
    return seq


def linearize(matrix: np.ndarray, order: LinearizationOrder | str) -> str:
    m = as_matrix(matrix)
    bits = m.ravel()[order_indices(m.shape[0], order)]
    return (bits + ord("0")).astype(np.uint8).tobytes().decode("ascii")


def delinearize(bits: str, order: LinearizationOrder | str) -> np.ndarray:
    side = int(round(len(bits) ** 0.5))
    if side * side != len(bits) or set(bits) - {"0", "1"}:
        raise ConfigError("bit string must hold side**2 characters from {0, 1}")
    values = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    flat = np.empty(side * side, dtype=np.uint8)
    flat[order_indices(side, order)] = values
    return as_matrix(flat.reshape(side, side))


# corpora


def parse_ranking(lines: Iterable[str]) -> tuple[list[str], list[tuple[int, str]]]:
    """Domains from ``rank,domain`` lines, plus ``(line number, line)`` of skipped ones."""
    ranked = []
    skipped = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        rank, sep, domain = line.partition(",")
        domain = domain.strip().lower()
        try:
            rank = int(rank)
        except ValueError:
            rank = None
        if not sep or rank is None or not domain or "," in domain:
            skipped.append((lineno, line))
            continue
        ranked.append((rank, lineno, domain))
    ranked.sort()
    seen = set()
    domains = []
    for _, _, domain in ranked:
        if domain not in seen:
            seen.add(domain)
            domains.append(domain)
    return domains, skipped


def ingest_ranking(path: str | Path) -> list[str]:
    """Deduplicated, lowercased domains of a Tranco-style CSV in rank order."""
    with open(path, encoding="utf-8") as fh:
        domains, skipped = parse_ranking(fh)
    if skipped:
        log.warning("%s: skipped %d malformed line(s), first at line %d", path, len(skipped), skipped[0][0])
    if not domains:
        raise EmptyCorpus(f"{path} holds no domains")
    return domains


def load_wordlist(path: str | Path) -> list[str]:
    """One word per line; blank lines ignored, words lowercased."""
    with open(path, encoding="utf-8") as fh:
        words = [w.strip().lower() for w in fh]
    return [w for w in words if w]


def usable_words(words: Iterable[str]) -> list[str]:
    """Words made only of ASCII letters (byte mode carries no accents)."""
    return [w for w in words if w.isascii() and w.isalpha()]


# evaluation sets


class EvalKind(str, enum.Enum):
    ENGLISH = "english"
    GERMAN = "german"
    SWAHILI = "swahili"
    SHUFFLE = "shuffle"
    RANDOM_ALPHABET = "random-alphabet"
    MISSPELLED = "misspelled"
    LEETSPEAK = "leetspeak"
    NO_TLD = "no-tld"

    @classmethod
    def parse(cls, value: "EvalKind | str") -> "EvalKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown evaluation set {value!r}; expected one of {names}") from None

    @property
    def wordlist(self) -> str | None:
        if self is EvalKind.RANDOM_ALPHABET:
            return None
        if self in (EvalKind.GERMAN, EvalKind.SWAHILI):
            return self.value
        return "english"


@dataclass(frozen=True)
class EvalSetSpec:
    kind: EvalKind
    count: int
    seed: int
    leet_map: Mapping[str, str] = field(default_factory=lambda: dict(LEET_MAP))

    def __post_init__(self):
        object.__setattr__(self, "kind", EvalKind.parse(self.kind))
        if self.count < 1:
            raise ConfigError("count must be at least 1")
        check_seed(self.seed)
        check_leet_map(self.leet_map)


def check_leet_map(mapping: Mapping[str, str]) -> dict[str, str]:
    mapping = dict(mapping)
    for k, v in mapping.items():
        if len(k) != 1 or k not in LETTERS or len(v) != 1 or not v.isdigit():
            raise ConfigError(f"leet map entries must send a lowercase letter to a digit, got {k!r}: {v!r}")
    if len(set(mapping.values())) != len(mapping):
        raise ConfigError("leet map must be injective")
    return mapping


def load_leet_map(path: str | Path) -> dict[str, str]:
    """Leet map from a JSON object such as ``{"a": "4", "e": "3"}``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return check_leet_map(data)


def misspell(word: str, rng: np.random.Generator) -> str:
    """Replace one random letter with a different lowercase letter."""
    pos = int(rng.integers(len(word)))
    choices = LETTERS.replace(word[pos], "")
    return word[:pos] + choices[int(rng.integers(len(choices)))] + word[pos + 1 :]


def leetify(word: str, rng: np.random.Generator, mapping: Mapping[str, str] = LEET_MAP) -> str:
    """Swap one random mappable letter for its digit (``cat`` -> ``c4t``)."""
    spots = [i for i, ch in enumerate(word) if ch in mapping]
    if not spots:
        raise ValueError(f"{word!r} has no letter in the leet map")
    pos = spots[int(rng.integers(len(spots)))]
    return word[:pos] + mapping[word[pos]] + word[pos + 1 :]


def unleet(word: str, mapping: Mapping[str, str] = LEET_MAP) -> str:
    inverse = {v: k for k, v in mapping.items()}
    return "".join(inverse.get(ch, ch) for ch in word)


def shuffle_word(word: str, rng: np.random.Generator) -> str:
    return "".join(word[i] for i in rng.permutation(len(word)))


def random_word(rng: np.random.Generator) -> str:
    lo, hi = RANDOM_WORD_LENGTHS
    return "".join(LETTERS[i] for i in rng.integers(0, 26, size=int(rng.integers(lo, hi + 1))))


def gen_evalset(spec: EvalSetSpec, wordlists: Mapping[str, Sequence[str]]) -> list[str]:
    """``spec.count`` domains of the form word1word2.tld (no ``.tld`` for no-TLD)."""
    kind = spec.kind
    rng = derive_rng(spec.seed, list(EvalKind).index(kind))
    words: list[str] = []
    if kind.wordlist is not None:
        words = usable_words(wordlists.get(kind.wordlist) or ())
        if kind is EvalKind.LEETSPEAK:
            words = [w for w in words if any(ch in spec.leet_map for ch in w)]
        if not words:
            raise MissingWordlist(f"the {kind.value} set needs a nonempty {kind.wordlist} wordlist")

    def pick() -> str:
        return words[int(rng.integers(len(words)))]

    out = []
    for _ in range(spec.count):
        if kind is EvalKind.RANDOM_ALPHABET:
            pair = [random_word(rng), random_word(rng)]
        else:
            pair = [pick(), pick()]
        if kind is EvalKind.SHUFFLE:
            pair = [shuffle_word(w, rng) for w in pair]
        elif kind is EvalKind.MISSPELLED:
            pair = [misspell(w, rng) for w in pair]
        elif kind is EvalKind.LEETSPEAK:
            pair = [leetify(w, rng, spec.leet_map) for w in pair]
        sld = "".join(pair)
        if kind is EvalKind.NO_TLD:
            out.append(sld)
        else:
            out.append(f"{sld}.{TLDS[int(rng.integers(len(TLDS)))]}")
    return out


# export


@dataclass(frozen=True)
class DatasetRecord:
    bits: str
    text: str
    version: int
    ecc: str
    mask: int
    order: str
    corruption: dict | None = None
    schema: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {
                "bits": self.bits,
                "text": self.text,
                "version": self.version,
                "ecc": self.ecc,
                "mask": self.mask,
                "order": self.order,
                "corruption": self.corruption,
                "schema": self.schema,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "DatasetRecord":
        return cls(**json.loads(line))

    def matrix(self) -> np.ndarray:
        return delinearize(self.bits, self.order)


def _record_seed(seed: int, index: int, variant: int) -> int:
    return int(derive_rng(seed, index, variant).integers(0, 1 << 64, dtype=np.uint64))


def _records(args) -> list[str] | None:
    index, text, version, level, mask, order, augment, seed, padding, scoring = args
    try:
        clean, used = encode(text, version, level, mask, padding=padding, scoring=scoring)
    except (CapacityExceeded, InvalidText):
        return None
    base = dict(text=text, version=version, ecc=level.name, mask=used, order=order.value)
    lines = [DatasetRecord(bits=linearize(clean, order), **base).to_json()]
    for variant, (kind, count) in enumerate(augment, 1):
        spec = CorruptionSpec(kind, count, _record_seed(seed, index, variant))
        damaged, _ = corrupt(clean, spec)
        lines.append(DatasetRecord(bits=linearize(damaged, order), corruption=spec.as_dict(), **base).to_json())
    return lines


def export(
    corpus: Sequence[str],
    version: int,
    level: EccLevel | str,
    mask: int | str,
    order: LinearizationOrder | str,
    augment: Sequence[CorruptionSpec] = (),
    seed: int = 0,
    sink: IO[str] | None = None,
    *,
    jobs: int = 1,
    padding: str = "iso",
    scoring: str = "iso",
) -> int:
    """Write one JSON line per corpus entry and augmentation variant.

    The clean record comes first, followed by one corrupted copy per entry of
    ``augment`` (their seeds are ignored; each copy gets a seed derived from
    ``seed``, the entry index and the variant, stored in the record). Entries
    that cannot be encoded are skipped with a warning. Returns the number of
    records written.
    """
    if not corpus:
        raise EmptyCorpus("nothing to export")
    if sink is None:
        raise ConfigError("export needs a writable sink")
    version = check_version(version)
    level = EccLevel.parse(level)
    order = LinearizationOrder.parse(order)
    seed = check_seed(seed)
    if not (isinstance(mask, str) and mask.lower() == AUTO):
        mask = check_mask(mask)
    variants = tuple((a.kind, a.count) for a in augment)
    tasks = [
        (i, text, version, level, mask, order, variants, seed, padding, scoring)
        for i, text in enumerate(corpus)
    ]
    written = 0
    skipped = 0
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_records, tasks, chunksize=max(1, len(tasks) // (8 * jobs)))
            written, skipped = _drain(results, sink)
    else:
        written, skipped = _drain(map(_records, tasks), sink)
    if skipped:
        cap = byte_capacity(geometry(version, level))
        log.warning("skipped %d corpus entries that are not ASCII text of 1..%d bytes", skipped, cap)
    return written


def _drain(results, sink: IO[str]) -> tuple[int, int]:
    written = skipped = 0
    for lines in results:
        if lines is None:
            skipped += 1
            continue
        for line in lines:
            sink.write(line)
            sink.write("\n")
        written += len(lines)
    return written, skipped
