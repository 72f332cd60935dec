"""Symbol geometry for QR versions 1-3.

A symbol is a ``numpy.ndarray`` of dtype ``uint8`` and shape ``(side, side)``
holding 1 for dark and 0 for light modules, indexed ``[row, col]`` with row 0
at the top. All per-version layout data is computed once and cached as
read-only arrays.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import InvalidSymbol

VERSIONS = (1, 2, 3)
MASKS = tuple(range(8))

SymbolMatrix = np.ndarray


class EccLevel(enum.IntEnum):
    """Error correction level, ordered by redundancy."""

    L = 0
    M = 1
    Q = 2
    H = 3

    @classmethod
    def parse(cls, value: "EccLevel | str") -> "EccLevel":
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown ECC level {value!r}") from None

    @property
    def format_bits(self) -> int:
        # two-bit indicator stored in the format word
        return (1, 0, 3, 2)[self]


class Region(enum.IntEnum):
    FUNCTION = 0
    DATA_ECC = 1
    FORMAT = 2
    REMAINDER = 3


@dataclass(frozen=True)
class CodeGeometry:
    """Bit and codeword budget of one (version, level) pair.

    ``blocks`` lists ``(total_codewords, data_codewords)`` per Reed-Solomon
    block in transmission order.
    """

    version: int
    level: EccLevel
    N: int
    N_d: int
    N_f: int
    N_r: int
    M: int
    M_ecc: int
    t: int
    blocks: tuple[tuple[int, int], ...]

    @property
    def data_codewords(self) -> int:
        return sum(d for _, d in self.blocks)

    @property
    def single_block(self) -> bool:
        return len(self.blocks) == 1

    @property
    def name(self) -> str:
        return f"{self.version}-{self.level.name}"


_BLOCKS = {
    (1, EccLevel.L): ((26, 19),),
    (1, EccLevel.M): ((26, 16),),
    (1, EccLevel.Q): ((26, 13),),
    (1, EccLevel.H): ((26, 9),),
    (2, EccLevel.L): ((44, 34),),
    (2, EccLevel.M): ((44, 28),),
    (2, EccLevel.Q): ((44, 22),),
    (2, EccLevel.H): ((44, 16),),
    (3, EccLevel.L): ((70, 55),),
    (3, EccLevel.M): ((70, 44),),
    (3, EccLevel.Q): ((35, 17), (35, 17)),
    (3, EccLevel.H): ((35, 13), (35, 13)),
}
_REMAINDER_BITS = {1: 0, 2: 7, 3: 7}
FORMAT_BITS = 30


def check_version(version: int) -> int:
    if version not in VERSIONS:
        raise InvalidSymbol(f"unsupported version {version!r}; expected 1, 2 or 3")
    return int(version)


def check_mask(mask: int) -> int:
    if mask not in MASKS:
        raise ValueError(f"mask must be in 0..7, got {mask!r}")
    return int(mask)


def side_length(version: int) -> int:
    return 4 * check_version(version) + 17


def version_for_side(side: int) -> int:
    if side not in (21, 25, 29):
        raise InvalidSymbol(f"unsupported symbol side {side}; expected 21, 25 or 29")
    return (side - 17) // 4


@lru_cache(maxsize=None)
def geometry(version: int, level: EccLevel | str) -> CodeGeometry:
    level = EccLevel.parse(level)
    version = check_version(version)
    blocks = _BLOCKS[version, level]
    M = sum(total for total, _ in blocks)
    M_ecc = M - sum(data for _, data in blocks)
    N_d = 8 * M
    N_r = _REMAINDER_BITS[version]
    return CodeGeometry(
        version=version,
        level=level,
        N=N_d + FORMAT_BITS + N_r,
        N_d=N_d,
        N_f=FORMAT_BITS,
        N_r=N_r,
        M=M,
        M_ecc=M_ecc,
        t=M_ecc // 2,
        blocks=blocks,
    )


def mask_predicate(mask: int, row, col):
    """True where the mask inverts a module. Works on ints or numpy arrays."""
    i, j = row, col
    if mask == 0:
        return (i + j) % 2 == 0
    if mask == 1:
        return i % 2 == 0
    if mask == 2:
        return j % 3 == 0
    if mask == 3:
        return (i + j) % 3 == 0
    if mask == 4:
        return (i // 2 + j // 3) % 2 == 0
    if mask == 5:
        return (i * j) % 2 + (i * j) % 3 == 0
    if mask == 6:
        return ((i * j) % 2 + (i * j) % 3) % 2 == 0
    if mask == 7:
        return ((i + j) % 2 + (i * j) % 3) % 2 == 0
    raise ValueError(f"mask must be in 0..7, got {mask!r}")


@dataclass(frozen=True, eq=False)
class RegionMap:
    side: int
    classes: np.ndarray

    @property
    def version(self) -> int:
        return version_for_side(self.side)

    def count(self, region: Region) -> int:
        return int((self.classes == region).sum())

    @property
    def encoding(self) -> np.ndarray:
        """Boolean grid of encoding-region cells (everything but function patterns)."""
        return self.classes != Region.FUNCTION


@dataclass(frozen=True, eq=False)
class _Layout:
    version: int
    side: int
    template: np.ndarray
    regions: RegionMap
    positions: np.ndarray
    format1: np.ndarray
    format2: np.ndarray
    mask_layers: tuple[np.ndarray, ...]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _zigzag(side: int, free: np.ndarray) -> list[tuple[int, int]]:
    order = []
    right = side - 1
    while right >= 1:
        if right == 6:
            right = 5
        upward = ((right + 1) & 2) == 0
        for vert in range(side):
            row = side - 1 - vert if upward else vert
            for col in (right, right - 1):
                if free[row, col]:
                    order.append((row, col))
        right -= 2
    return order


def _format_cells(side: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    # index k holds format bit k (bit 0 least significant)
    first = [(i, 8) for i in range(6)] + [(7, 8), (8, 8), (8, 7)]
    first += [(8, 14 - i) for i in range(9, 15)]
    second = [(8, side - 1 - i) for i in range(8)]
    second += [(side - 15 + i, 8) for i in range(8, 15)]
    return first, second


@lru_cache(maxsize=None)
def _layout(version: int) -> _Layout:
    side = side_length(version)
    template = np.zeros((side, side), dtype=np.uint8)
    function = np.zeros((side, side), dtype=bool)

    for r0, c0 in ((0, 0), (0, side - 7), (side - 7, 0)):
        # separator ring included: 8x8 reserved block
        rs = slice(max(r0 - 1, 0), min(r0 + 8, side))
        cs = slice(max(c0 - 1, 0), min(c0 + 8, side))
        function[rs, cs] = True
        for dr in range(7):
            for dc in range(7):
                ring = max(abs(dr - 3), abs(dc - 3))
                template[r0 + dr, c0 + dc] = ring != 2
    for k in range(8, side - 8):
        function[6, k] = function[k, 6] = True
        template[6, k] = template[k, 6] = k % 2 == 0
    if version >= 2:
        centre = side - 7
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                function[centre + dr, centre + dc] = True
                template[centre + dr, centre + dc] = max(abs(dr), abs(dc)) != 1
    function[side - 8, 8] = True
    template[side - 8, 8] = 1

    first, second = _format_cells(side)
    fmt = np.zeros((side, side), dtype=bool)
    for r, c in first + second:
        fmt[r, c] = True

    free = ~function & ~fmt
    order = _zigzag(side, free)
    n_data = 8 * geometry(version, EccLevel.L).M
    classes = np.full((side, side), Region.FUNCTION, dtype=np.int8)
    classes[fmt] = Region.FORMAT
    for k, (r, c) in enumerate(order):
        classes[r, c] = Region.DATA_ECC if k < n_data else Region.REMAINDER

    rows, cols = np.indices((side, side))
    maskable = free
    layers = tuple(
        _readonly((mask_predicate(m, rows, cols) & maskable).astype(np.uint8)) for m in MASKS
    )
    return _Layout(
        version=version,
        side=side,
        template=_readonly(template),
        regions=RegionMap(side, _readonly(classes)),
        positions=_readonly(np.array(order, dtype=np.intp)),
        format1=_readonly(np.array(first, dtype=np.intp)),
        format2=_readonly(np.array(second, dtype=np.intp)),
        mask_layers=layers,
    )


def region_map(version: int) -> RegionMap:
    return _layout(check_version(version)).regions


def function_template(version: int) -> np.ndarray:
    """Copy of the symbol with function patterns drawn and everything else light."""
    return _layout(check_version(version)).template.copy()


def as_matrix(matrix) -> np.ndarray:
    """Validate and coerce to a square uint8 0/1 array of a supported side."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidSymbol(f"symbol must be square, got shape {m.shape}")
    version_for_side(m.shape[0])
    if m.dtype != np.uint8:
        m = m.astype(np.uint8)
    if m.size and m.max() > 1:
        raise InvalidSymbol("symbol cells must be 0 or 1")
    return m


def apply_mask(matrix: SymbolMatrix, regions: RegionMap, mask: int) -> SymbolMatrix:
    """XOR the mask onto data/ECC and remainder cells; returns a new array."""
    m = as_matrix(matrix)
    if m.shape[0] != regions.side:
        raise InvalidSymbol(f"matrix side {m.shape[0]} does not match region map side {regions.side}")
    layer = _layout(regions.version).mask_layers[check_mask(mask)]
    return m ^ layer


def write_format(matrix: np.ndarray, version: int, word: int) -> None:
    """Place both copies of a 15-bit format word in place."""
    lay = _layout(version)
    bits = np.array([(word >> k) & 1 for k in range(15)], dtype=np.uint8)
    matrix[lay.format1[:, 0], lay.format1[:, 1]] = bits
    matrix[lay.format2[:, 0], lay.format2[:, 1]] = bits


_WEIGHTS = 1 << np.arange(15)


def read_format(matrix: np.ndarray, version: int) -> tuple[int, int]:
    """The two raw 15-bit format words (top-left copy, split copy)."""
    lay = _layout(version)
    a = int(matrix[lay.format1[:, 0], lay.format1[:, 1]] @ _WEIGHTS)
    b = int(matrix[lay.format2[:, 0], lay.format2[:, 1]] @ _WEIGHTS)
    return a, b


# "segno" mirrors the mask evaluation of the Segno generator: candidates are
# scored before format information and the dark module are drawn, and the
# finder-like pattern search does not count overlapping occurrences.
SCORING_STYLES = ("iso", "segno")


def penalty_score(matrix: SymbolMatrix, overlap: bool = True) -> int:
    """ISO penalty (weights 3/3/40/10) of a complete symbol; lower is better."""
    return int(kernels.penalty_score(np.asarray(matrix, dtype=np.uint8), overlap))


def mask_penalties(
    unmasked: SymbolMatrix, regions: RegionMap, level: EccLevel | str, scoring: str = "iso"
) -> list[int]:
    """Penalty of each of the eight candidates.

    ISO scoring writes the format bits of each candidate before scoring it.
    """
    from .ecc import format_encode

    if scoring not in SCORING_STYLES:
        raise ValueError(f"scoring must be one of {SCORING_STYLES}, got {scoring!r}")
    level = EccLevel.parse(level)
    version = regions.version
    scores = []
    for mask in MASKS:
        candidate = apply_mask(unmasked, regions, mask)
        if scoring == "iso":
            write_format(candidate, version, format_encode(level, mask))
            scores.append(penalty_score(candidate))
        else:
            candidate[regions.classes == Region.FORMAT] = 0
            candidate[regions.side - 8, 8] = 0
            scores.append(penalty_score(candidate, overlap=False))
    return scores


def choose_mask(
    unmasked: SymbolMatrix, regions: RegionMap, level: EccLevel | str, scoring: str = "iso"
) -> int:
    """Mask with the lowest penalty; ties go to the lowest id."""
    scores = mask_penalties(unmasked, regions, level, scoring)
    return scores.index(min(scores))
