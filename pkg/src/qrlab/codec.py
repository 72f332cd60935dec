"""Byte-mode QR encoding and decoding for versions 1-3."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ecc import format_encode, format_nearest, rs_decode, rs_encode
from .errors import (
    CapacityExceeded,
    DecodeFailure,
    FormatUnreadable,
    InvalidText,
    PayloadMalformed,
    RsFailure,
)
from .symbol_model import (
    CodeGeometry,
    EccLevel,
    _layout,
    apply_mask,
    as_matrix,
    check_mask,
    check_version,
    choose_mask,
    geometry,
    version_for_side,
    write_format,
)

AUTO = "auto"
MODE_BYTE = 0b0100
PAD_BYTES = (0xEC, 0x11)
# "segno" reproduces that library's extra 0x00 codeword after a byte-aligned
# terminator, so datasets generated with it can be rebuilt bit for bit.
PADDING_STYLES = ("iso", "segno")


@dataclass(frozen=True)
class DecodeReport:
    mask: int
    level: EccLevel
    corrected_codewords: int
    format_distance: int


def byte_capacity(geom: CodeGeometry) -> int:
    """Longest byte-mode text that fits: 4-bit mode + 8-bit count + 8 bits per byte."""
    return (8 * geom.data_codewords - 12) // 8


def text_bytes(text: str) -> bytes:
    if not isinstance(text, str) or not text:
        raise InvalidText("text must be a nonempty string")
    try:
        return text.encode("ascii")
    except UnicodeEncodeError:
        raise InvalidText(f"text must be ASCII: {text!r}") from None


def build_payload(text: str, geom: CodeGeometry, padding: str = "iso") -> bytes:
    """Data codewords: mode, count, bytes, terminator, bit padding, pad bytes."""
    if padding not in PADDING_STYLES:
        raise ValueError(f"padding must be one of {PADDING_STYLES}, got {padding!r}")
    raw = text_bytes(text)
    cap = byte_capacity(geom)
    if len(raw) > cap:
        raise CapacityExceeded(
            f"{len(raw)} bytes exceed the {cap}-byte capacity of version {geom.version}-{geom.level.name}"
        )
    total_bits = 8 * geom.data_codewords
    value = (MODE_BYTE << 8) | len(raw)
    if raw:
        value = (value << (8 * len(raw))) | int.from_bytes(raw, "big")
    used = 12 + 8 * len(raw)
    term = min(4, total_bits - used)
    value <<= term
    used += term
    fill = -used % 8
    if padding == "segno" and fill == 0 and used < total_bits:
        fill = 8
    value <<= fill
    used += fill
    out = bytearray(value.to_bytes(used // 8, "big"))
    k = 0
    while len(out) < geom.data_codewords:
        out.append(PAD_BYTES[k % 2])
        k += 1
    return bytes(out)


def parse_payload(data: bytes) -> str:
    if not data:
        raise PayloadMalformed("no data codewords")
    total_bits = 8 * len(data)
    value = int.from_bytes(data, "big")
    mode = value >> (total_bits - 4)
    if mode != MODE_BYTE:
        raise PayloadMalformed(f"unsupported mode indicator {mode:04b}")
    count = (value >> (total_bits - 12)) & 0xFF
    if 12 + 8 * count > total_bits:
        raise PayloadMalformed(f"character count {count} exceeds the data capacity")
    body = (value >> (total_bits - 12 - 8 * count)) & ((1 << (8 * count)) - 1)
    return body.to_bytes(count, "big").decode("latin-1")


@lru_cache(maxsize=None)
def _interleave_map(version: int, level: EccLevel) -> tuple[tuple[int, int], ...]:
    """(block, index within block) for each codeword in transmission order."""
    blocks = geometry(version, level).blocks
    order = []
    for k in range(max(d for _, d in blocks)):
        order.extend((b, k) for b, (_, d) in enumerate(blocks) if k < d)
    for k in range(max(n - d for n, d in blocks)):
        order.extend((b, d + k) for b, (n, d) in enumerate(blocks) if k < n - d)
    return tuple(order)


def codewords(text: str, version: int, level: EccLevel | str, padding: str = "iso") -> bytes:
    """Interleaved data + ECC codewords for ``text``."""
    level = EccLevel.parse(level)
    geom = geometry(version, level)
    data = build_payload(text, geom, padding)
    words = []
    start = 0
    for total, count in geom.blocks:
        words.append(rs_encode(data[start : start + count], total - count).codeword)
        start += count
    return bytes(words[b][i] for b, i in _interleave_map(geom.version, level))


def placement_order(version: int) -> np.ndarray:
    """(row, col) of every data/ECC and remainder cell in placement sequence."""
    return _layout(check_version(version)).positions


def place_codewords(words: bytes, version: int) -> np.ndarray:
    """Unmasked symbol: function patterns plus codeword bits, format area light."""
    lay = _layout(version)
    m = lay.template.copy()
    bits = np.unpackbits(np.frombuffer(words, dtype=np.uint8))
    pos = lay.positions[: bits.size]
    m[pos[:, 0], pos[:, 1]] = bits
    return m


def read_codewords(unmasked: np.ndarray, version: int, count: int) -> bytes:
    lay = _layout(version)
    pos = lay.positions[: 8 * count]
    return np.packbits(unmasked[pos[:, 0], pos[:, 1]]).tobytes()


def encode(
    text: str,
    version: int,
    level: EccLevel | str,
    mask: int | str = AUTO,
    *,
    padding: str = "iso",
    scoring: str = "iso",
) -> tuple[np.ndarray, int]:
    """Encode ``text`` as a byte-mode symbol.

    Returns ``(matrix, mask)``; with ``mask="auto"`` the mask is picked by
    :func:`qrlab.symbol_model.choose_mask` under ``scoring``. Passing
    ``padding="segno", scoring="segno"`` reproduces Segno's output exactly.
    """
    version = check_version(version)
    level = EccLevel.parse(level)
    unmasked = place_codewords(codewords(text, version, level, padding), version)
    regions = _layout(version).regions
    if isinstance(mask, str):
        if mask.lower() != AUTO:
            raise ValueError(f"mask must be 0..7 or 'auto', got {mask!r}")
        mask = choose_mask(unmasked, regions, level, scoring)
    mask = check_mask(mask)
    symbol = apply_mask(unmasked, regions, mask)
    write_format(symbol, version, format_encode(level, mask))
    return symbol, mask


def read_format_info(matrix: np.ndarray) -> tuple[EccLevel, int, int]:
    """(level, mask, distance) from whichever format copy decodes best."""
    from .symbol_model import read_format

    m = as_matrix(matrix)
    first, second = read_format(m, version_for_side(m.shape[0]))
    a = format_nearest(first)
    b = format_nearest(second)
    good = [x for x in (a, b) if x[2] <= 3]
    if not good:
        raise FormatUnreadable(f"both format copies have 4 or more bit errors (distances {a[2]}, {b[2]})")
    if len(good) == 2 and a[:2] != b[:2]:
        if a[2] == b[2]:
            raise FormatUnreadable("format copies disagree at equal distance")
        return min(good, key=lambda x: x[2])
    return min(good, key=lambda x: x[2])


def decode(matrix: np.ndarray) -> tuple[str, DecodeReport]:
    """Decode a symbol; raises FormatUnreadable, RsFailure or PayloadMalformed."""
    m = as_matrix(matrix)
    version = version_for_side(m.shape[0])
    level, mask, distance = read_format_info(m)
    geom = geometry(version, level)
    unmasked = apply_mask(m, _layout(version).regions, mask)
    stream = read_codewords(unmasked, version, geom.M)

    blocks = [bytearray(total) for total, _ in geom.blocks]
    for byte, (b, i) in zip(stream, _interleave_map(version, level)):
        blocks[b][i] = byte
    data = bytearray()
    corrected = 0
    for raw, (total, count) in zip(blocks, geom.blocks):
        try:
            block_data, fixed = rs_decode(bytes(raw), total - count)
        except DecodeFailure as exc:
            raise RsFailure(str(exc)) from None
        data += block_data
        corrected += fixed
    text = parse_payload(bytes(data))
    return text, DecodeReport(mask=mask, level=level, corrected_codewords=corrected, format_distance=distance)
