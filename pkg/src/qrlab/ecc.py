"""GF(256) arithmetic, Reed-Solomon block coding and BCH(15,5) format words.

The field uses the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D)
with generator alpha = 2. Reed-Solomon generators have roots
alpha^0 .. alpha^(ecc_len - 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from ._purepy import EXP, LOG
from .errors import DecodeFailure
from .symbol_model import EccLevel, check_mask

FORMAT_XOR = 0b101010000010010
FORMAT_GENERATOR = 0b10100110111


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return EXP[255 - LOG[a]]


def gf_div(a: int, b: int) -> int:
    return gf_mul(a, gf_inv(b))


def gf_pow(a: int, e: int) -> int:
    if a == 0:
        return 1 if e == 0 else 0
    return EXP[(LOG[a] * e) % 255]


class GfPolynomial:
    """Polynomial over GF(256) with coefficients stored low order first."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[int] = ()):
        coeffs = [int(c) for c in coefficients]
        if any(c < 0 or c > 255 for c in coeffs):
            raise ValueError("coefficients must lie in 0..255")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def from_codeword(cls, codeword: Sequence[int]) -> "GfPolynomial":
        """Interpret transmission order (first byte = highest degree)."""
        return cls(reversed(list(codeword)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GfPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"GfPolynomial({list(self.coefficients)})"

    def __add__(self, other: "GfPolynomial") -> "GfPolynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return GfPolynomial(x ^ y for x, y in zip(a, b))

    __sub__ = __add__

    def __mul__(self, other: "GfPolynomial") -> "GfPolynomial":
        if not self or not other:
            return GfPolynomial()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] ^= gf_mul(a, b)
        return GfPolynomial(out)

    def __divmod__(self, divisor: "GfPolynomial") -> tuple["GfPolynomial", "GfPolynomial"]:
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        dv = divisor.coefficients
        lead_inv = gf_inv(dv[-1])
        quot = [0] * max(len(rem) - len(dv) + 1, 0)
        for shift in range(len(rem) - len(dv), -1, -1):
            coef = gf_mul(rem[shift + len(dv) - 1], lead_inv)
            quot[shift] = coef
            if coef:
                for k, d in enumerate(dv):
                    rem[shift + k] ^= gf_mul(coef, d)
        return GfPolynomial(quot), GfPolynomial(rem)

    def __mod__(self, divisor: "GfPolynomial") -> "GfPolynomial":
        return divmod(self, divisor)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = gf_mul(acc, x) ^ c
        return acc


@lru_cache(maxsize=None)
def generator_polynomial(ecc_len: int) -> GfPolynomial:
    """prod_{i < ecc_len} (x - alpha^i)."""
    if ecc_len < 1:
        raise ValueError("ecc_len must be at least 1")
    g = GfPolynomial([1])
    for i in range(ecc_len):
        g = g * GfPolynomial([EXP[i], 1])
    return g


@lru_cache(maxsize=None)
def _generator_bytes(ecc_len: int) -> bytes:
    return bytes(reversed(generator_polynomial(ecc_len).coefficients))


@dataclass(frozen=True)
class RsBlock:
    data: bytes
    ecc: bytes

    @property
    def codeword(self) -> bytes:
        return self.data + self.ecc


def rs_encode(data: Sequence[int], ecc_len: int) -> RsBlock:
    """Systematic Reed-Solomon encoding of one block."""
    data = bytes(data)
    if not data:
        raise ValueError("data must be nonempty")
    if ecc_len < 1 or len(data) + ecc_len > 255:
        raise ValueError(f"invalid block size: {len(data)} data + {ecc_len} ecc")
    return RsBlock(data, bytes(kernels.rs_remainder(data, _generator_bytes(ecc_len))))


def rs_syndromes(codeword: Sequence[int], ecc_len: int) -> list[int]:
    return list(kernels.rs_syndromes(bytes(codeword), ecc_len))


def rs_decode(block: RsBlock | Sequence[int], ecc_len: int | None = None) -> tuple[bytes, int]:
    """Correct up to ``ecc_len // 2`` erroneous codewords.

    Accepts an :class:`RsBlock` or a full codeword plus ``ecc_len``. Returns
    ``(data, corrected_count)`` and raises :class:`DecodeFailure` when the
    block is beyond the decoder's reach.
    """
    if isinstance(block, RsBlock):
        word, nsym = block.codeword, len(block.ecc)
    else:
        if ecc_len is None:
            raise TypeError("ecc_len is required for a raw codeword")
        word, nsym = bytes(block), ecc_len
    if nsym < 1 or nsym >= len(word):
        raise ValueError("block sizes do not describe a Reed-Solomon codeword")
    corrected, count = kernels.rs_correct(word, nsym)
    if count < 0:
        raise DecodeFailure("Reed-Solomon block is uncorrectable")
    return bytes(corrected[: len(word) - nsym]), count


def _bch_remainder(value: int) -> int:
    rem = value << 10
    for shift in range(4, -1, -1):
        if rem & (1 << (shift + 10)):
            rem ^= FORMAT_GENERATOR << shift
    return rem


def format_encode(level: EccLevel | str, mask: int) -> int:
    """15-bit format word (level indicator, mask id, BCH parity) after the XOR mask."""
    info = (EccLevel.parse(level).format_bits << 3) | check_mask(mask)
    return ((info << 10) | _bch_remainder(info)) ^ FORMAT_XOR


def _build_format_table() -> tuple[np.ndarray, np.ndarray, list[tuple[EccLevel, int]]]:
    pairs = [(level, mask) for level in EccLevel for mask in range(8)]
    words = np.array([format_encode(lv, mk) for lv, mk in pairs], dtype=np.int64)
    space = np.arange(1 << 15, dtype=np.int64)
    x = space[:, None] ^ words[None, :]
    dist = np.zeros(x.shape, dtype=np.int64)
    for k in range(15):
        dist += (x >> k) & 1
    best = dist.argmin(axis=1)
    return best.astype(np.int8), dist.min(axis=1).astype(np.int8), pairs


_FORMAT_BEST, _FORMAT_DIST, _FORMAT_PAIRS = _build_format_table()


def format_nearest(bits: int) -> tuple[EccLevel, int, int]:
    """Nearest valid format word without the capacity check."""
    bits = int(bits)
    if not 0 <= bits < 1 << 15:
        raise ValueError("format word must have 15 bits")
    level, mask = _FORMAT_PAIRS[_FORMAT_BEST[bits]]
    return level, mask, int(_FORMAT_DIST[bits])


def format_decode(bits: int) -> tuple[EccLevel, int, int]:
    """Decode a 15-bit format word, correcting up to three bit errors."""
    level, mask, distance = format_nearest(bits)
    if distance > 3:
        raise DecodeFailure(f"format word {bits:015b} is {distance} bits from any codeword")
    return level, mask, distance
