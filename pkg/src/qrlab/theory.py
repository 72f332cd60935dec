"""Exact success probability of QR error correction under random bit flips.

``n`` distinct bits of the encoding region are flipped uniformly at random.
The region splits into ``N_d`` data/ECC bits, ``N_f`` format bits (two
copies) and ``N_r`` remainder bits. Decoding succeeds when at most ``t``
codewords contain an error and at least one format copy is readable.

All results are :class:`fractions.Fraction` values in lowest terms; floats
appear only when a caller converts them for output.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ConfigError, MultiBlockUnsupported
from .symbol_model import CodeGeometry

FORMAT_COPY_BITS = 15
FORMAT_CAPACITY = 3
FORMAT_MODELS = ("split", "exact")


def binom(a: int, b: int) -> int:
    """C(a, b), zero outside ``0 <= b <= a``."""
    if a < 0:
        raise ValueError("binom needs a >= 0")
    if b < 0 or b > a:
        return 0
    return comb(a, b)


@lru_cache(maxsize=None)
def s_k(k: int, p: int) -> int:
    """Ways to place ``p`` bit errors in ``k`` codewords so that every codeword gets one."""
    if k < 0 or p < 0:
        raise ValueError("s_k needs k >= 0 and p >= 0")
    return sum((-1) ** j * binom(k, j) * binom(8 * (k - j), p) for j in range(k + 1))


def _single_block(geom: CodeGeometry) -> CodeGeometry:
    if not geom.single_block:
        raise MultiBlockUnsupported(
            f"{geom.name} splits its codewords into {len(geom.blocks)} blocks; "
            "only single-block geometries have a closed form"
        )
    return geom


def p_data(geom: CodeGeometry, p: int) -> Fraction:
    """Probability that ``p`` random errors in the data/ECC bits touch at most ``t`` codewords."""
    _single_block(geom)
    if not 0 <= p <= geom.N_d:
        raise ValueError(f"p must lie in [0, {geom.N_d}]")
    return _p_data(geom.M, geom.t, p)


@lru_cache(maxsize=None)
def _p_data(M: int, t: int, p: int) -> Fraction:
    lo = -(-p // 8)
    good = sum(binom(M, k) * s_k(k, p) for k in range(lo, t + 1))
    return Fraction(good, binom(8 * M, p))


def _check_q(q: int, copy_bits: int) -> None:
    if not 0 <= q <= 2 * copy_bits:
        raise ValueError(f"q must lie in [0, {2 * copy_bits}]")


@lru_cache(maxsize=None)
def p_format(q: int, copy_bits: int = FORMAT_COPY_BITS, capacity: int = FORMAT_CAPACITY) -> Fraction:
    """Readable-copy probability treating every split ``i + j = q`` as equally likely."""
    _check_q(q, copy_bits)
    good = sum(1 for i in range(q + 1) if min(i, q - i) <= capacity)
    return Fraction(good, q + 1)


@lru_cache(maxsize=None)
def p_format_exact(q: int, copy_bits: int = FORMAT_COPY_BITS, capacity: int = FORMAT_CAPACITY) -> Fraction:
    """Readable-copy probability with ``q`` errors spread uniformly over both copies.

    The split then follows a hypergeometric law, so this is the value a
    sampler observes. It agrees with :func:`p_format` for ``q <= 2 * capacity + 1``.
    """
    _check_q(q, copy_bits)
    good = sum(
        binom(copy_bits, i) * binom(copy_bits, q - i)
        for i in range(q + 1)
        if min(i, q - i) <= capacity
    )
    return Fraction(good, binom(2 * copy_bits, q))


def W(geom: CodeGeometry, n: int, p: int, q: int) -> int:
    """Number of ``n``-error sets with ``p`` data/ECC errors and ``q`` format errors."""
    return binom(geom.N_d, p) * binom(geom.N_f, q) * binom(geom.N_r, n - p - q) if n >= p + q else 0


def allocations(geom: CodeGeometry, n: int):
    """Yield ``(p, q, W)`` over every feasible split of ``n`` errors."""
    for p in range(min(n, geom.N_d) + 1):
        for q in range(min(n - p, geom.N_f) + 1):
            w = W(geom, n, p, q)
            if w:
                yield p, q, w


def p_success(
    geom: CodeGeometry,
    n: int,
    format_model: str = "split",
    format_capacity: int = FORMAT_CAPACITY,
) -> Fraction:
    """Probability that ``n`` random flips in the encoding region are correctable.

    ``format_model="split"`` weights format splits uniformly (the closed form
    used for the theoretical curve); ``"exact"`` uses :func:`p_format_exact`.
    The two differ only when 8 or more errors land in the format bits.
    """
    _single_block(geom)
    if format_model not in FORMAT_MODELS:
        raise ConfigError(f"format_model must be one of {FORMAT_MODELS}, got {format_model!r}")
    if geom.N_f % 2:
        raise ConfigError("format bits must form two equal copies")
    if not 0 <= n <= geom.N:
        raise ValueError(f"n must lie in [0, {geom.N}]")
    pf = p_format if format_model == "split" else p_format_exact
    copy_bits = geom.N_f // 2
    total = Fraction(0)
    for p, q, w in allocations(geom, n):
        pd = _p_data(geom.M, geom.t, p)
        if pd:
            total += w * pd * pf(q, copy_bits, format_capacity)
    return total / binom(geom.N, n)
