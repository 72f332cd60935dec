"""Text and PBM serialization of symbols.

``grid``: one line per row of '1' (dark) and '0' (light) characters.
``pbm``: netpbm bitmap, written as plain P1 and read as P1 or raw P4.
``bits``: a single line in one of the linearization orders of
:mod:`qrlab.dataset`.
"""
from __future__ import annotations

import re

import numpy as np

from .dataset import delinearize, linearize
from .errors import InvalidSymbol
from .symbol_model import as_matrix

FORMATS = ("grid", "pbm", "bits")


def to_grid(matrix: np.ndarray) -> str:
    m = as_matrix(matrix)
    return "".join("".join("1" if v else "0" for v in row) + "\n" for row in m)


def from_grid(text: str) -> np.ndarray:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows or any(set(r) - {"0", "1"} for r in rows):
        raise InvalidSymbol("grid rows must consist of '0' and '1' characters")
    if len({len(r) for r in rows}) != 1:
        raise InvalidSymbol("grid rows differ in length")
    return as_matrix(np.array([[c == "1" for c in r] for r in rows], dtype=np.uint8))


def to_pbm(matrix: np.ndarray) -> str:
    m = as_matrix(matrix)
    side = m.shape[0]
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in m)
    return f"P1\n{side} {side}\n{body}\n"


_TOKEN = re.compile(rb"#[^\n]*|\S+")


def from_pbm(data: bytes | str) -> np.ndarray:
    if isinstance(data, str):
        data = data.encode("latin-1")
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise InvalidSymbol("not a PBM image (expected P1 or P4)")
    header = []
    pos = 2
    for match in _TOKEN.finditer(data, 2):
        tok = match.group()
        if tok.startswith(b"#"):
            continue
        header.append(tok)
        pos = match.end()
        if len(header) == 2:
            break
    try:
        width, height = (int(x) for x in header)
    except ValueError:
        raise InvalidSymbol("malformed PBM header") from None
    if magic == b"P1":
        digits = re.sub(rb"#[^\n]*|\s", b"", data[pos:])
        if len(digits) != width * height or set(digits) - set(b"01"):
            raise InvalidSymbol("PBM pixel data does not match its size")
        values = np.frombuffer(digits, dtype=np.uint8) - ord("0")
    else:
        stride = (width + 7) // 8
        raw = data[pos + 1 : pos + 1 + stride * height]
        if len(raw) != stride * height:
            raise InvalidSymbol("truncated P4 data")
        packed = np.frombuffer(raw, dtype=np.uint8).reshape(height, stride)
        values = np.unpackbits(packed, axis=1)[:, :width]
    return as_matrix(values.reshape(height, width))


def dumps(matrix: np.ndarray, fmt: str, order: str = "D") -> str:
    if fmt == "grid":
        return to_grid(matrix)
    if fmt == "pbm":
        return to_pbm(matrix)
    if fmt == "bits":
        return linearize(matrix, order) + "\n"
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def loads(data: bytes | str, fmt: str, order: str = "D") -> np.ndarray:
    if fmt == "pbm":
        return from_pbm(data)
    text = data.decode("ascii", "replace") if isinstance(data, bytes) else data
    if fmt == "grid":
        return from_grid(text)
    if fmt == "bits":
        bits = "".join(text.split())
        try:
            return delinearize(bits, order)
        except ValueError as exc:
            raise InvalidSymbol(str(exc)) from None
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
