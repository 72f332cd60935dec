"""Pure Python/numpy implementations of the hot kernels.

``_kernels.pyx`` mirrors every function here with identical signatures and
bit-identical results; ``qrlab._backend`` picks whichever is available.
"""
from __future__ import annotations

import numpy as np

PRIM = 0x11D

EXP = [0] * 512
LOG = [0] * 256
_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= PRIM
for _i in range(255, 512):
    EXP[_i] = EXP[_i - 255]
del _x, _i


def _mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def rs_remainder(data: bytes, gen: bytes) -> bytes:
    """Parity bytes of ``data`` for the monic generator ``gen`` (high order first)."""
    nsym = len(gen) - 1
    glog = [LOG[g] if g else -1 for g in gen]
    rem = [0] * nsym
    for byte in data:
        factor = byte ^ rem[0]
        rem = rem[1:] + [0]
        if factor:
            lf = LOG[factor]
            for i in range(nsym):
                gl = glog[i + 1]
                if gl >= 0:
                    rem[i] ^= EXP[lf + gl]
    return bytes(rem)


def rs_syndromes(msg: bytes, nsym: int) -> list[int]:
    n = len(msg)
    out = []
    for j in range(nsym):
        s = 0
        for i in range(n):
            c = msg[i]
            if c:
                s ^= EXP[(LOG[c] + j * (n - 1 - i)) % 255]
        out.append(s)
    return out


def rs_correct(msg: bytes, nsym: int) -> tuple[bytes, int]:
    """Errors-only RS decoding (Berlekamp-Massey, Chien search, Forney).

    Returns ``(corrected, count)``; ``count`` is -1 when the word cannot be
    corrected. Generator roots are alpha^0 .. alpha^(nsym-1).
    """
    n = len(msg)
    synd = rs_syndromes(msg, nsym)
    if not any(synd):
        return bytes(msg), 0

    # Berlekamp-Massey; polynomials are low order first.
    lam = [1] + [0] * nsym
    prev = [1] + [0] * nsym
    L, m, b = 0, 1, 1
    for r in range(nsym):
        d = synd[r]
        for i in range(1, L + 1):
            d ^= _mul(lam[i], synd[r - i])
        if d == 0:
            m += 1
            continue
        coef = EXP[(LOG[d] - LOG[b]) % 255]
        old = lam[:]
        for i in range(nsym + 1 - m):
            if prev[i]:
                lam[i + m] ^= _mul(coef, prev[i])
        if 2 * L <= r:
            L = r + 1 - L
            prev = old
            b = d
            m = 1
        else:
            m += 1
    if L == 0 or 2 * L > nsym:
        return bytes(msg), -1

    # Chien search over the n valid positions: X = alpha^(n-1-i).
    positions = []
    for i in range(n):
        inv = (255 - (n - 1 - i)) % 255
        v = 0
        for k in range(L + 1):
            if lam[k]:
                v ^= EXP[(LOG[lam[k]] + inv * k) % 255]
        if v == 0:
            positions.append(i)
    if len(positions) != L:
        return bytes(msg), -1

    # Omega = S * Lambda mod x^nsym
    omega = [0] * nsym
    for i in range(nsym):
        acc = 0
        for k in range(min(i, L) + 1):
            acc ^= _mul(synd[i - k], lam[k])
        omega[i] = acc

    out = bytearray(msg)
    for i in positions:
        xl = (n - 1 - i) % 255
        inv = (255 - xl) % 255
        num = 0
        for k in range(nsym):
            if omega[k]:
                num ^= EXP[(LOG[omega[k]] + inv * k) % 255]
        den = 0
        for k in range(1, L + 1, 2):
            if lam[k]:
                den ^= EXP[(LOG[lam[k]] + inv * (k - 1)) % 255]
        if den == 0:
            return bytes(msg), -1
        if num:
            out[i] ^= EXP[(xl + LOG[num] - LOG[den]) % 255]
    if any(rs_syndromes(bytes(out), nsym)):
        return bytes(msg), -1
    return bytes(out), L


def penalty_score(m: np.ndarray, overlap: bool = True) -> int:
    """ISO mask penalty N1 + N2 + N3 + N4 of a square 0/1 matrix.

    With ``overlap=False`` a counted finder-like pattern hides any other one
    starting fewer than 7 modules later, as in a left-to-right string scan.
    """
    m = np.asarray(m, dtype=np.int8)
    side = m.shape[0]
    score = 0
    pattern = np.array([1, 0, 1, 1, 1, 0, 1], dtype=np.int8)
    for grid in (m, m.T):
        # N1: runs of >= 5 equal modules, separated per line by sentinels
        padded = np.full((side, side + 2), 2, dtype=np.int8)
        padded[:, 1:-1] = grid
        flat = padded.ravel()
        edges = np.flatnonzero(flat[1:] != flat[:-1])
        runs = np.diff(edges)
        values = flat[edges[1:]]
        long = runs[(runs >= 5) & (values != 2)]
        score += int((long - 2).sum())
        # N3: 1011101 with four light modules before or after; outside is light
        lined = np.zeros((side, side + 8), dtype=np.int8)
        lined[:, 4:-4] = grid
        win = np.lib.stride_tricks.sliding_window_view(lined, 15, axis=1)
        core = (win[:, :, 4:11] == pattern).all(axis=2)
        before = ~win[:, :, 0:4].any(axis=2)
        after = ~win[:, :, 11:15].any(axis=2)
        hits = core & (before | after)
        if overlap:
            score += 40 * int(hits.sum())
        else:
            for line in np.flatnonzero(hits.any(axis=1)):
                nxt = 0
                for pos in np.flatnonzero(hits[line]):
                    if pos >= nxt:
                        score += 40
                        nxt = pos + 7
    a = m[:-1, :-1]
    blocks = (a == m[1:, :-1]) & (a == m[:-1, 1:]) & (a == m[1:, 1:])
    score += 3 * int(blocks.sum())
    total = side * side
    dark = int(m.sum())
    score += 10 * (abs(20 * dark - 10 * total) // total)
    return score


def partial_shuffle(draws: np.ndarray, population: int) -> np.ndarray:
    """Rows of distinct indices from a partial Fisher-Yates shuffle.

    ``draws[r, i]`` must be uniform in ``[0, population - i)``; step ``i`` swaps
    slot ``i`` with slot ``i + draws[r, i]`` and emits the new slot-``i`` value.
    """
    draws = np.asarray(draws, dtype=np.int64)
    trials, n = draws.shape
    if n > population:
        raise ValueError("more draws than population")
    perm = np.tile(np.arange(population, dtype=np.int32), (trials, 1))
    out = np.empty((trials, n), dtype=np.int32)
    rows = np.arange(trials)
    for i in range(n):
        j = i + draws[:, i]
        vi = perm[rows, i]
        vj = perm[rows, j]
        perm[rows, j] = vi
        out[:, i] = vj
    return out


def ideal_outcomes(cells: np.ndarray, labels: np.ndarray, t: int, fmt_cap: int) -> np.ndarray:
    """Per-trial success of the ideal corrector.

    ``labels`` maps an encoding-region cell index to its codeword index
    (>= 0), format copy 1 (-1), format copy 2 (-2) or remainder (-3). A trial
    succeeds when at most ``t`` codewords are hit and one format copy has at
    most ``fmt_cap`` errors.
    """
    cells = np.asarray(cells)
    trials = cells.shape[0]
    if cells.shape[1] == 0:
        return np.ones(trials, dtype=np.uint8)
    lab = np.sort(np.asarray(labels, dtype=np.int32)[cells], axis=1)
    fresh = np.empty(lab.shape, dtype=bool)
    fresh[:, 0] = True
    fresh[:, 1:] = lab[:, 1:] != lab[:, :-1]
    k = (fresh & (lab >= 0)).sum(axis=1)
    f1 = (lab == -1).sum(axis=1)
    f2 = (lab == -2).sum(axis=1)
    ok = (k <= t) & (np.minimum(f1, f2) <= fmt_cap)
    return ok.astype(np.uint8)
