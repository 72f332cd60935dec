# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``qrlab._purepy``.

Signatures and results match the pure Python module exactly.
"""
import numpy as np

from libc.string cimport memset

cdef int EXP[512]
cdef int LOG[256]


cdef void _init_tables():
    cdef int x = 1
    cdef int i
    for i in range(255):
        EXP[i] = x
        LOG[x] = i
        x <<= 1
        if x & 0x100:
            x ^= 0x11D
    for i in range(255, 512):
        EXP[i] = EXP[i - 255]
    LOG[0] = 0


_init_tables()


cdef inline int _mul(int a, int b) nogil:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def rs_remainder(const unsigned char[::1] data, const unsigned char[::1] gen):
    cdef int nsym = gen.shape[0] - 1
    cdef int rem[256]
    cdef int i, k, factor, lf
    memset(rem, 0, sizeof(rem))
    for k in range(data.shape[0]):
        factor = data[k] ^ rem[0]
        for i in range(nsym - 1):
            rem[i] = rem[i + 1]
        rem[nsym - 1] = 0
        if factor:
            lf = LOG[factor]
            for i in range(nsym):
                if gen[i + 1]:
                    rem[i] ^= EXP[lf + LOG[gen[i + 1]]]
    return bytes([rem[i] for i in range(nsym)])


cdef void _syndromes(const unsigned char[::1] msg, int n, int nsym, int* out) nogil:
    cdef int i, j, s, c
    for j in range(nsym):
        s = 0
        for i in range(n):
            c = msg[i]
            if c:
                s ^= EXP[(LOG[c] + j * (n - 1 - i)) % 255]
        out[j] = s


def rs_syndromes(const unsigned char[::1] msg, int nsym):
    cdef int synd[256]
    _syndromes(msg, msg.shape[0], nsym, synd)
    return [synd[j] for j in range(nsym)]


def rs_correct(const unsigned char[::1] msg, int nsym):
    cdef int n = msg.shape[0]
    cdef int synd[256]
    cdef int lam[257]
    cdef int prev[257]
    cdef int old[257]
    cdef int omega[256]
    cdef int positions[256]
    cdef int npos = 0
    cdef int L = 0, m = 1, b = 1
    cdef int r, i, k, d, coef, inv, v, acc, xl, num, den, any_nz
    cdef unsigned char[::1] out

    _syndromes(msg, n, nsym, synd)
    any_nz = 0
    for i in range(nsym):
        any_nz |= synd[i]
    if not any_nz:
        return bytes(msg), 0

    memset(lam, 0, sizeof(lam))
    memset(prev, 0, sizeof(prev))
    lam[0] = 1
    prev[0] = 1
    for r in range(nsym):
        d = synd[r]
        for i in range(1, L + 1):
            d ^= _mul(lam[i], synd[r - i])
        if d == 0:
            m += 1
            continue
        coef = EXP[(LOG[d] - LOG[b] + 255) % 255]
        for i in range(nsym + 1):
            old[i] = lam[i]
        for i in range(nsym + 1 - m):
            if prev[i]:
                lam[i + m] ^= _mul(coef, prev[i])
        if 2 * L <= r:
            L = r + 1 - L
            for i in range(nsym + 1):
                prev[i] = old[i]
            b = d
            m = 1
        else:
            m += 1
    if L == 0 or 2 * L > nsym:
        return bytes(msg), -1

    for i in range(n):
        inv = (255 - (n - 1 - i) % 255) % 255
        v = 0
        for k in range(L + 1):
            if lam[k]:
                v ^= EXP[(LOG[lam[k]] + inv * k) % 255]
        if v == 0:
            positions[npos] = i
            npos += 1
    if npos != L:
        return bytes(msg), -1

    for i in range(nsym):
        acc = 0
        for k in range(min(i, L) + 1):
            acc ^= _mul(synd[i - k], lam[k])
        omega[i] = acc

    out = bytearray(msg)
    for r in range(npos):
        i = positions[r]
        xl = (n - 1 - i) % 255
        inv = (255 - xl) % 255
        num = 0
        for k in range(nsym):
            if omega[k]:
                num ^= EXP[(LOG[omega[k]] + inv * k) % 255]
        den = 0
        k = 1
        while k <= L:
            if lam[k]:
                den ^= EXP[(LOG[lam[k]] + inv * (k - 1)) % 255]
            k += 2
        if den == 0:
            return bytes(msg), -1
        if num:
            out[i] ^= EXP[(xl + LOG[num] - LOG[den] + 510) % 255]
    _syndromes(out, n, nsym, synd)
    for i in range(nsym):
        if synd[i]:
            return bytes(msg), -1
    return bytes(out), L


cdef inline int _at(const signed char[:, ::1] g, int side, int line, int pos, bint transpose) nogil:
    if pos < 0 or pos >= side:
        return 0
    if transpose:
        return g[pos, line]
    return g[line, pos]


def penalty_score(m, bint overlap=True):
    cdef const signed char[:, ::1] g = np.ascontiguousarray(m, dtype=np.int8)
    cdef int side = g.shape[0]
    cdef long score = 0
    cdef int line, pos, run, cur, prev, k, ok, flank, nxt
    cdef int dark = 0, total
    cdef bint tr
    cdef int pattern[7]
    pattern[:] = [1, 0, 1, 1, 1, 0, 1]

    for tr in (False, True):
        for line in range(side):
            run = 0
            prev = -1
            for pos in range(side):
                cur = _at(g, side, line, pos, tr)
                if cur == prev:
                    run += 1
                else:
                    if run >= 5:
                        score += run - 2
                    run = 1
                    prev = cur
            if run >= 5:
                score += run - 2
            nxt = 0
            for pos in range(side - 6):
                if pos < nxt:
                    continue
                ok = 1
                for k in range(7):
                    if _at(g, side, line, pos + k, tr) != pattern[k]:
                        ok = 0
                        break
                if not ok:
                    continue
                flank = 1
                for k in range(1, 5):
                    if _at(g, side, line, pos - k, tr):
                        flank = 0
                        break
                if not flank:
                    flank = 1
                    for k in range(7, 11):
                        if _at(g, side, line, pos + k, tr):
                            flank = 0
                            break
                if flank:
                    score += 40
                    if not overlap:
                        nxt = pos + 7
    for line in range(side - 1):
        for pos in range(side - 1):
            cur = g[line, pos]
            if cur == g[line + 1, pos] and cur == g[line, pos + 1] and cur == g[line + 1, pos + 1]:
                score += 3
    for line in range(side):
        for pos in range(side):
            dark += g[line, pos]
    total = side * side
    score += 10 * (abs(20 * dark - 10 * total) // total)
    return int(score)


def partial_shuffle(draws, int population):
    cdef const long long[:, ::1] d = np.ascontiguousarray(draws, dtype=np.int64)
    cdef int trials = d.shape[0]
    cdef int n = d.shape[1]
    if n > population:
        raise ValueError("more draws than population")
    result = np.empty((trials, n), dtype=np.int32)
    cdef int[:, ::1] out = result
    cdef int[::1] perm = np.arange(population, dtype=np.int32)
    cdef int r, i, j, vi, vj
    for r in range(trials):
        for i in range(n):
            j = i + <int>d[r, i]
            vi = perm[i]
            vj = perm[j]
            perm[i] = vj
            perm[j] = vi
            out[r, i] = vj
        # undo the swaps so the next row starts from the identity
        i = n - 1
        while i >= 0:
            j = i + <int>d[r, i]
            vi = perm[i]
            perm[i] = perm[j]
            perm[j] = vi
            i -= 1
    return result


def ideal_outcomes(cells, labels, int t, int fmt_cap):
    cdef const int[:, ::1] c = np.ascontiguousarray(cells, dtype=np.int32)
    cdef const int[::1] lab = np.ascontiguousarray(labels, dtype=np.int32)
    cdef int trials = c.shape[0]
    cdef int n = c.shape[1]
    result = np.empty(trials, dtype=np.uint8)
    cdef unsigned char[::1] out = result
    cdef int maxcw = 0
    cdef int i, r, x, k, f1, f2
    for i in range(lab.shape[0]):
        if lab[i] + 1 > maxcw:
            maxcw = lab[i] + 1
    cdef int[::1] stamp = np.full(max(maxcw, 1), -1, dtype=np.int32)
    for r in range(trials):
        k = 0
        f1 = 0
        f2 = 0
        for i in range(n):
            x = lab[c[r, i]]
            if x >= 0:
                if stamp[x] != r:
                    stamp[x] = r
                    k += 1
            elif x == -1:
                f1 += 1
            elif x == -2:
                f2 += 1
        out[r] = 1 if (k <= t and min(f1, f2) <= fmt_cap) else 0
    return result
