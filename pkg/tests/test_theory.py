import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from qrlab.errors import MultiBlockUnsupported
from qrlab.symbol_model import CodeGeometry, EccLevel, geometry
from qrlab.theory import W, allocations, binom, p_data, p_format, p_format_exact, p_success, s_k

SINGLE = [(v, lvl) for v in (1, 2, 3) for lvl in "LMQH" if (v, lvl) not in ((3, "Q"), (3, "H"))]


def tiny(M=2, t=1, copy_bits=2, N_r=2):
    N_d, N_f = 8 * M, 2 * copy_bits
    return CodeGeometry(0, EccLevel.L, N_d + N_f + N_r, N_d, N_f, N_r, M, 2 * t, t, ((M, M - 2 * t),))


def _brute_success(g, capacity):
    """Enumerate every error set of the tiny code with numpy bit tricks."""
    N = g.N
    sets = np.arange(1 << N, dtype=np.int64)
    weight = np.zeros_like(sets)
    hit = np.zeros_like(sets)
    for b in range(N):
        weight += (sets >> b) & 1
    for k in range(g.M):
        hit += ((sets >> (8 * k)) & 0xFF) != 0
    copy = g.N_f // 2
    f1 = np.zeros_like(sets)
    f2 = np.zeros_like(sets)
    for b in range(copy):
        f1 += (sets >> (g.N_d + b)) & 1
        f2 += (sets >> (g.N_d + copy + b)) & 1
    ok = (hit <= g.t) & (np.minimum(f1, f2) <= capacity)
    good = np.bincount(weight[ok], minlength=N + 1)
    return [Fraction(int(good[n]), comb(N, n)) for n in range(N + 1)]


def test_tiny_code_brute_force_matches_exact_model():
    g = tiny()
    brute = _brute_success(g, capacity=0)
    for n in range(g.N + 1):
        assert p_success(g, n, format_model="exact", format_capacity=0) == brute[n]


def test_split_model_agrees_while_a_copy_must_stay_readable():
    g = tiny(copy_bits=3)
    brute = _brute_success(g, capacity=1)
    # with q <= 2 * capacity + 1 format errors one copy always survives
    for n in range(g.N + 1):
        split = p_success(g, n, format_capacity=1)
        if n <= 3:
            assert split == brute[n]
    assert any(p_success(g, n, format_capacity=1) != brute[n] for n in range(4, g.N + 1))


def test_format_models_agree_up_to_seven_errors():
    for q in range(8):
        assert p_format(q) == p_format_exact(q) == 1
    assert p_format(8) == Fraction(8, 9)
    assert p_format(30) == Fraction(8, 31)
    assert p_format_exact(8) == Fraction(1364, 2001)


def test_format_exact_by_enumeration():
    for q in range(0, 11):
        good = sum(
            1
            for spots in itertools.combinations(range(30), q)
            if min(sum(s < 15 for s in spots), sum(s >= 15 for s in spots)) <= 3
        ) if q <= 6 else None
        if good is not None:
            assert p_format_exact(q) == Fraction(good, comb(30, q))
    # hypergeometric weights sum to one
    for q in range(31):
        assert sum(comb(15, i) * comb(15, q - i) for i in range(q + 1)) == comb(30, q)


def test_s_k_by_enumeration():
    for k in range(0, 4):
        for p in range(0, 8 * k + 1):
            brute = sum(
                1
                for spots in itertools.combinations(range(8 * k), p)
                if len({s // 8 for s in spots}) == k
            ) if 8 * k <= 16 else None
            if brute is not None:
                assert s_k(k, p) == brute


def test_s_k_partitions_error_sets():
    # every p-subset of 8M bits touches exactly k codewords for one k
    for M in (2, 5, 26):
        for p in (0, 1, 3, 9, 17):
            assert sum(comb(M, k) * s_k(k, p) for k in range(M + 1)) == comb(8 * M, p)


@pytest.mark.parametrize("version,level", SINGLE)
def test_vandermonde_over_allocations(version, level):
    g = geometry(version, level)
    for n in (0, 1, 7, 20, 45):
        assert sum(w for _, _, w in allocations(g, n)) == comb(g.N, n)


@pytest.mark.parametrize("version,level", SINGLE)
def test_success_profile(version, level):
    g = geometry(version, level)
    values = [p_success(g, n) for n in range(0, 40)]
    guaranteed = min(g.t, 7)
    assert all(v == 1 for v in values[: guaranteed + 1])
    assert values[guaranteed + 1] < 1
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert all(0 <= v <= 1 for v in values)


def test_data_probability_edges():
    g = geometry(3, "L")
    assert p_data(g, 0) == 1
    assert p_data(g, 7) == 1
    assert p_data(g, 57) == 0  # 57 bits need at least 8 codewords
    # two errors: fail impossible, closed form for p = 8 with t = 7
    eight = Fraction(comb(70, 8) * 8**8, comb(560, 8))
    assert p_data(g, 8) == 1 - eight


def test_levels_order():
    for version in (1, 2):
        probs = [p_success(geometry(version, lvl), 20) for lvl in "LMQH"]
        assert probs == sorted(probs)


def test_multi_block_rejected():
    with pytest.raises(MultiBlockUnsupported):
        p_success(geometry(3, "Q"), 5)


def test_W_zero_when_infeasible():
    g = geometry(1, "L")
    assert W(g, 3, 2, 2) == 0
    assert W(g, 3, 1, 2) == comb(208, 1) * comb(30, 2)
    assert binom(3, 5) == 0 and binom(3, -1) == 0
