"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qrlab import _purepy
from qrlab.codec import codewords, encode, place_codewords
from qrlab.corruption import cell_labels, encoding_cells
from qrlab.ecc import generator_polynomial, rs_encode

try:
    from qrlab import _kernels
except ImportError:
    _kernels = None


def cases():
    rng = np.random.default_rng(0)
    symbol = place_codewords(codewords("example.com", 3, "L"), 3)
    gen = bytes(generator_polynomial(15).coefficients)
    data = bytes(range(55))
    word = bytearray(rs_encode(data, 15).codeword)
    for pos in (3, 17, 40, 51, 60, 64, 69):
        word[pos] ^= 0x5A
    word = bytes(word)
    population = len(encoding_cells(3))
    draws = rng.integers(0, population - np.arange(20), size=(8192, 20))
    cells = _purepy.partial_shuffle(draws, population)
    labels = cell_labels(3)
    return {
        "penalty_score (v3)": lambda k: k.penalty_score(symbol),
        "rs_remainder (70,55)": lambda k: k.rs_remainder(data, gen),
        "rs_correct 7 errors": lambda k: k.rs_correct(word, 15),
        "partial_shuffle 8192x20": lambda k: k.partial_shuffle(draws, population),
        "ideal_outcomes 8192x20": lambda k: k.ideal_outcomes(cells, labels, 7, 3),
    }


def best(fn, repeat):
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'kernel':<26}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, call in cases().items():
        py = best(lambda: call(_purepy), args.repeat)
        cy = best(lambda: call(_kernels), args.repeat)
        print(f"{name:<26}{py * 1e6:>10.1f}us{cy * 1e6:>10.1f}us{py / cy:>9.1f}x")
    enc = best(lambda: encode("example.com", 3, "L"), args.repeat)
    print(f"\nencode v3-L with auto mask: {enc * 1e6:.1f}us")


if __name__ == "__main__":
    main()
