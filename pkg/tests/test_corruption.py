import numpy as np
import pytest
from scipy import stats

from qrlab.codec import encode
from qrlab.corruption import (
    BURST_SIZE,
    CorruptionKind,
    CorruptionSpec,
    burst_errors,
    burst_windows,
    cell_labels,
    check_seed,
    corrupt,
    derive_rng,
    encoding_cells,
    flip_errors,
    sample_flips,
)
from qrlab.errors import ConfigError, CountExceedsRegion
from qrlab.symbol_model import geometry, region_map


@pytest.fixture(scope="module")
def symbol():
    return encode("example.com", 3, "L", 0)[0]


def test_encoding_cells_match_region_sizes():
    for version in (1, 2, 3):
        g = geometry(version, "L")
        assert len(encoding_cells(version)) == g.N


def test_cell_labels_group_codewords():
    for version in (1, 2, 3):
        g = geometry(version, "L")
        labels = cell_labels(version)
        counts = np.bincount(labels[labels >= 0])
        assert len(counts) == g.M and (counts == 8).all()
        assert (labels == -1).sum() == 15 and (labels == -2).sum() == 15
        assert (labels == -3).sum() == g.N_r


@pytest.mark.parametrize("n", [0, 1, 9, 20, 597])
def test_flip_changes_exactly_n_encoding_cells(symbol, n):
    regions = region_map(3)
    out, flipped = flip_errors(symbol, regions, n, seed=5)
    diff = out != symbol
    assert diff.sum() == n == len(flipped)
    assert not diff[~regions.encoding].any()
    assert {tuple(p) for p in np.argwhere(diff)} == flipped


def test_flip_count_exceeding_region(symbol):
    with pytest.raises(CountExceedsRegion):
        flip_errors(symbol, region_map(3), 598, seed=1)


def test_same_seed_same_result(symbol):
    regions = region_map(3)
    a = flip_errors(symbol, regions, 12, seed=99)
    b = flip_errors(symbol, regions, 12, seed=99)
    c = flip_errors(symbol, regions, 12, seed=100)
    assert a[1] == b[1] and (a[0] == b[0]).all()
    assert a[1] != c[1]


def test_flip_marginals_are_uniform():
    draws = sample_flips(derive_rng(7), 597, 10, 20000)
    counts = np.bincount(draws.ravel(), minlength=597)
    assert all(len(set(r)) == 10 for r in draws[:500])
    # each cell is hit with probability 10/597
    assert stats.chisquare(counts).pvalue > 1e-3


def test_flip_pairs_are_exchangeable():
    # joint law of the first two picks on a tiny population
    draws = sample_flips(derive_rng(3), 4, 2, 24000)
    pairs = np.bincount(draws[:, 0] * 4 + draws[:, 1], minlength=16).reshape(4, 4)
    assert (np.diag(pairs) == 0).all()
    assert stats.chisquare(pairs[~np.eye(4, dtype=bool)]).pvalue > 1e-3


def test_burst_darkens_only_encoding_cells(symbol):
    regions = region_map(3)
    out, windows = burst_errors(symbol, regions, 6, seed=11)
    assert len(windows) == 6
    diff = out != symbol
    assert (out[diff] == 1).all()
    assert not diff[~regions.encoding].any()
    touched = np.zeros_like(diff)
    for r, c in windows:
        touched[r : r + BURST_SIZE, c : c + BURST_SIZE] = True
    assert not (diff & ~touched).any()
    expected = touched & regions.encoding & (symbol == 0)
    assert (diff == expected).all()


def test_burst_windows_touch_encoding_region():
    for version in (1, 2, 3):
        enc = region_map(version).encoding
        side = enc.shape[0]
        brute = [
            (r, c)
            for r in range(side - 2)
            for c in range(side - 2)
            if enc[r : r + 3, c : c + 3].any()
        ]
        assert [tuple(w) for w in burst_windows(version)] == brute


def test_corrupt_sidecar(symbol):
    out, meta = corrupt(symbol, CorruptionSpec("flip", 4, seed=2))
    assert meta["kind"] == "flip" and meta["count"] == 4 and meta["seed"] == 2
    assert len(meta["flipped"]) == 4
    assert all(out[r, c] != symbol[r, c] for r, c in meta["flipped"])
    out, meta = corrupt(symbol, CorruptionSpec(CorruptionKind.BURST, 2, seed=2))
    assert len(meta["windows"]) == 2


def test_spec_validation():
    with pytest.raises(ConfigError):
        CorruptionSpec("smudge", 1)
    with pytest.raises(ConfigError):
        CorruptionSpec("flip", -1)
    with pytest.raises(ConfigError):
        check_seed(-1)
    with pytest.raises(ConfigError):
        check_seed(1 << 64)
    assert check_seed((1 << 64) - 1) == (1 << 64) - 1


def test_derived_streams_differ():
    a = derive_rng(1, 0).integers(0, 1 << 30, 4)
    b = derive_rng(1, 1).integers(0, 1 << 30, 4)
    assert not (a == b).all()
    assert (derive_rng(1, 0).integers(0, 1 << 30, 4) == a).all()
