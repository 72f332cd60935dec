import io
import json

import numpy as np
import pytest

from qrlab.codec import decode, encode, placement_order
from qrlab.corruption import CorruptionSpec, derive_rng
from qrlab.dataset import (
    LEET_MAP,
    TLDS,
    DatasetRecord,
    EvalKind,
    EvalSetSpec,
    LinearizationOrder,
    check_leet_map,
    delinearize,
    export,
    gen_evalset,
    ingest_ranking,
    leetify,
    linearize,
    load_leet_map,
    misspell,
    order_indices,
    parse_ranking,
    unleet,
)
from qrlab.errors import ConfigError, EmptyCorpus, MissingWordlist
from qrlab.symbol_model import Region, region_map


def test_orders_on_small_grid():
    m = np.arange(441).reshape(21, 21) % 2
    grid = np.arange(441).reshape(21, 21)
    assert list(order_indices(21, "A")[:3]) == [0, 1, 2]
    assert list(order_indices(21, "B")[:3]) == [0, 21, 42]
    assert list(order_indices(21, "C")[19:24]) == [19, 20, 41, 40, 39]
    assert list(order_indices(21, "D")[:4]) == [grid[20, 20], grid[20, 19], grid[19, 20], grid[19, 19]]
    for order in "ABCD":
        idx = order_indices(21, order)
        assert sorted(idx) == list(range(441))
        assert (delinearize(linearize(m, order), order) == m).all()


def test_order_d_follows_codeword_placement():
    for version in (1, 2, 3):
        side = 17 + 4 * version
        classes = region_map(version).classes.ravel()
        data = [i for i in order_indices(side, "D") if classes[i] in (Region.DATA_ECC, Region.REMAINDER)]
        placed = [r * side + c for r, c in placement_order(version)]
        assert data == placed


def test_bad_order():
    with pytest.raises(ConfigError):
        LinearizationOrder.parse("E")
    with pytest.raises(ConfigError):
        delinearize("012", "A")


def test_parse_ranking():
    lines = ["3,Zeta.com", "1,alpha.org", "bogus", "2,alpha.org", "x,bad.net", "", "4,beta.io"]
    domains, skipped = parse_ranking(lines)
    assert domains == ["alpha.org", "zeta.com", "beta.io"]
    assert [n for n, _ in skipped] == [3, 5]


def test_ingest_ranking(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("1,a.com\n2,b.com\n")
    assert ingest_ranking(path) == ["a.com", "b.com"]
    path.write_text("junk\n")
    with pytest.raises(EmptyCorpus):
        ingest_ranking(path)


def test_fixture_ranking(ranking):
    assert len(ranking) == len(set(ranking)) > 9000
    assert all("." in d and d == d.lower() for d in ranking)


WORDS = {"english": ["dry", "access", "act", "freedom", "tree"], "german": ["haus", "baum"], "swahili": ["jambo"]}


@pytest.mark.parametrize("kind", list(EvalKind))
def test_evalset_shape(kind):
    out = gen_evalset(EvalSetSpec(kind, 50, seed=9), WORDS)
    assert len(out) == 50
    assert out == gen_evalset(EvalSetSpec(kind, 50, seed=9), WORDS)
    for domain in out:
        sld, dot, tld = domain.partition(".")
        if kind is EvalKind.NO_TLD:
            assert not dot
        else:
            assert tld in TLDS
        assert sld.isalnum()


def test_evalset_word_sources():
    english = set(WORDS["english"])
    for d in gen_evalset(EvalSetSpec("english", 30, seed=1), WORDS):
        sld = d.split(".")[0]
        assert any(sld.startswith(w) and sld[len(w):] in english for w in english)
    for d in gen_evalset(EvalSetSpec("random-alphabet", 50, seed=1), WORDS):
        assert 6 <= len(d.split(".")[0]) <= 16


def test_misspell_and_leet():
    rng = derive_rng(0)
    for _ in range(100):
        out = misspell("freedom", rng)
        assert sum(a != b for a, b in zip(out, "freedom")) == 1
        leet = leetify("freedom", rng)
        assert sum(a != b for a, b in zip(leet, "freedom")) == 1
        assert unleet(leet) == "freedom"


def test_leet_map_validation(tmp_path):
    with pytest.raises(ConfigError):
        check_leet_map({"a": "x"})
    with pytest.raises(ConfigError):
        check_leet_map({"a": "4", "h": "4"})
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"a": "4"}))
    assert load_leet_map(path) == {"a": "4"}
    assert check_leet_map(LEET_MAP) == LEET_MAP


def test_missing_wordlist():
    with pytest.raises(MissingWordlist):
        gen_evalset(EvalSetSpec("german", 3, seed=1), {"english": ["a"]})


def test_export_records():
    sink = io.StringIO()
    corpus = ["google.com", "x" * 80, "wiki.org"]
    n = export(corpus, 3, "L", "auto", "D", [CorruptionSpec("flip", 20)], seed=4, sink=sink)
    lines = sink.getvalue().splitlines()
    assert n == len(lines) == 4
    recs = [DatasetRecord.from_json(line) for line in lines]
    clean, damaged = recs[0], recs[1]
    assert clean.corruption is None and damaged.corruption["count"] == 20
    m, mask = encode("google.com", 3, "L")
    assert (clean.matrix() == m).all() and clean.mask == mask
    assert int((clean.matrix() != damaged.matrix()).sum()) == 20
    assert decode(clean.matrix())[0] == "google.com"
    assert recs[2].text == "wiki.org"


def test_export_job_independent():
    corpus = ["a.com", "b.org", "c.net", "d.io"]
    outs = []
    for jobs in (1, 2):
        sink = io.StringIO()
        export(corpus, 1, "M", 2, "A", [CorruptionSpec("burst", 2)], seed=1, sink=sink, jobs=jobs)
        outs.append(sink.getvalue())
    assert outs[0] == outs[1]


def test_export_rejects_empty():
    with pytest.raises(EmptyCorpus):
        export([], 1, "L", 0, "A", sink=io.StringIO())
