from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qrlab.dataset import ingest_ranking, load_wordlist

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ranking() -> list[str]:
    return ingest_ranking(DATA / "ranking.csv")


@pytest.fixture(scope="session")
def wordlists() -> dict[str, list[str]]:
    return {name: load_wordlist(DATA / f"{name}.txt") for name in ("english", "german", "swahili")}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
