"""Regenerate the wordlists and synthetic ranking under tests/data.

Needs the ``wordfreq`` package (a development-only dependency). The Swahili
list is maintained by hand because wordfreq ships no Swahili data.

    python tools/make_fixtures.py
"""
from __future__ import annotations

import random
from pathlib import Path

from wordfreq import top_n_list

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
SEED = 20240611
RANKING_SIZE = 10_000
# rough share of popular TLDs in top-site rankings
TLD_WEIGHTS = {
    "com": 55, "org": 6, "net": 6, "io": 3, "co": 2, "de": 3, "ru": 3, "jp": 2,
    "fr": 2, "me": 1, "info": 1, "cc": 1, "site": 1, "gov": 1, "ua": 1, "uk": 2,
    "br": 2, "in": 2, "cn": 2, "tv": 1, "app": 1, "dev": 1,
}
# keep the fixtures presentable
BLOCKED = ("fuck", "shit", "bitch", "cunt", "nigg", "porn", "pussy", "cock", "dick", "whore", "slut", "fag", "sex", "rape")


def words(lang: str, n: int) -> list[str]:
    out = []
    for w in top_n_list(lang, 50_000):
        if w.isascii() and w.isalpha() and 3 <= len(w) <= 10 and not any(b in w for b in BLOCKED):
            out.append(w.lower())
        if len(out) == n:
            break
    return out


def domain(rng: random.Random, vocab: list[str]) -> str:
    tld = rng.choices(list(TLD_WEIGHTS), weights=list(TLD_WEIGHTS.values()))[0]
    # popular words are much likelier to appear in real names
    pick = lambda: vocab[int(len(vocab) * rng.random() ** 2)]  # noqa: E731
    style = rng.random()
    if style < 0.40:
        sld = pick()
    elif style < 0.70:
        sld = pick() + pick()
    elif style < 0.78:
        sld = pick() + "-" + pick()
    elif style < 0.86:
        sld = pick() + str(rng.randint(1, 999))
    elif style < 0.94:
        sld = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(2, 4)))
    else:
        return f"{rng.choice(['www', 'cdn', 'api', 'app', 'static', 'mail'])}.{pick()}.{tld}"
    return f"{sld}.{tld}"


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    english = words("en", 5000)
    german = words("de", 3000)
    (DATA / "english.txt").write_text("\n".join(english) + "\n", encoding="utf-8")
    (DATA / "german.txt").write_text("\n".join(german) + "\n", encoding="utf-8")
    rng = random.Random(SEED)
    seen: set[str] = set()
    lines = []
    while len(lines) < RANKING_SIZE:
        d = domain(rng, english)
        if d not in seen:
            seen.add(d)
            lines.append(f"{len(lines) + 1},{d}")
    (DATA / "ranking.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
