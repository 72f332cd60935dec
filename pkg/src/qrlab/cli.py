"""Command line interface: ``qrlab <command> ...``.

Exit status is 0 on success, 1 when the input cannot be encoded or decoded
(or a file cannot be read) and 2 for invalid arguments.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import DecoderMode, SensitivityReport, TrialReport, mask_distribution, sensitivity, similarity, simulate
from .codec import AUTO, PADDING_STYLES, byte_capacity, decode, encode
from .corruption import CorruptionKind, CorruptionSpec, corrupt
from .dataset import (
    EvalKind,
    EvalSetSpec,
    LinearizationOrder,
    LEET_MAP,
    export,
    gen_evalset,
    ingest_ranking,
    load_leet_map,
    load_wordlist,
)
from .errors import ConfigError, QrlabError
from .formats import FORMATS, dumps, loads
from .symbol_model import SCORING_STYLES, EccLevel, geometry
from .theory import FORMAT_MODELS, p_success

log = logging.getLogger("qrlab")


class UsageError(Exception):
    pass


def _mask(value: str):
    if value.lower() == AUTO:
        return AUTO
    try:
        mask = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mask must be 0..7 or auto, got {value!r}") from None
    if not 0 <= mask <= 7:
        raise argparse.ArgumentTypeError(f"mask must be 0..7 or auto, got {value!r}")
    return mask


def _fixed_mask(value: str) -> int:
    mask = _mask(value)
    if mask == AUTO:
        raise argparse.ArgumentTypeError("this command needs a fixed mask 0..7")
    return mask


def _level(value: str) -> EccLevel:
    try:
        return EccLevel.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(value: str) -> int:
    try:
        seed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {value!r}") from None
    if not 0 <= seed < 1 << 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return seed


def _nonneg(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _counts(value: str) -> list[int]:
    """'5', '1,5,9' or '0:30:5' (start:stop:step, stop inclusive)."""
    try:
        if ":" in value:
            parts = [int(x) for x in value.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            counts = list(range(start, stop + 1, step))
        else:
            counts = [int(x) for x in value.split(",")]
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"bad count list {value!r}") from None
    if not counts or min(counts) < 0:
        raise argparse.ArgumentTypeError(f"bad count list {value!r}")
    return counts


def _augment(value: str) -> CorruptionSpec:
    kind, _, count = value.partition(":")
    try:
        return CorruptionSpec(CorruptionKind.parse(kind), int(count))
    except (ValueError, ConfigError):
        raise argparse.ArgumentTypeError(f"augmentation must look like flip:20 or burst:3, got {value!r}") from None


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("QRLAB_JOBS", "1")))
    except ValueError:
        return 1


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _read_corpus(args) -> list[str]:
    if args.corpus:
        domains = ingest_ranking(args.corpus)
    else:
        with open(args.texts, encoding="utf-8") as fh:
            domains = [line.strip() for line in fh if line.strip()]
    start = args.offset
    stop = None if args.limit is None else start + args.limit
    return domains[start:stop]


def _write_csv(fh, columns: Sequence[str], rows) -> None:
    writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})


def _fmt(value):
    return repr(value) if isinstance(value, float) else value


# commands


def cmd_encode(args) -> int:
    matrix, mask = encode(args.text, args.version, args.ecc, args.mask, padding=args.padding, scoring=args.scoring)
    log.info("mask %d", mask)
    with _output(args.out) as fh:
        fh.write(dumps(matrix, args.format, args.order))
    return 0


def cmd_decode(args) -> int:
    matrix = loads(_read_input(args.input), args.format, args.order)
    text, report = decode(matrix)
    print(text)
    if args.report:
        print(
            json.dumps(
                {
                    "mask": report.mask,
                    "level": report.level.name,
                    "corrected_codewords": report.corrected_codewords,
                    "format_distance": report.format_distance,
                }
            ),
            file=sys.stderr,
        )
    return 0


def cmd_corrupt(args) -> int:
    matrix = loads(_read_input(args.input), args.format, args.order)
    damaged, meta = corrupt(matrix, CorruptionSpec(args.kind, args.count, args.seed))
    with _output(args.out) as fh:
        fh.write(dumps(damaged, args.format, args.order))
    meta_path = args.meta or (f"{args.out}.meta.json" if args.out != "-" else None)
    if meta_path:
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh)
            fh.write("\n")
    return 0


def cmd_theory(args) -> int:
    geom = geometry(args.version, args.ecc)
    if args.n_max < args.n_min:
        raise UsageError("--n-max must not be below --n-min")
    if args.n_max > geom.N:
        raise UsageError(f"--n-max exceeds the {geom.N} encoding-region bits of {geom.name}")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        value = p_success(geom, n, args.format_model)
        rows.append({"n": n, "numerator": value.numerator, "denominator": value.denominator, "value": float(value)})
    with _output(args.out) as fh:
        _write_csv(fh, ["n", "numerator", "denominator", "value"], rows)
    return 0


def cmd_simulate(args) -> int:
    geom = geometry(args.version, args.ecc)
    reports = [
        simulate(
            geom,
            args.mask,
            CorruptionSpec(args.kind, n, args.seed),
            args.trials,
            args.seed,
            args.mode,
            text=args.text,
            jobs=args.jobs,
        )
        for n in args.count
    ]
    with _output(args.out) as fh:
        _write_csv(fh, TrialReport.columns(), (r.row() for r in reports))
    return 0


def cmd_sensitivity(args) -> int:
    corpus = _read_corpus(args)
    reports = []
    for version in args.version:
        for level in args.ecc:
            reports.append(sensitivity(version, level, corpus, args.pairs, args.seed, args.mask))
    with _output(args.out) as fh:
        _write_csv(fh, SensitivityReport.columns(), (r.row() for r in reports))
    return 0


def cmd_similarity(args) -> int:
    value = similarity(args.a, args.b)
    print(f"{value:.{args.digits}f}" if args.digits is not None else repr(value))
    return 0


def cmd_mask_dist(args) -> int:
    cap = byte_capacity(geometry(args.version, args.ecc))
    entries = _read_corpus(args)
    corpus = [t for t in entries if t.isascii() and len(t) <= cap]
    if len(corpus) < len(entries):
        log.warning("skipped %d entries that are not ASCII text of 1..%d bytes", len(entries) - len(corpus), cap)
    shares = mask_distribution(corpus, args.version, args.ecc, scoring=args.scoring, padding=args.padding)
    rows = [
        {"mask": m, "count": int(share * len(corpus)), "proportion": float(share)} for m, share in shares.items()
    ]
    with _output(args.out) as fh:
        _write_csv(fh, ["mask", "count", "proportion"], rows)
    return 0


def cmd_export(args) -> int:
    corpus = _read_corpus(args)
    with _output(args.out) as fh:
        count = export(
            corpus,
            args.version,
            args.ecc,
            args.mask,
            args.order,
            args.augment,
            args.seed,
            fh,
            jobs=args.jobs,
            padding=args.padding,
            scoring=args.scoring,
        )
    log.info("wrote %d records", count)
    return 0


def cmd_evalset(args) -> int:
    wordlists = {}
    for name in ("english", "german", "swahili"):
        path = getattr(args, name)
        if path:
            wordlists[name] = load_wordlist(path)
    leet = load_leet_map(args.leet_map) if args.leet_map else dict(LEET_MAP)
    samples = gen_evalset(EvalSetSpec(args.kind, args.count, args.seed, leet), wordlists)
    with _output(args.out) as fh:
        for s in samples:
            fh.write(s + "\n")
    return 0


# parser


def _add_geometry(p, multi: bool = False) -> None:
    if multi:
        p.add_argument("--version", type=int, choices=(1, 2, 3), nargs="+", required=True, help="symbol version(s)")
        p.add_argument("--ecc", type=_level, nargs="+", required=True, help="error correction level(s) L/M/Q/H")
    else:
        p.add_argument("--version", type=int, choices=(1, 2, 3), required=True, help="symbol version")
        p.add_argument("--ecc", type=_level, required=True, help="error correction level L/M/Q/H")


def _add_format(p) -> None:
    p.add_argument("--format", choices=FORMATS, default="grid", help="symbol serialization (default grid)")
    p.add_argument(
        "--order",
        type=LinearizationOrder.parse,
        default=LinearizationOrder.D,
        help="linearization order A/B/C/D for --format bits (default D)",
    )


def _add_style(p) -> None:
    p.add_argument("--padding", choices=PADDING_STYLES, default="iso", help="pad codeword style (default iso)")
    p.add_argument("--scoring", choices=SCORING_STYLES, default="iso", help="automatic mask scoring (default iso)")


def _add_corpus(p) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="ranking CSV with rank,domain lines")
    src.add_argument("--texts", help="plain text file, one string per line")
    p.add_argument("--offset", type=_nonneg, default=0, help="skip this many entries (rank slicing)")
    p.add_argument("--limit", type=_nonneg, help="use at most this many entries")


def _add_out(p) -> None:
    p.add_argument("--out", default="-", help="output path, '-' for standard output (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrlab", description="QR code encoding, corruption and error-correction analysis.")
    parser.add_argument("--version-info", action="version", version=f"qrlab {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("encode", help="encode text as a symbol")
    p.add_argument("--text", required=True, help="ASCII text to encode")
    _add_geometry(p)
    p.add_argument("--mask", type=_mask, default=AUTO, help="mask 0..7 or auto (default auto)")
    _add_format(p)
    _add_style(p)
    _add_out(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a symbol and print its text")
    p.add_argument("input", nargs="?", default="-", help="symbol file, '-' for standard input (default)")
    _add_format(p)
    p.add_argument("--report", action="store_true", help="print mask, level and corrections as JSON to stderr")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("corrupt", help="apply flip or burst errors to a symbol")
    p.add_argument("input", nargs="?", default="-", help="symbol file, '-' for standard input (default)")
    p.add_argument("--kind", type=CorruptionKind.parse, required=True, help="flip or burst")
    p.add_argument("--count", type=_nonneg, required=True, help="number of flipped bits or burst windows")
    p.add_argument("--seed", type=_seed, required=True, help="random seed")
    p.add_argument("--meta", help="sidecar JSON path (default OUT.meta.json when --out is a file)")
    _add_format(p)
    _add_out(p)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("theory", help="exact success probability under n random flips, as CSV")
    _add_geometry(p)
    p.add_argument("--n-min", type=_nonneg, default=0, help="first n (default 0)")
    p.add_argument("--n-max", type=_nonneg, required=True, help="last n")
    p.add_argument("--format-model", choices=FORMAT_MODELS, default="split", help="format-split weighting (default split)")
    _add_out(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("simulate", help="Monte-Carlo success rate, as CSV")
    _add_geometry(p)
    p.add_argument("--mask", type=_fixed_mask, default=0, help="mask 0..7 (default 0)")
    p.add_argument("--kind", type=CorruptionKind.parse, default=CorruptionKind.FLIP, help="flip (default) or burst")
    p.add_argument("--count", type=_counts, required=True, help="error counts: 5, 1,5,9 or 0:30:5")
    p.add_argument("--trials", type=_positive, required=True, help="trials per count")
    p.add_argument("--seed", type=_seed, required=True, help="random seed")
    p.add_argument("--mode", type=DecoderMode.parse, default=DecoderMode.IDEAL, help="ideal (default) or full")
    p.add_argument("--text", help="payload for full mode (default example.com, clipped to capacity)")
    p.add_argument("--jobs", type=_positive, default=_default_jobs(), help="worker processes")
    _add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sensitivity", help="bit changes caused by single-letter edits, as CSV")
    _add_geometry(p, multi=True)
    _add_corpus(p)
    p.add_argument("--pairs", type=_positive, required=True, help="mutation pairs per geometry")
    p.add_argument("--seed", type=_seed, required=True, help="random seed")
    p.add_argument("--mask", type=_fixed_mask, default=0, help="fixed mask (default 0)")
    _add_out(p)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("similarity", help="normalized Levenshtein similarity of two strings")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--digits", type=_nonneg, help="round to this many decimals")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("mask-dist", help="share of each automatically selected mask, as CSV")
    _add_geometry(p)
    _add_corpus(p)
    _add_style(p)
    _add_out(p)
    p.set_defaults(func=cmd_mask_dist)

    p = sub.add_parser("dataset", help="dataset generation")
    dsub = p.add_subparsers(dest="dataset_command", required=True, metavar="COMMAND")

    q = dsub.add_parser("export", help="write line-delimited JSON records")
    _add_corpus(q)
    _add_geometry(q)
    q.add_argument("--mask", type=_mask, default=0, help="mask 0..7 or auto (default 0)")
    q.add_argument(
        "--order", type=LinearizationOrder.parse, default=LinearizationOrder.D, help="linearization order (default D)"
    )
    q.add_argument(
        "--augment", type=_augment, action="append", default=[], help="corrupted copy per entry, e.g. flip:20 (repeatable)"
    )
    q.add_argument("--seed", type=_seed, required=True, help="random seed")
    q.add_argument("--jobs", type=_positive, default=_default_jobs(), help="worker processes")
    _add_style(q)
    _add_out(q)
    q.set_defaults(func=cmd_export)

    q = dsub.add_parser("evalset", help="generate an evaluation corpus, one domain per line")
    q.add_argument("--kind", type=EvalKind.parse, required=True, help=", ".join(k.value for k in EvalKind))
    q.add_argument("--count", type=_positive, required=True, help="number of samples")
    q.add_argument("--seed", type=_seed, required=True, help="random seed")
    q.add_argument("--english", help="English wordlist")
    q.add_argument("--german", help="German wordlist")
    q.add_argument("--swahili", help="Swahili wordlist")
    q.add_argument("--leet-map", help="JSON object overriding the leetspeak letter-to-digit map")
    _add_out(q)
    q.set_defaults(func=cmd_evalset)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="qrlab: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"qrlab: error: {exc}", file=sys.stderr)
        return 2
    except QrlabError as exc:
        print(f"qrlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qrlab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
