"""CoNLL-U ingestion and per-sentence / per-length dependency distance tables."""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Literal, Sequence

from . import expectations as ex
from .arrangement import Arrangement, count_crossings, root_is_covered, sum_edge_lengths
from .tree import TreeError, from_head_vector

log = logging.getLogger(__name__)

Constraint = Literal["none", "planar", "projective"]
CONSTRAINTS: tuple[Constraint, ...] = ("none", "planar", "projective")

LENGTH_HEADER = ["lang", "n", "count", "constraint", "mean_d", "expected_mean_d"]
COVERAGE_HEADER = ["lang", "pct_projective", "pct_planar"]
METRICS_HEADER = [
    "lang", "sent_id", "n", "D", "C", "planar", "projective", "mean_d",
    "expected_mean_d_none", "expected_mean_d_planar", "expected_mean_d_projective",
]


class ConlluError(OSError):
    """The stream itself could not be read."""


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    upos: str
    head: int


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    sent_id: str | None = None
    line: int = 0

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def heads(self) -> list[int]:
        return [t.head for t in self.tokens]


@dataclass(frozen=True)
class Diagnostic:
    line: int
    sent_id: str | None
    message: str


def _report(diagnostics: list[Diagnostic] | None, line: int, sent_id: str | None, msg: str) -> None:
    # callers that collect diagnostics report them; otherwise warn via logging
    if diagnostics is not None:
        diagnostics.append(Diagnostic(line, sent_id, msg))
    else:
        log.warning("line %d (sent_id=%s): %s", line, sent_id, msg)


def _validated(sentence: Sentence, diagnostics: list[Diagnostic] | None) -> Sentence | None:
    if [t.id for t in sentence.tokens] != list(range(1, sentence.n + 1)):
        _report(diagnostics, sentence.line, sentence.sent_id, "token ids are not 1..n")
        return None
    try:
        from_head_vector(sentence.heads)
    except TreeError as exc:
        _report(diagnostics, sentence.line, sentence.sent_id, f"not a tree: {exc}")
        return None
    return sentence


def parse_conllu(stream: Iterable[str], diagnostics: list[Diagnostic] | None = None) -> Iterator[Sentence]:
    """Yield the well-formed sentences of a CoNLL-U stream.

    Multiword ranges (``3-4``) and empty nodes (``3.1``) are skipped.  A
    malformed sentence is reported (logged, and appended to ``diagnostics``
    when given) and dropped; reading continues with the next sentence.
    """
    tokens: list[Token] = []
    sent_id: str | None = None
    start: int | None = None
    broken = False
    lineno = 0

    def flush() -> Iterator[Sentence]:
        if tokens and not broken:
            s = _validated(Sentence(tuple(tokens), sent_id, start or 0), diagnostics)
            if s is not None:
                yield s

    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                yield from flush()
                tokens, sent_id, start, broken = [], None, None, False
                continue
            if start is None:
                start = lineno
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                if key.strip() == "sent_id":
                    sent_id = val.strip()
                continue
            if broken:
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                _report(diagnostics, lineno, sent_id, f"expected 10 columns, found {len(cols)}")
                broken = True
                continue
            if "-" in cols[0] or "." in cols[0]:
                continue
            try:
                tokens.append(Token(int(cols[0]), cols[1], cols[3], int(cols[6])))
            except ValueError:
                _report(diagnostics, lineno, sent_id, f"bad id or head: {cols[0]!r} / {cols[6]!r}")
                broken = True
        yield from flush()
    except (UnicodeDecodeError, OSError) as exc:
        raise ConlluError(f"cannot read CoNLL-U stream after line {lineno}: {exc}") from exc


def read_conllu(path: str | Path, diagnostics: list[Diagnostic] | None = None) -> list[Sentence]:
    try:
        with open(path, encoding="utf-8") as fh:
            return list(parse_conllu(fh, diagnostics))
    except OSError as exc:
        if isinstance(exc, ConlluError):
            raise
        raise ConlluError(f"cannot read {path}: {exc}") from exc


def strip_punctuation(
    sentence: Sentence, diagnostics: list[Diagnostic] | None = None, punct_tag: str = "PUNCT"
) -> Sentence | None:
    """Drop punctuation tokens, re-attaching their dependents upwards.

    A dependent of a removed token is re-attached to its nearest
    non-punctuation ancestor, or made a root if there is none.  Returns
    ``None`` (with a diagnostic) when the result has fewer than two tokens or
    is no longer a tree.
    """
    toks = sentence.tokens
    keep = [t.upos != punct_tag for t in toks]
    new_id = {}
    for t, k in zip(toks, keep):
        if k:
            new_id[t.id] = len(new_id) + 1
    out = []
    for t, k in zip(toks, keep):
        if not k:
            continue
        h = t.head
        seen = 0
        while h != 0 and not keep[h - 1]:
            h = toks[h - 1].head
            seen += 1
            if seen > len(toks):
                break
        out.append(Token(new_id[t.id], t.form, t.upos, new_id.get(h, 0)))
    if len(out) < 2:
        _report(diagnostics, sentence.line, sentence.sent_id, f"{len(out)} tokens left after removing punctuation")
        return None
    return _validated(Sentence(tuple(out), sentence.sent_id, sentence.line), diagnostics)


@dataclass(frozen=True)
class SentenceMetrics:
    n: int
    D: int
    C: int
    planar: bool
    projective: bool
    mean_d: Fraction
    expected_mean_d: tuple[Fraction, Fraction, Fraction]  # none, planar, projective
    sent_id: str | None = None

    def satisfies(self, constraint: Constraint) -> bool:
        return constraint == "none" or (self.planar if constraint == "planar" else self.projective)

    def baseline(self, constraint: Constraint) -> Fraction:
        return self.expected_mean_d[CONSTRAINTS.index(constraint)]


def sentence_metrics(sentence: Sentence) -> SentenceMetrics:
    """Observed D and crossings plus the three random baselines, divided by n-1."""
    n = sentence.n
    if n < 2:
        raise ValueError("sentence metrics need at least two tokens")
    rooted = from_head_vector(sentence.heads)
    tree = rooted.base
    arr = Arrangement.identity(n)
    D = sum_edge_lengths(tree, arr)
    C = count_crossings(tree, arr)
    planar = C == 0
    projective = planar and not root_is_covered(rooted, arr)
    expected = (
        ex.expected_D_unconstrained(n) / (n - 1),
        ex.expected_D_planar(tree) / (n - 1),
        ex.expected_D_projective(rooted) / (n - 1),
    )
    return SentenceMetrics(n, D, C, planar, projective, Fraction(D, n - 1), expected, sentence.sent_id)


@dataclass(frozen=True)
class LengthRow:
    n: int
    count: int
    mean_d: Fraction
    expected_mean_d: Fraction


def aggregate_by_length(metrics: Iterable[SentenceMetrics], constraint: Constraint) -> list[LengthRow]:
    """Per sentence length: average observed and expected ``<d>`` over the
    sentences satisfying ``constraint``."""
    groups: dict[int, list[SentenceMetrics]] = defaultdict(list)
    for m in metrics:
        if m.satisfies(constraint):
            groups[m.n].append(m)
    rows = []
    for n in sorted(groups):
        ms = groups[n]
        rows.append(
            LengthRow(
                n,
                len(ms),
                sum((m.mean_d for m in ms), Fraction(0)) / len(ms),
                sum((m.baseline(constraint) for m in ms), Fraction(0)) / len(ms),
            )
        )
    return rows


def coverage_table(metrics: Sequence[SentenceMetrics]) -> tuple[Fraction, Fraction]:
    """(percent projective, percent planar) over ``metrics``; zeros if empty."""
    if not metrics:
        return Fraction(0), Fraction(0)
    total = len(metrics)
    pr = sum(m.projective for m in metrics)
    pl = sum(m.planar for m in metrics)
    return Fraction(100 * pr, total), Fraction(100 * pl, total)


def format_decimal(x: Fraction | int, places: int = 6) -> str:
    """Exact round-half-even rendering of a rational."""
    x = Fraction(x)
    scale = 10**places
    q, r = divmod(abs(x.numerator) * scale, x.denominator)
    if 2 * r > x.denominator or (2 * r == x.denominator and q % 2 == 1):
        q += 1
    sign = "-" if x < 0 and q else ""
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


# -- corpus pipeline -------------------------------------------------------


def lang_of(path: str | Path) -> str:
    """Language label from a file name: ``en_pud-ud-test.conllu`` -> ``en_pud``."""
    return Path(path).name.split(".")[0].split("-")[0]


def corpus_metrics(
    sentences: Iterable[Sentence], diagnostics: list[Diagnostic] | None = None
) -> list[SentenceMetrics]:
    out = []
    for s in sentences:
        s = strip_punctuation(s, diagnostics)
        if s is not None:
            m = sentence_metrics(s)
            assert m.planar or not m.projective
            out.append(m)
    return out


def file_metrics(path: str | Path) -> tuple[list[SentenceMetrics], list[Diagnostic]]:
    diags: list[Diagnostic] = []
    return corpus_metrics(read_conllu(path, diags), diags), diags


def write_tables(by_lang: dict[str, list[SentenceMetrics]], out_dir: str | Path) -> dict[str, Path]:
    """Write metrics, per-length (one file per constraint) and coverage CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"metrics": out / "metrics.csv", "coverage": out / "coverage.csv"}
    d = format_decimal

    with open(paths["metrics"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for lang, ms in by_lang.items():
            for i, m in enumerate(ms, 1):
                w.writerow(
                    [lang, m.sent_id or i, m.n, m.D, m.C, int(m.planar), int(m.projective), d(m.mean_d)]
                    + [d(e) for e in m.expected_mean_d]
                )

    for c in CONSTRAINTS:
        p = paths[f"by_length_{c}"] = out / f"by_length_{c}.csv"
        with open(p, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(LENGTH_HEADER)
            for lang, ms in by_lang.items():
                for row in aggregate_by_length(ms, c):
                    w.writerow([lang, row.n, row.count, c, d(row.mean_d), d(row.expected_mean_d)])

    with open(paths["coverage"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COVERAGE_HEADER)
        for lang, ms in by_lang.items():
            if ms:
                pr, pl = coverage_table(ms)
                w.writerow([lang, d(pr), d(pl)])
    return paths


def _split_lang(spec: str | Path) -> tuple[str, Path]:
    s = str(spec)
    if "=" in s and not Path(s).exists():
        lang, _, p = s.partition("=")
        return lang, Path(p)
    return lang_of(s), Path(s)


def analyze_files(
    paths: Sequence[str | Path], out_dir: str | Path, jobs: int = 1
) -> tuple[dict[str, Path], list[tuple[Path, Diagnostic]]]:
    """Run the corpus pipeline over CoNLL-U files and write the CSV tables.

    ``paths`` entries may be ``lang=path`` to override the label taken from
    the file name.  Files sharing a label are concatenated in input order.
    With ``jobs > 1`` files are processed in worker processes; results are
    merged in input order so the output does not depend on ``jobs``.
    """
    labelled = [_split_lang(p) for p in paths]
    files = [p for _, p in labelled]
    if jobs > 1 and len(files) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(file_metrics, files))
    else:
        results = [file_metrics(p) for p in files]
    by_lang: dict[str, list[SentenceMetrics]] = {}
    diags: list[tuple[Path, Diagnostic]] = []
    for (lang, path), (ms, ds) in zip(labelled, results):
        by_lang.setdefault(lang, []).extend(ms)
        diags.extend((path, d) for d in ds)
    return write_tables(by_lang, out_dir), diags
