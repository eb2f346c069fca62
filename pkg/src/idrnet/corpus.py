"""Document records, journal tiers and filtered corpus views.

Record interchange format (``corpus.tsv``), one document per line::

    doc_id <TAB> year <TAB> month <TAB> journal_id <TAB> C04.588,C10.228,...

Lines starting with ``#`` and blank lines are ignored. Ranking files
(``ranking.tsv``) carry ``year <TAB> journal_id <TAB> percentile`` where
percentile 0 is the best-ranked journal.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from idrnet.errors import ConfigError, DataError

log = logging.getLogger(__name__)

CODE_RE = re.compile(r"^[A-Z]\d+(\.\d+)*$")

TIER_I = "I"
TIER_NI = "NI"
UNRANKED = "unranked"

MONTHS = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)


def valid_code(code: str) -> bool:
    return bool(CODE_RE.match(code))


def first_level(code: str) -> str:
    return code.split(".", 1)[0]


def rollup(code: str, depth: int = 2) -> str:
    """Truncate a tree code to its ancestor at ``depth`` dot-separated segments."""
    return ".".join(code.split(".")[:depth])


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    year: int
    month: int
    journal_id: str
    concepts: frozenset[str]

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise DataError(f"{self.doc_id}: month {self.month} outside 1-12")

    def to_line(self) -> str:
        return "\t".join(
            [self.doc_id, str(self.year), str(self.month), self.journal_id,
             ",".join(sorted(self.concepts))]
        )


@dataclass(frozen=True)
class Rejection:
    line_no: int
    reason: str


def parse_record(line: str, rollup_depth: int | None = None) -> DocumentRecord:
    parts = line.rstrip("\r\n").split("\t")
    if len(parts) < 4:
        raise DataError(f"expected 5 tab-separated fields, got {len(parts)}")
    doc_id, year, month, journal = (p.strip() for p in parts[:4])
    codes = parts[4].strip() if len(parts) > 4 else ""
    if not doc_id:
        raise DataError("missing doc_id")
    if not year:
        raise DataError("missing year")
    if not journal:
        raise DataError("missing journal_id")
    try:
        year_i = int(year)
    except ValueError:
        raise DataError(f"bad year {year!r}") from None
    try:
        month_i = int(month)
    except ValueError:
        raise DataError(f"bad month {month!r}") from None
    concepts = set()
    for c in filter(None, (c.strip() for c in codes.split(","))):
        if not valid_code(c):
            raise DataError(f"malformed concept code {c!r}")
        concepts.add(rollup(c, rollup_depth) if rollup_depth else c)
    return DocumentRecord(doc_id, year_i, month_i, journal, frozenset(concepts))


class Corpus:
    """In-memory store of ingested records, deduplicated by ``doc_id``.

    Single writer: call :meth:`ingest` from one thread. Views returned by
    :func:`corpus_view` are immutable snapshots.
    """

    def __init__(self, rollup_depth: int | None = None):
        self.rollup_depth = rollup_depth
        self.records: dict[str, DocumentRecord] = {}
        self.rejections: list[Rejection] = []
        self.duplicates = 0

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[DocumentRecord]:
        return iter(self.records.values())

    def add(self, rec: DocumentRecord) -> bool:
        if rec.doc_id in self.records:
            self.duplicates += 1
            return False
        self.records[rec.doc_id] = rec
        return True

    def ingest(self, lines: Iterable[str]) -> int:
        """Parse ``lines`` and store valid records; returns the number newly added."""
        added = 0
        for no, line in enumerate(lines, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                rec = parse_record(line, self.rollup_depth)
            except DataError as exc:
                self.rejections.append(Rejection(no, str(exc)))
                continue
            added += self.add(rec)
        if self.rejections:
            log.warning("%d malformed lines rejected", len(self.rejections))
        return added

    def years(self) -> list[int]:
        return sorted({r.year for r in self})

    def count_by_year(self) -> dict[int, int]:
        return dict(sorted(Counter(r.year for r in self).items()))

    def count_by_month(self, year: int) -> dict[int, int]:
        c = Counter(r.month for r in self if r.year == year)
        return {m: c.get(m, 0) for m in range(1, 13)}

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for doc_id in sorted(self.records):
                fh.write(self.records[doc_id].to_line() + "\n")


def ingest_records(source, rollup_depth: int | None = None, corpus: Corpus | None = None) -> Corpus:
    """Ingest a path or an iterable of lines into ``corpus`` (a new one by default)."""
    corpus = corpus if corpus is not None else Corpus(rollup_depth)
    if isinstance(source, (str, Path)):
        try:
            with open(source, encoding="utf-8") as fh:
                corpus.ingest(fh)
        except OSError as exc:
            raise DataError(f"cannot read corpus {source}: {exc.strerror}") from exc
    else:
        corpus.ingest(source)
    return corpus


# --- journal ranking -------------------------------------------------------


@dataclass
class JournalTierTable:
    """year -> journal_id -> rank percentile in [0, 1] (0 = best)."""

    table: dict[int, dict[str, float]] = field(default_factory=dict)

    def percentile(self, journal_id: str, year: int) -> float | None:
        return self.table.get(year, {}).get(journal_id)

    def add(self, year: int, journal_id: str, pct: float, duplicates: str = "error"):
        if not 0.0 <= pct <= 1.0:
            raise DataError(f"percentile {pct} for {journal_id}/{year} outside [0, 1]")
        row = self.table.setdefault(year, {})
        if journal_id in row:
            # journals ranked in several subject areas
            if duplicates == "best":
                pct = min(pct, row[journal_id])
            elif duplicates == "worst":
                pct = max(pct, row[journal_id])
            else:
                raise DataError(f"journal {journal_id} ranked twice in {year}")
        row[journal_id] = pct


def read_ranking(source, duplicates: str = "error") -> JournalTierTable:
    """Load ``year, journal_id, percentile`` rows.

    ``duplicates`` decides what happens when a journal appears more than once
    in a year: ``error`` (default), ``best`` or ``worst`` percentile.
    """
    if duplicates not in ("error", "best", "worst"):
        raise ConfigError(f"unknown duplicate policy {duplicates!r}")
    table = JournalTierTable()
    try:
        fh = open(source, encoding="utf-8") if isinstance(source, (str, Path)) else None
    except OSError as exc:
        raise DataError(f"cannot read ranking {source}: {exc.strerror}") from exc
    lines = fh if fh is not None else source
    try:
        for no, line in enumerate(lines, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\r\n").split("\t")
            if len(parts) != 3:
                raise DataError(f"ranking line {no}: expected 3 fields")
            try:
                year, pct = int(parts[0]), float(parts[2])
            except ValueError:
                raise DataError(f"ranking line {no}: bad number") from None
            table.add(year, parts[1].strip(), pct, duplicates)
    finally:
        if fh is not None:
            fh.close()
    return table


def classify_tier(table: JournalTierTable, journal_id: str, year: int, cutoff: float = 0.10) -> str:
    """``I`` if percentile <= cutoff, ``NI`` above it, ``unranked`` if absent."""
    if not 0.0 < cutoff < 1.0:
        raise ConfigError(f"cutoff must lie in (0, 1), got {cutoff}")
    pct = table.percentile(journal_id, year)
    if pct is None:
        return UNRANKED
    return TIER_I if pct <= cutoff else TIER_NI


# --- views -----------------------------------------------------------------


def parse_tier(label: str) -> tuple[str, int | None]:
    """Split ``I``, ``NI``, ``NI-June`` or ``NI-6`` into (tier, month)."""
    base, _, month = label.partition("-")
    if base not in (TIER_I, TIER_NI):
        raise ConfigError(f"unknown tier {label!r}")
    if not month:
        return base, None
    if month.isdigit():
        m = int(month)
    else:
        names = [n.lower() for n in MONTHS]
        if month.lower() not in names:
            raise ConfigError(f"unknown month in tier {label!r}")
        m = names.index(month.lower()) + 1
    if not 1 <= m <= 12:
        raise ConfigError(f"month {m} outside 1-12")
    return base, m


def tier_label(tier: str, month: int | None) -> str:
    return tier if month is None else f"{tier}-{MONTHS[month - 1]}"


@dataclass(frozen=True)
class CorpusView:
    records: tuple[DocumentRecord, ...]
    tier: str
    year: int
    month: int | None = None

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def label(self) -> str:
        return tier_label(self.tier, self.month)

    def __len__(self):
        return len(self.records)


def corpus_view(corpus: Corpus, table: JournalTierTable, tier: str, year: int,
                month: int | None = None, cutoff: float = 0.10) -> CorpusView:
    if tier not in (TIER_I, TIER_NI):
        raise ConfigError(f"unknown tier {tier!r}")
    if year not in corpus.count_by_year():
        raise DataError(f"year {year} not present in corpus")
    recs = [
        r for r in corpus
        if r.year == year
        and (month is None or r.month == month)
        and classify_tier(table, r.journal_id, year, cutoff) == tier
    ]
    recs.sort(key=lambda r: r.doc_id)
    return CorpusView(tuple(recs), tier, year, month)


# --- concept universe ------------------------------------------------------


def read_labels(source) -> dict[str, str]:
    """Load the ``code <TAB> label`` sidecar that defines the concept universe."""
    labels = {}
    try:
        with open(source, encoding="utf-8") as fh:
            for no, line in enumerate(fh, start=1):
                if not line.strip() or line.startswith("#"):
                    continue
                code, _, label = line.rstrip("\r\n").partition("\t")
                code = code.strip()
                if not valid_code(code):
                    raise DataError(f"labels line {no}: malformed code {code!r}")
                labels[code] = label.strip()
    except OSError as exc:
        raise DataError(f"cannot read labels {source}: {exc.strerror}") from exc
    return dict(sorted(labels.items()))
