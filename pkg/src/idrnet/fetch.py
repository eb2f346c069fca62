"""Small E-utilities style client (esearch + efetch) producing corpus lines.

Only the parts needed to turn PubMed XML into ``corpus.tsv`` lines are
implemented. MeSH descriptor UIs are mapped to tree codes through a
caller-supplied table, since PubMed records do not carry tree numbers.
"""

from __future__ import annotations

import logging
import os
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import requests

from idrnet.corpus import MONTHS, DocumentRecord, Rejection, rollup
from idrnet.errors import DataError

log = logging.getLogger(__name__)

TRANSIENT = {429, 500, 502, 503, 504}


@dataclass
class EndpointConfig:
    base_url: str = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils"
    api_key_env: str = "NCBI_API_KEY"
    requests_per_second: float = 3.0
    max_retries: int = 4
    backoff: float = 0.5
    timeout: float = 30.0
    batch_size: int = 200
    db: str = "pubmed"


@dataclass
class QueryWindow:
    term: str
    mindate: str
    maxdate: str
    datetype: str = "pdat"


@dataclass
class EutilsClient:
    config: EndpointConfig = field(default_factory=EndpointConfig)
    descriptor_tree: Mapping[str, Sequence[str]] = field(default_factory=dict)
    branch: str = "C"
    depth: int = 2
    session: requests.Session | None = None
    sleep: object = time.sleep
    rejections: list[Rejection] = field(default_factory=list)
    _last: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.session is None:
            self.session = requests.Session()

    def _throttle(self):
        gap = 1.0 / self.config.requests_per_second if self.config.requests_per_second > 0 else 0.0
        wait = self._last + gap - time.monotonic()
        if wait > 0:
            self.sleep(wait)
        self._last = time.monotonic()

    def get(self, endpoint: str, params: dict) -> requests.Response:
        params = dict(params, db=self.config.db)
        key = os.environ.get(self.config.api_key_env)
        if key:
            params["api_key"] = key
        url = f"{self.config.base_url.rstrip('/')}/{endpoint}"
        last_err = None
        for attempt in range(self.config.max_retries + 1):
            self._throttle()
            try:
                resp = self.session.get(url, params=params, timeout=self.config.timeout)
            except requests.ConnectionError as exc:
                last_err = str(exc)
            else:
                if resp.status_code == 200:
                    return resp
                if resp.status_code not in TRANSIENT:
                    raise DataError(f"{endpoint}: HTTP {resp.status_code}")
                last_err = f"HTTP {resp.status_code}"
            if attempt < self.config.max_retries:
                delay = self.config.backoff * 2**attempt
                log.info("%s failed (%s), retrying in %.2fs", endpoint, last_err, delay)
                self.sleep(delay)
        raise DataError(f"{endpoint}: giving up after {self.config.max_retries + 1} attempts ({last_err})")

    def search(self, window: QueryWindow) -> list[str]:
        ids: list[str] = []
        start = 0
        while True:
            resp = self.get("esearch.fcgi", {
                "term": window.term, "mindate": window.mindate, "maxdate": window.maxdate,
                "datetype": window.datetype, "retmode": "json",
                "retstart": start, "retmax": self.config.batch_size,
            })
            try:
                res = resp.json()["esearchresult"]
                batch = list(res.get("idlist", []))
                total = int(res.get("count", len(batch)))
            except (ValueError, KeyError) as exc:
                raise DataError(f"esearch: malformed payload ({exc})") from None
            ids.extend(batch)
            start += len(batch)
            if not batch or start >= total:
                return ids

    def fetch(self, ids: Sequence[str]) -> Iterator[DocumentRecord]:
        for k in range(0, len(ids), self.config.batch_size):
            chunk = ids[k:k + self.config.batch_size]
            resp = self.get("efetch.fcgi", {"id": ",".join(chunk), "retmode": "xml"})
            try:
                root = ET.fromstring(resp.content)
            except ET.ParseError as exc:
                raise DataError(f"efetch: malformed XML ({exc})") from None
            for n, art in enumerate(root.iter("PubmedArticle"), start=k + 1):
                try:
                    yield self.parse_article(art)
                except DataError as exc:
                    self.rejections.append(Rejection(n, str(exc)))

    def parse_article(self, art: ET.Element) -> DocumentRecord:
        pmid = (art.findtext("MedlineCitation/PMID") or "").strip()
        if not pmid:
            raise DataError("article without PMID")
        journal = art.find("MedlineCitation/Article/Journal")
        if journal is None:
            raise DataError(f"{pmid}: no journal")
        jid = (journal.findtext("ISSN") or art.findtext("MedlineCitation/MedlineJournalInfo/NlmUniqueID") or "").strip()
        if not jid:
            raise DataError(f"{pmid}: no journal id")
        year = journal.findtext("JournalIssue/PubDate/Year")
        month = journal.findtext("JournalIssue/PubDate/Month")
        if not year or not month:
            raise DataError(f"{pmid}: incomplete publication date")
        codes = set()
        for desc in art.iter("DescriptorName"):
            for tree in self.descriptor_tree.get(desc.get("UI", ""), ()):
                if tree.startswith(self.branch):
                    codes.add(rollup(tree, self.depth))
        try:
            return DocumentRecord(pmid, int(year), parse_month(month), jid, frozenset(codes))
        except ValueError:
            raise DataError(f"{pmid}: bad year {year!r}") from None


def parse_month(text: str) -> int:
    text = text.strip()
    if text.isdigit():
        return int(text)
    for i, name in enumerate(MONTHS, start=1):
        if name.lower().startswith(text.lower()[:3]):
            return i
    raise DataError(f"bad month {text!r}")


def fetch_remote(window: QueryWindow, client: EutilsClient | None = None) -> Iterator[str]:
    """Yield ``corpus.tsv`` lines for every article matching ``window``.

    Malformed articles are skipped and collected on ``client.rejections``.
    """
    client = client or EutilsClient()
    ids = client.search(window)
    for rec in client.fetch(ids):
        yield rec.to_line() + "\n"
