"""Synthetic data: reference samplers, fixture networks and a ledgered corpus.

Everything here is seeded and deterministic. The corpus generator writes a
ledger of what it produced so ingestion and views can be checked against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from idrnet.corpus import TIER_I, TIER_NI, UNRANKED, DocumentRecord
from idrnet.network import Network


# --- samplers ------------------------------------------------------------------


def sample_power_law(alpha: float, x_min: float, n: int, rng) -> np.ndarray:
    """Inverse-CDF draws from p(x) ~ x^-alpha on [x_min, inf)."""
    u = rng.random(n)
    return x_min * (1.0 - u) ** (-1.0 / (alpha - 1.0))


def sample_truncated_exponential(lam: float, a: float, b: float, n: int, rng) -> np.ndarray:
    """Inverse-CDF draws from an exponential with rate ``lam`` truncated to [a, b]."""
    u = rng.random(n)
    return a - np.log1p(-u * -np.expm1(-lam * (b - a))) / lam


# --- fixture networks ----------------------------------------------------------


def codes(n: int, prefix: str = "C") -> tuple[str, ...]:
    """``n`` distinct second-level style codes spread over ten categories."""
    return tuple(sorted(f"{prefix}{k % 10 + 1:02d}.{100 + k:03d}" for k in range(n)))


def random_network(n: int, p: float, rng, low: float = 0.05, high: float = 1.0,
                   levels=None) -> Network:
    """Erdos-Renyi support with uniform weights, or weights drawn from ``levels``."""
    w = np.zeros((n, n))
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    if levels is None:
        vals = rng.uniform(low, high, keep.sum())
    else:
        vals = rng.choice(np.asarray(levels, dtype=float), keep.sum())
    w[iu[keep], ju[keep]] = vals
    w += w.T
    return Network(codes(n), w)


def planted_partition(sizes=(13, 13, 12, 12), p_in: float = 0.3, p_out: float = 0.02,
                      seed: int = 0, mode: str = "weights", jitter: float = 0.2,
                      low: float = 0.5, high: float = 1.0):
    """Four-block test network; returns (network, true block per node).

    ``mode="weights"``: every pair is linked, with weight ``p_in`` inside a
    block and ``p_out`` across, each scaled by U(1 - jitter, 1 + jitter).
    ``mode="bernoulli"``: pairs are linked with probability ``p_in``/``p_out``
    and carry U(low, high) weights. Sparse draws of the latter can make the
    planted blocks suboptimal in modularity.
    """
    rng = np.random.default_rng(seed)
    block = np.repeat(np.arange(len(sizes)), sizes)
    n = len(block)
    iu, ju = np.triu_indices(n, 1)
    p = np.where(block[iu] == block[ju], p_in, p_out)
    w = np.zeros((n, n))
    if mode == "weights":
        w[iu, ju] = p * rng.uniform(1 - jitter, 1 + jitter, len(iu))
    elif mode == "bernoulli":
        keep = rng.random(len(iu)) < p
        w[iu[keep], ju[keep]] = rng.uniform(low, high, keep.sum())
    else:
        raise ValueError(f"unknown planted-partition mode {mode!r}")
    w += w.T
    return Network(codes(n), w), block


@dataclass
class CorePeriphery:
    net: Network
    core: tuple[str, ...]
    middle: tuple[str, ...]
    fringe: tuple[str, ...]


def core_periphery(n_core: int = 8, n_middle: int = 30, n_fringe: int = 22, seed: int = 3,
                   bridge: float = 0.3) -> CorePeriphery:
    """Strong clique, a moderately linked middle layer and a weakly attached fringe.

    Every middle node hangs on the core by links of exactly ``bridge``; all
    middle-middle links are weaker, so once the cutoff passes ``bridge`` the
    clique is the whole largest component. Fringe nodes attach to the middle
    by one or two weak links.
    """
    rng = np.random.default_rng(seed)
    n = n_core + n_middle + n_fringe
    core = np.arange(n_core)
    middle = np.arange(n_core, n_core + n_middle)
    fringe = np.arange(n_core + n_middle, n)
    w = np.zeros((n, n))

    def link(a, b, x):
        w[a, b] = w[b, a] = x

    for a in core:
        for b in core[core > a]:
            link(a, b, rng.uniform(0.7, 0.95))
    for m in middle:
        for c in rng.choice(core, 2, replace=False):
            link(m, c, bridge)
    for k, a in enumerate(middle):
        for b in middle[k + 1:]:
            if rng.random() < 0.3:
                link(a, b, rng.uniform(0.05, bridge - 0.01))
    for f in fringe:
        for m in rng.choice(middle, rng.integers(1, 3), replace=False):
            link(f, m, rng.uniform(0.01, 0.1))
    nodes = codes(n)
    # codes() sorts, so map positions through the sorted order of generation
    gen = [f"C{k % 10 + 1:02d}.{100 + k:03d}" for k in range(n)]
    order = np.argsort(gen)
    w = w[np.ix_(order, order)]
    pick = lambda idx: tuple(sorted(gen[i] for i in idx))
    return CorePeriphery(Network(nodes, w), pick(core), pick(middle), pick(fringe))


# --- corpus --------------------------------------------------------------------

CATEGORY_NAMES = {
    "C01": "Infections", "C04": "Neoplasms", "C05": "Musculoskeletal Diseases",
    "C10": "Nervous System Diseases", "C12": "Urogenital Diseases",
    "C14": "Cardiovascular Diseases",
}


@dataclass
class CorpusPlan:
    years: tuple[int, ...] = (1999, 2010, 2022)
    i_docs: dict = field(default_factory=lambda: {1999: 160, 2010: 170, 2022: 180})
    ni_docs: dict = field(default_factory=lambda: {1999: 430, 2010: 480, 2022: 550})
    unranked_docs: int = 10  # per year
    ni_june_1999: int = 137
    terms_per_category: int = 6
    unused_terms: int = 4
    n_journals: int = 20
    cutoff: float = 0.10
    seed: int = 2024

    @property
    def total(self) -> int:
        return sum(self.i_docs.values()) + sum(self.ni_docs.values()) + self.unranked_docs * len(self.years)


def corpus_universe(plan: CorpusPlan) -> dict[str, str]:
    labels = {}
    for cat, name in CATEGORY_NAMES.items():
        for k in range(plan.terms_per_category + (plan.unused_terms if cat == "C14" else 0)):
            labels[f"{cat}.{100 + 50 * k:03d}"] = f"{name} term {k + 1}"
    return dict(sorted(labels.items()))


def _journals(plan: CorpusPlan, year: int):
    """(journal_id, percentile) rows; one journal sits exactly on the cutoff."""
    pct = np.linspace(0.02, 0.98, plan.n_journals)
    pct[1] = plan.cutoff
    return [(f"J{year % 100:02d}{k:02d}", round(float(p), 4)) for k, p in enumerate(pct)]


def generate_corpus(plan: CorpusPlan | None = None):
    """Return (records, ranking rows, labels, ledger).

    Documents draw a home category and 1-4 of its terms, plus an occasional
    cross-category term. The last ``unused_terms`` codes of C14 never occur,
    so they are isolated in every snapshot.
    """
    plan = plan or CorpusPlan()
    rng = np.random.default_rng(plan.seed)
    labels = corpus_universe(plan)
    by_cat: dict[str, list[str]] = {}
    for code in labels:
        by_cat.setdefault(code.split(".")[0], []).append(code)
    unused = by_cat["C14"][plan.terms_per_category:]
    usable = {c: v[:plan.terms_per_category] for c, v in by_cat.items()}
    cats = sorted(usable)
    records, ranking = [], []
    ledger = {"total": 0, "per_year": {}, "per_view": {}, "unused_terms": unused, "seed": plan.seed}
    doc = 0
    for year in plan.years:
        journals = _journals(plan, year)
        ranking += [(year, j, p) for j, p in journals]
        tier_j = {TIER_I: [j for j, p in journals if p <= plan.cutoff],
                  TIER_NI: [j for j, p in journals if p > plan.cutoff],
                  UNRANKED: [f"U{year % 100:02d}00"]}
        months = {}
        for tier, n in ((TIER_I, plan.i_docs[year]), (TIER_NI, plan.ni_docs[year]),
                        (UNRANKED, plan.unranked_docs)):
            if tier == TIER_NI and year == plan.years[0]:
                rest = rng.multinomial(n - plan.ni_june_1999, [1 / 11] * 11)
                m = np.insert(rest, 5, plan.ni_june_1999)
            else:
                m = rng.multinomial(n, [1 / 12] * 12)
            months[tier] = m
            # tiers lean on different categories so their networks differ
            pref = np.ones(len(cats))
            pref[(cats.index("C04") if tier == TIER_I else cats.index("C10"))] = 2.0
            pref /= pref.sum()
            for month, cnt in enumerate(m, start=1):
                for _ in range(cnt):
                    home = cats[rng.choice(len(cats), p=pref)]
                    k = int(rng.integers(1, 5))
                    terms = set(rng.choice(usable[home], size=min(k, len(usable[home])), replace=False))
                    if rng.random() < 0.35:
                        other = cats[rng.integers(len(cats))]
                        terms.add(str(rng.choice(usable[other])))
                    jid = tier_j[tier][rng.integers(len(tier_j[tier]))]
                    doc += 1
                    records.append(DocumentRecord(f"D{doc:06d}", year, month, jid, frozenset(map(str, terms))))
            ledger["per_view"].update({
                f"{tier}/{year}": int(m.sum()),
                **{f"{tier}/{year}/{mo}": int(c) for mo, c in enumerate(m, start=1)},
            })
        ledger["per_year"][str(year)] = int(sum(months[t].sum() for t in months))
    ledger["total"] = len(records)
    return records, ranking, labels, ledger


def write_corpus_fixture(out, plan: CorpusPlan | None = None) -> dict:
    """Write corpus.tsv, ranking.tsv, labels.tsv and ledger.json into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    records, ranking, labels, ledger = generate_corpus(plan)
    with open(out / "corpus.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# doc_id\tyear\tmonth\tjournal_id\tconcepts\n")
        for r in records:
            fh.write(r.to_line() + "\n")
    with open(out / "ranking.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# year\tjournal_id\tpercentile\n")
        for y, j, p in ranking:
            fh.write(f"{y}\t{j}\t{p}\n")
    with open(out / "labels.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for code, label in labels.items():
            fh.write(f"{code}\t{label}\n")
    (out / "ledger.json").write_text(json.dumps(ledger, indent=2, sort_keys=True) + "\n")
    return ledger
