"""Spatial communities from box covers, and TF-IDF website labels per community."""
from collections import Counter
from dataclasses import dataclass, field
import csv
import json
import logging

import numpy as np

from .errors import DomainError
from .trace import Kind

log = logging.getLogger(__name__)

DEFAULT_COMMUNITY_LB = 4


@dataclass
class CommunityPartition:
    """Community id -> member location ids; id 0 is the largest community."""

    l_B: int
    communities: dict
    degenerate: bool = False

    @property
    def sizes(self):
        return {c: len(m) for c, m in self.communities.items()}

    def community_of(self):
        return {v: c for c, mem in self.communities.items() for v in mem}


def communities_from_cover(c):
    """One community per box, ranked by size (ties: smallest member id first)."""
    boxes = [sorted(m) for m in c.boxes().values()]
    boxes.sort(key=lambda m: (-len(m), m[0]))
    degenerate = c.l_B <= 1
    if degenerate:
        log.warning("l_B=%d gives singleton communities", c.l_B)
    return CommunityPartition(c.l_B, {i: frozenset(m) for i, m in enumerate(boxes)}, degenerate)


@dataclass
class WebCounts:
    """Raw website visit counts per community (every community is a row)."""

    counts: dict
    attributed: int = 0
    unattributed: int = 0

    @property
    def communities(self):
        return sorted(self.counts)


def community_web_counts(trace, partition, window=None):
    """Attribute each web visit to the community of the user's last location.

    A visit counts only if that location record is at most ``window``
    seconds old (``None``: no limit) and the location belongs to the
    partition; everything else is tallied as unattributed.
    """
    if not trace.count(Kind.LOCATION) or not trace.count(Kind.WEB):
        raise DomainError("trace needs both location and web records")
    where = partition.community_of()
    counts = {cid: Counter() for cid in partition.communities}
    attributed = unattributed = 0
    for records in trace.by_user().values():
        last = None
        for r in records:
            if r.kind == Kind.LOCATION:
                last = r
                continue
            cid = None
            if last is not None and (window is None or r.timestamp - last.timestamp <= window):
                cid = where.get(last.symbol)
            if cid is None:
                unattributed += 1
            else:
                counts[cid][r.symbol] += 1
                attributed += 1
    if attributed == 0:
        raise DomainError("no web record could be attributed to a community")
    return WebCounts(counts, attributed, unattributed)


@dataclass
class TfIdfTable:
    communities: list
    websites: list
    tf: np.ndarray
    idf: np.ndarray
    scores: np.ndarray = field(init=False)

    def __post_init__(self):
        self.scores = self.tf * self.idf[None, :]

    def score(self, community, website):
        return float(self.scores[self.communities.index(community), self.websites.index(website)])

    def rows(self):
        """(community, website, tf, idf, score) for every non-zero tf cell."""
        out = []
        for i, c in enumerate(self.communities):
            for j, w in enumerate(self.websites):
                if self.tf[i, j] > 0:
                    out.append((c, w, int(self.tf[i, j]), float(self.idf[j]), float(self.scores[i, j])))
        return out


def tf_idf(counts):
    """Raw-count TF times idf(w) = ln(C / df(w)).

    ``counts`` is a :class:`WebCounts` or a mapping community -> {website: n};
    communities with no visits still count as documents.
    """
    table = counts.counts if isinstance(counts, WebCounts) else counts
    comms = sorted(table)
    if len(comms) < 2:
        raise DomainError("tf_idf needs at least 2 communities")
    sites = sorted({w for c in comms for w, n in table[c].items() if n > 0})
    tf = np.zeros((len(comms), len(sites)))
    col = {w: j for j, w in enumerate(sites)}
    for i, c in enumerate(comms):
        for w, n in table[c].items():
            if n > 0:
                tf[i, col[w]] = n
    df = (tf > 0).sum(axis=0)
    idf = np.log(len(comms) / df)
    return TfIdfTable(comms, sites, tf, idf)


def top_websites(table, community, k=10):
    """Up to ``k`` websites by descending score; zero scores are left out."""
    if community not in table.communities:
        raise KeyError(f"unknown community {community!r}")
    row = table.scores[table.communities.index(community)]
    ranked = sorted(((float(s), w) for w, s in zip(table.websites, row) if s > 0),
                    key=lambda p: (-p[0], p[1]))
    if not ranked:
        log.warning("community %r has no website with a positive score", community)
    return [(w, s) for s, w in ranked[:k]]


def write_partition_csv(partition, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", "community_id"])
        for v, c in sorted(partition.community_of().items(), key=lambda p: (p[1], p[0])):
            w.writerow([v, c])


def write_tfidf_csv(table, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["community", "website", "tf", "idf", "score"])
        for c, site, tf, idf, score in table.rows():
            w.writerow([c, site, tf, repr(idf), repr(score)])


def topk_json(table, k, partition=None):
    doc = {"schema": "netrenorm.topk/1", "k": k, "communities": []}
    for c in table.communities:
        entry = {"community": c,
                 "top": [{"website": w, "score": s} for w, s in top_websites(table, c, k)]}
        if partition is not None:
            entry["size"] = len(partition.communities.get(c, ()))
        doc["communities"].append(entry)
    return json.dumps(doc, indent=2, sort_keys=True)
