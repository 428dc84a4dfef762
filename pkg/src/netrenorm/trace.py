"""Event traces: parsing, mobility/attention networks, per-user statistics.

Trace CSV header: ``user_id,timestamp,kind,symbol,x,y`` with kind in
{location, web}; x and y may be empty.
"""
from collections import Counter
from dataclasses import dataclass, field, fields, asdict
import csv
import enum
import io
import logging
import math

import numpy as np

from .errors import DomainError, FormatError
from .graph import build_graph, pearson

log = logging.getLogger(__name__)

HEADER = ["user_id", "timestamp", "kind", "symbol", "x", "y"]


class Kind(str, enum.Enum):
    LOCATION = "location"
    WEB = "web"


@dataclass(frozen=True)
class Record:
    user_id: str
    timestamp: float
    kind: Kind
    symbol: str
    coord: tuple | None = None


@dataclass
class EventTrace:
    """Records sorted by (user, timestamp); equal timestamps keep input order."""

    records: list = field(default_factory=list)
    malformed: int = 0
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def by_user(self):
        out = {}
        for r in self.records:
            out.setdefault(r.user_id, []).append(r)
        return out

    def count(self, kind):
        return sum(1 for r in self.records if r.kind == kind)


def _parse_row(row):
    if len(row) != len(HEADER):
        raise ValueError(f"expected {len(HEADER)} fields, got {len(row)}")
    user, ts, kind, symbol, x, y = (c.strip() for c in row)
    if not user:
        raise ValueError("empty user_id")
    t = float(ts)
    if not math.isfinite(t):
        raise ValueError(f"non-finite timestamp {ts!r}")
    kind = Kind(kind.lower())
    if not symbol:
        raise ValueError("empty symbol")
    coord = None
    if x or y:
        coord = (float(x), float(y))
    return Record(user, t, kind, symbol, coord)


def parse_trace(stream, max_bad_fraction=0.5):
    """Parse trace CSV text from a file-like object or string.

    Bad rows are skipped and reported; if more than ``max_bad_fraction`` of
    the data rows are bad the whole parse fails.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return EventTrace([], 0, ["empty trace"])
    if [h.strip() for h in header] != HEADER:
        raise FormatError(f"header must be {','.join(HEADER)!r}, got {','.join(header)!r}",
                          line=1)
    good, problems = [], []
    total = 0
    for lineno, row in enumerate(reader, 2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        total += 1
        try:
            good.append((len(good), _parse_row(row)))
        except ValueError as exc:
            problems.append(f"line {lineno}: {exc}")
    if total and len(problems) > max_bad_fraction * total:
        raise FormatError(f"{len(problems)} of {total} rows malformed; first: {problems[0]}")
    for msg in problems:
        log.warning("skipping malformed row: %s", msg)
    good.sort(key=lambda p: (p[1].user_id, p[1].timestamp, p[0]))
    return EventTrace([r for _, r in good], len(problems), problems)


def read_trace(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_trace(fh)


def _transitions(records, kind, max_gap):
    prev = None
    for r in records:
        if r.kind != kind:
            continue
        if prev is not None and r.symbol != prev.symbol and r.timestamp - prev.timestamp <= max_gap:
            yield prev.symbol, r.symbol
        prev = r


def _build_network(trace, kind, max_gap):
    symbols = {}
    edges = []
    for records in trace.by_user().values():
        for r in records:
            if r.kind == kind:
                symbols.setdefault(r.symbol, None)
                if r.coord is not None and symbols[r.symbol] is None:
                    symbols[r.symbol] = r.coord
        edges.extend(_transitions(records, kind, max_gap))
    if not symbols:
        raise DomainError(f"trace has no {kind.value} records")
    meta = {s: (xy, None) for s, xy in symbols.items() if xy is not None}
    return build_graph(edges, meta, nodes=sorted(symbols))


def build_mobility_network(trace, max_gap=math.inf):
    """Locations as nodes; an edge for each consecutive distinct pair per user.

    ``max_gap`` (seconds) drops transitions across longer time gaps.
    """
    return _build_network(trace, Kind.LOCATION, max_gap)


def build_attention_network(trace, max_gap=math.inf):
    """Websites as nodes; an edge for each consecutive distinct switch per user."""
    return _build_network(trace, Kind.WEB, max_gap)


@dataclass(frozen=True)
class UserStats:
    total_records: int
    unique_stations: int
    sequential_stations: int
    total_distance: float
    unique_websites: int
    sequential_websites: int


VARIABLES = tuple(f.name for f in fields(UserStats))


def user_statistics(trace):
    """Per-user counts; distance is Euclidean over consecutive distinct locations."""
    if not trace.records:
        raise DomainError("empty trace")
    coord_of = {}
    for r in trace.records:
        if r.kind == Kind.LOCATION and r.coord is not None:
            coord_of.setdefault(r.symbol, r.coord)
    out = {}
    for user, records in trace.by_user().items():
        locs = [r for r in records if r.kind == Kind.LOCATION]
        webs = [r for r in records if r.kind == Kind.WEB]
        dist = 0.0
        seq_loc = 0
        for a, b in zip(locs, locs[1:]):
            if a.symbol == b.symbol:
                continue
            seq_loc += 1
            pa = a.coord or coord_of.get(a.symbol)
            pb = b.coord or coord_of.get(b.symbol)
            if pa is not None and pb is not None:
                dist += math.hypot(pb[0] - pa[0], pb[1] - pa[1])
        seq_web = sum(1 for a, b in zip(webs, webs[1:]) if a.symbol != b.symbol)
        out[user] = UserStats(len(records), len({r.symbol for r in locs}), seq_loc, dist,
                              len({r.symbol for r in webs}), seq_web)
    return out


def write_stats_csv(stats, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["user_id", *VARIABLES])
        for user in sorted(stats):
            s = stats[user]
            w.writerow([user, *(repr(v) if isinstance(v, float) else v for v in asdict(s).values())])


@dataclass(frozen=True)
class CorrelationCell:
    x: str
    y: str
    log_pearson: float | None
    raw_pearson: float | None
    n_used: int
    n_excluded: int
    flag: str = ""


def _columns(stats):
    if isinstance(next(iter(stats.values()), None), UserStats):
        users = sorted(stats)
        return {v: np.array([getattr(stats[u], v) for u in users], dtype=float) for v in VARIABLES}
    return {k: np.asarray(v, dtype=float) for k, v in stats.items()}


def cross_correlations(stats, pairs):
    """Pearson correlation per variable pair on log values (non-positive excluded).

    ``stats`` is either user -> :class:`UserStats` or a mapping of column
    name -> values. Raw-value Pearson is reported alongside.
    """
    cols = _columns(stats)
    n_users = len(next(iter(cols.values()))) if cols else 0
    if n_users < 3:
        raise DomainError(f"need >= 3 users, got {n_users}")
    out = []
    for x, y in pairs:
        if x not in cols or y not in cols:
            raise KeyError(f"unknown variable in pair ({x!r}, {y!r})")
        a, b = cols[x], cols[y]
        raw = pearson(a, b)
        keep = (a > 0) & (b > 0)
        used = int(keep.sum())
        excluded = len(a) - used
        if used < 3:
            out.append(CorrelationCell(x, y, None, raw, used, excluded, "insufficient"))
            continue
        r = pearson(np.log(a[keep]), np.log(b[keep]))
        out.append(CorrelationCell(x, y, r, raw, used, excluded, "" if r is not None else "constant"))
    return out


@dataclass(frozen=True)
class TailFit:
    variable: str
    gamma: float | None
    xmin: float | None
    ks_statistic: float | None
    n_tail: int
    flag: str = ""


def fit_user_tails(stats, variables=VARIABLES):
    """Discrete power-law tail fit per variable (zeros dropped, distances rounded)."""
    from .scaling import fit_degree_exponent

    cols = _columns(stats)
    out = []
    for var in variables:
        vals = cols[var]
        vals = np.round(vals[vals > 0])
        vals = vals[vals >= 1]
        if len(vals) and np.ptp(vals) == 0:
            out.append(TailFit(var, None, None, None, len(vals), "degenerate"))
            continue
        try:
            fit = fit_degree_exponent(vals)
        except DomainError as exc:
            out.append(TailFit(var, None, None, None, len(vals), f"degenerate: {exc}"))
            continue
        out.append(TailFit(var, fit.gamma, fit.xmin, fit.ks_statistic, fit.n_tail))
    return out


def record_counts(trace):
    c = Counter(r.kind for r in trace.records)
    return {k.value: c.get(k, 0) for k in Kind}
