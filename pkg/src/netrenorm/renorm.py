"""Renormalization: collapse boxes into supernodes, iterate, track k_nn correlation."""
from dataclasses import dataclass, field
import hashlib
import json

import numpy as np

from .boxcover import Coverer, cover, validate_cover
from .errors import DomainError, InvalidCoverError
from .graph import Graph, diameter, knn_profile


def supernode_id(members):
    """Deterministic id for a box: hash of its sorted member ids."""
    h = hashlib.sha1("\x1f".join(sorted(members)).encode("utf-8")).hexdigest()
    return "s" + h[:16]


def collapse(g, c, check=True):
    """Replace each box by a supernode; boxes touching by an edge become adjacent."""
    if check:
        report = validate_cover(g, c)
        if not report:
            raise InvalidCoverError(report)
    boxes = c.boxes()
    box_ids = sorted(boxes)
    ids = [supernode_id(boxes[b]) for b in box_ids]
    pos = {b: i for i, b in enumerate(box_ids)}
    box_of = np.array([pos[c.assignment[v]] for v in g.ids], dtype=np.int64)
    src, dst = g.edge_index_arrays()
    return Graph.from_index_edges(ids, box_of[src], box_of[dst])


@dataclass
class Stage:
    graph: Graph
    n_nodes: int
    n_edges: int
    pearson: float | None


@dataclass
class RenormFlow:
    l_B: int
    stages: list = field(default_factory=list)

    @property
    def steps(self):
        return len(self.stages) - 1

    def node_counts(self):
        return [s.n_nodes for s in self.stages]

    def summary(self):
        return [{"stage": i, "nodes": s.n_nodes, "edges": s.n_edges, "pearson": s.pearson}
                for i, s in enumerate(self.stages)]


def _stage(g):
    try:
        r = knn_profile(g).pearson
    except DomainError:
        r = None
    return Stage(g, g.n_nodes, g.n_edges, r)


def renormalization_flow(g, l_B, rng_seed=0, restarts=20, check=False):
    """Cover and collapse repeatedly until one node remains.

    Stage ``i`` is covered with seed ``(rng_seed + i)``. Requires a
    connected graph; see :func:`component_flows` otherwise.
    """
    if l_B < 2:
        raise DomainError("renormalization needs l_B >= 2")
    if not g.is_connected():
        raise DomainError("graph is disconnected; use component_flows")
    flow = RenormFlow(l_B, [_stage(g)])
    cur = g
    while cur.n_nodes > 1:
        c = cover(cur, l_B, rng_seed + flow.steps, restarts)
        nxt = collapse(cur, c, check=check)
        if nxt.n_nodes >= cur.n_nodes:
            raise RuntimeError("renormalization stalled")  # unreachable for connected input
        flow.stages.append(_stage(nxt))
        cur = nxt
    return flow


def component_flows(g, l_B, rng_seed=0, restarts=20, check=False):
    """One flow per connected component, largest component first."""
    return [renormalization_flow(g.subgraph(comp), l_B, rng_seed, restarts, check)
            for comp in g.components()]


@dataclass(frozen=True)
class CorrelationPoint:
    l_B: int
    pearson: float | None
    n_nodes: int
    n_edges: int
    flag: str = ""


def correlation_vs_lB(g, l_B_range, rng_seed=0, restarts=20, diam=None):
    """Cor(k_nn, k) of the graph collapsed once at each box length.

    Every l_B starts from the original graph. Entries whose collapsed graph
    has fewer than 3 distinct (k, k_nn) points or a constant coordinate are
    returned with ``pearson=None`` and a flag.
    """
    l_B_range = list(l_B_range)
    d = diameter(g) if diam is None else diam
    for lb in l_B_range:
        if lb < 2 or lb > max(d, 2):
            raise DomainError(f"l_B={lb} outside [2, diameter={d}]")
    engine = Coverer(g, rng_seed)
    out = []
    for lb in l_B_range:
        h = collapse(g, engine.cover(lb, restarts), check=False)
        try:
            prof = knn_profile(h)
        except DomainError:
            out.append(CorrelationPoint(lb, None, h.n_nodes, h.n_edges, "too few linked nodes"))
            continue
        if prof.distinct_points() < 3:
            out.append(CorrelationPoint(lb, None, h.n_nodes, h.n_edges,
                                        "fewer than 3 distinct (k, k_nn) points"))
        elif prof.pearson is None:
            out.append(CorrelationPoint(lb, None, h.n_nodes, h.n_edges, "zero variance"))
        else:
            out.append(CorrelationPoint(lb, prof.pearson, h.n_nodes, h.n_edges))
    return out


def flow_json(flow):
    return json.dumps({"schema": "netrenorm.flow/1", "l_B": flow.l_B, "steps": flow.steps,
                       "stages": flow.summary()}, indent=2, sort_keys=True)
