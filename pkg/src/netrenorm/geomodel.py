"""Spatial-constrained attachment growth models and a deterministic fractal.

A seed sits at the centre of a square arena. Each step draws a uniform
candidate point; the candidate joins only if some existing node lies within
``radius``. The edge rule then decides which of those nodes it links to:

* ``all``: every node within the radius,
* ``max``: the highest-degree node within the radius,
* ``min``: the lowest-degree node within the radius.

Degree ties are broken uniformly at random from the seeded stream.
"""
from dataclasses import dataclass, field
import enum
import logging
import warnings

import numpy as np

from . import kernels
from .errors import DomainError
from .graph import Graph, diameter

log = logging.getLogger(__name__)

_BATCH = 4096


class Rule(str, enum.Enum):
    ALL = "all"
    MAX = "max"
    MIN = "min"


_RULE_CODE = {Rule.ALL: kernels.RULE_ALL, Rule.MAX: kernels.RULE_MAX, Rule.MIN: kernels.RULE_MIN}


@dataclass(frozen=True)
class GeoModelConfig:
    target_nodes: int
    rule: Rule = Rule.MIN
    radius: float = 0.01
    arena_side: float = 1.0
    rng_seed: int = 0
    max_rejections: int = 1_000_000
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        if self.dimension != 2:
            raise DomainError("only planar (dimension=2) growth is supported")
        if self.radius <= 0:
            raise DomainError("radius must be positive")
        if self.arena_side <= 2 * self.radius:
            raise DomainError("arena_side must exceed twice the radius")
        if self.target_nodes < 2:
            raise DomainError("target_nodes must be at least 2")
        if self.max_rejections < 1:
            raise DomainError("max_rejections must be positive")


class GrowthLimitWarning(UserWarning):
    pass


@dataclass
class GrowthEvent:
    step: int
    node: int
    rejected_before: int
    attached_to: tuple


@dataclass
class GeoGraph:
    """Grown graph plus its acceptance log.

    ``growth_log`` records accepted candidates only; ``rejected_before`` is
    the number of rejected draws since the previous acceptance.
    """

    graph: Graph
    config: GeoModelConfig
    growth_log: list = field(default_factory=list)
    steps: int = 0
    rejections: int = 0
    complete: bool = True

    @property
    def n_nodes(self):
        return self.graph.n_nodes

    def prefix(self, n):
        """Graph induced by the first ``n`` accepted nodes (growth order)."""
        return self.graph.subgraph(np.arange(n))


class _Growth:
    def __init__(self, config, kernel=None):
        self.cfg = config
        self.kernel = kernel or kernels.grow_batch
        n = config.target_nodes
        self.gside = int(np.ceil(config.arena_side / config.radius))
        self.xs = np.zeros(n)
        self.ys = np.zeros(n)
        self.deg = np.zeros(n, dtype=np.int64)
        self.cell_head = np.full(self.gside * self.gside, -1, dtype=np.int64)
        self.next_node = np.full(n, -1, dtype=np.int64)
        self.nbr_ptr = np.zeros(n + 1, dtype=np.int64)
        self.nbr = np.zeros(4 * n, dtype=np.int64)
        self.born = np.zeros(n, dtype=np.int64)
        # n_nodes, n_links, consecutive rejections, steps, total rejections
        self.state = np.zeros(5, dtype=np.int64)
        self._place_seed()

    def _place_seed(self):
        c = self.cfg.arena_side / 2
        self.xs[0] = self.ys[0] = c
        cell = min(int(c / self.cfg.radius), self.gside - 1)
        self.cell_head[cell * self.gside + cell] = 0
        self.state[0] = 1

    def run(self):
        cfg = self.cfg
        rng = np.random.default_rng(cfg.rng_seed)
        code = _RULE_CODE[cfg.rule]
        while not self._finished():
            batch = rng.random((_BATCH, 3))
            pos = 0
            while pos < _BATCH and not self._finished():
                pos += self.kernel(batch[pos:], self.xs, self.ys, self.deg, self.cell_head,
                                   self.next_node, self.nbr_ptr, self.nbr, self.born,
                                   self.state, cfg.radius, cfg.arena_side, code,
                                   cfg.target_nodes, cfg.max_rejections)
                if int(self.state[1]) + int(self.state[0]) > len(self.nbr):
                    self.nbr = np.concatenate([self.nbr, np.zeros_like(self.nbr)])
        return self

    def _finished(self):
        return self.state[0] >= self.cfg.target_nodes or self.state[2] >= self.cfg.max_rejections

    def result(self):
        cfg = self.cfg
        n = int(self.state[0])
        ptr = self.nbr_ptr[: n + 1]
        src = np.repeat(np.arange(n), np.diff(ptr))
        dst = self.nbr[: ptr[-1]]
        ids = [str(i) for i in range(n)]
        coords = {ids[i]: (float(self.xs[i]), float(self.ys[i])) for i in range(n)}
        g = Graph.from_index_edges(ids, src, dst, coords)
        born = self.born[:n]
        events = [GrowthEvent(step=int(born[i]), node=i,
                              rejected_before=int(born[i] - born[i - 1] - 1),
                              attached_to=tuple(int(q) for q in dst[ptr[i]:ptr[i + 1]]))
                  for i in range(1, n)]
        return GeoGraph(g, cfg, events, int(self.state[3]), int(self.state[4]),
                        n >= cfg.target_nodes)


def grow(config, kernel=None):
    """Run one growth; returns a :class:`GeoGraph`.

    If ``max_rejections`` consecutive draws are rejected the partial graph is
    returned with ``complete=False`` and a :class:`GrowthLimitWarning`.
    """
    out = _Growth(config, kernel).run().result()
    if not out.complete:
        warnings.warn(
            f"rejection limit reached after {out.n_nodes} of {config.target_nodes} nodes",
            GrowthLimitWarning, stacklevel=2)
    return out


def diameter_growth(config, checkpoints):
    """Diameter of the growing graph at each checkpoint node count (one run)."""
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints:
        raise DomainError("no checkpoints given")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise DomainError("checkpoints must be strictly increasing")
    if checkpoints[0] < 1 or checkpoints[-1] > config.target_nodes:
        raise DomainError("checkpoints must lie in [1, target_nodes]")
    run = grow(config)
    out = []
    for c in checkpoints:
        if c > run.n_nodes:
            break
        out.append((c, diameter(run.prefix(c))))
    return out


def deterministic_fractal(u, v, generations):
    """(u, v)-flower: every edge is repeatedly replaced by two parallel paths.

    Generation 1 is a cycle of u + v nodes. For u > 1 the box dimension is
    ln(u + v) / ln(u); u = 1 flowers are small-world.
    """
    if u < 1 or v < 2 or v < u or generations < 1:
        raise DomainError("need 1 <= u <= v, v >= 2, generations >= 1")
    edges = [(0, 1)]
    n = 2
    for _ in range(generations):
        nxt = []
        for a, b in edges:
            for length in (u, v):
                prev = a
                for _ in range(length - 1):
                    nxt.append((prev, n))
                    prev = n
                    n += 1
                nxt.append((prev, b))
        edges = nxt
    src = [a for a, _ in edges]
    dst = [b for _, b in edges]
    return Graph.from_index_edges([str(i) for i in range(n)], src, dst)
