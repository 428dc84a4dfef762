"""Command-line pipelines.

Every command writes its data files plus ``manifest-<command>.json`` into
the output directory. Exit codes: 0 ok, 2 I/O or usage, 3 format, 4 domain.
"""
import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time

from . import __version__, kernels
from .boxcover import Coverer, read_series_csv, write_cover_csv, write_series_csv
from .community import (DEFAULT_COMMUNITY_LB, communities_from_cover, community_web_counts,
                        tf_idf, topk_json, write_partition_csv, write_tfidf_csv)
from .errors import DomainError, FormatError
from .geomodel import GeoModelConfig, Rule, grow
from .graph import diameter, knn_profile, read_graph, write_edge_list, write_node_meta
from .renorm import collapse, component_flows, correlation_vs_lB, flow_json
from .scaling import classify_topology, fit_degree_exponent, hub_attraction
from .trace import (VARIABLES, build_attention_network, build_mobility_network,
                    cross_correlations, fit_user_tails, read_trace, user_statistics,
                    write_stats_csv)

log = logging.getLogger("netrenorm")

RANDOMIZED = {"boxcount", "renorm", "generate", "communities"}
DEFAULTS = {"seed": None, "threads": 1, "strict": False, "output_dir": "."}


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _dump_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _clean(x):
    """JSON-safe floats (NaN/inf -> None)."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


class Run:
    def __init__(self, args):
        self.args = args
        self.out = args.output_dir
        os.makedirs(self.out, exist_ok=True)
        self.outputs = []
        self.inputs = []

    def path(self, name):
        self.outputs.append(name)
        return os.path.join(self.out, name)

    def read(self, path):
        self.inputs.append(path)
        return path

    def manifest(self, started):
        a = self.args
        config = {k: v for k, v in sorted(vars(a).items()) if k not in ("func",)}
        doc = {
            "schema": "netrenorm.manifest/1",
            "command": a.command,
            "version": __version__,
            "backend": kernels.BACKEND,
            "rng_seed": a.seed,
            "config": config,
            "inputs": {p: _sha256(p) for p in self.inputs},
            "outputs": {n: _sha256(os.path.join(self.out, n)) for n in self.outputs},
            "wall_time_s": round(time.perf_counter() - started, 6),
        }
        _dump_json(doc, os.path.join(self.out, f"manifest-{a.command}.json"))
        return doc


# -- commands -----------------------------------------------------------------

def cmd_ingest(run, a):
    trace = read_trace(run.read(a.trace))
    if not trace.records:
        raise FormatError("trace contains no records")
    gap = math.inf if a.max_gap is None else a.max_gap
    summary = {"schema": "netrenorm.ingest/1", "records": len(trace), "malformed": trace.malformed}
    for name, build in (("mobility", build_mobility_network), ("attention", build_attention_network)):
        try:
            g = build(trace, gap)
        except DomainError as exc:
            log.warning("%s network skipped: %s", name, exc)
            summary[name] = None
            continue
        write_edge_list(g, run.path(f"{name}.edges"))
        if g.coords:
            write_node_meta(g, run.path(f"{name}.nodes"))
        summary[name] = {"nodes": g.n_nodes, "edges": g.n_edges}
    write_stats_csv(user_statistics(trace), run.path("user_stats.csv"))
    _dump_json(summary, run.path("ingest.json"))


def cmd_stats(run, a):
    trace = read_trace(run.read(a.trace))
    stats = user_statistics(trace)
    write_stats_csv(stats, run.path("user_stats.csv"))
    if a.pairs:
        pairs = [tuple(p.split(":")) for p in a.pairs.split(",")]
    else:
        pairs = [(x, y) for i, x in enumerate(VARIABLES) for y in VARIABLES[i + 1:]]
    cells = cross_correlations(stats, pairs)
    _dump_json({"schema": "netrenorm.correlations/1",
                "cells": [_clean(c.__dict__) for c in cells]}, run.path("correlations.json"))
    tails = fit_user_tails(stats)
    _dump_json({"schema": "netrenorm.tails/1",
                "fits": [_clean(t.__dict__) for t in tails]}, run.path("tails.json"))


def _load_graph(run, a):
    meta = getattr(a, "nodes", None)
    return read_graph(run.read(a.edges), run.read(meta) if meta else None)


def cmd_boxcount(run, a):
    g = _load_graph(run, a)
    lb_max = a.lb_max if a.lb_max else diameter(g) + 1
    series = Coverer(g, a.seed, a.threads).box_counts(max(lb_max, 2), a.restarts)
    write_series_csv(series, run.path("boxcount.csv"))


def cmd_classify(run, a):
    series = read_series_csv(run.read(a.boxcount))
    sc = classify_topology(series)
    _dump_json({"schema": "netrenorm.classify/1", **_clean(sc.to_dict())},
               run.path("classification.json"))


def cmd_renorm(run, a):
    g = _load_graph(run, a)
    if a.mode == "once":
        c = Coverer(g, a.seed, a.threads).cover(a.lb, a.restarts)
        h = collapse(g, c)
        write_cover_csv(c, run.path("cover.csv"))
        write_edge_list(h, run.path("collapsed.edges"))
        prof = None
        try:
            prof = knn_profile(h).pearson
        except DomainError:
            pass
        _dump_json({"schema": "netrenorm.renorm_once/1", "l_B": a.lb, "nodes": h.n_nodes,
                    "edges": h.n_edges, "n_boxes": c.n_boxes, "pearson": prof},
                   run.path("renorm_once.json"))
    elif a.mode == "flow":
        flows = component_flows(g, a.lb, a.seed, a.restarts)
        doc = {"schema": "netrenorm.flow/1", "l_B": a.lb, "components": []}
        for ci, flow in enumerate(flows):
            doc["components"].append({"component": ci, "steps": flow.steps,
                                      "stages": _clean(flow.summary())})
            if a.dump_stages:
                for si, st in enumerate(flow.stages):
                    write_edge_list(st.graph, run.path(f"flow_c{ci}_stage{si:02d}.edges"))
        _dump_json(doc, run.path("flow.json"))
    else:
        d = diameter(g)
        hi = min(a.lb, d)
        points = correlation_vs_lB(g, range(2, hi + 1), a.seed, a.restarts, diam=d)
        with open(run.path("correlation.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["l_B", "pearson", "nodes", "edges", "flag"])
            for p in points:
                w.writerow([p.l_B, "" if p.pearson is None else repr(p.pearson),
                            p.n_nodes, p.n_edges, p.flag])


def cmd_generate(run, a):
    checkpoints = [int(x) for x in a.checkpoints.split(",")] if a.checkpoints else []
    cfg = GeoModelConfig(a.n, Rule(a.rule), radius=a.radius, arena_side=a.arena,
                         rng_seed=a.seed, max_rejections=a.max_rejections)
    gg = grow(cfg)
    g = gg.graph
    write_edge_list(g, run.path("model.edges"))
    write_node_meta(g, run.path("model.nodes"))
    with open(run.path("growth_log.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "node", "rejected_before", "attached_to"])
        for ev in gg.growth_log:
            w.writerow([ev.step, ev.node, ev.rejected_before, " ".join(map(str, ev.attached_to))])
    if checkpoints:
        with open(run.path("diameter.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["N", "diameter"])
            for c in checkpoints:
                if c <= g.n_nodes:
                    w.writerow([c, diameter(gg.prefix(c))])
    _dump_json({"schema": "netrenorm.generate/1", "rule": cfg.rule.value, "nodes": g.n_nodes,
                "edges": g.n_edges, "steps": gg.steps, "rejections": gg.rejections,
                "complete": gg.complete, "radius": cfg.radius, "arena": cfg.arena_side},
               run.path("generate.json"))


def cmd_communities(run, a):
    g = _load_graph(run, a)
    trace = read_trace(run.read(a.trace))
    c = Coverer(g, a.seed, a.threads).cover(a.lb, a.restarts)
    part = communities_from_cover(c)
    counts = community_web_counts(trace, part, a.window)
    table = tf_idf(counts)
    write_partition_csv(part, run.path("partition.csv"))
    write_tfidf_csv(table, run.path("tfidf.csv"))
    doc = json.loads(topk_json(table, a.topk, part))
    doc["attributed"] = counts.attributed
    doc["unattributed"] = counts.unattributed
    _dump_json(doc, run.path("topk.json"))


def cmd_hubcorr(run, a):
    g = _load_graph(run, a)
    deg = g.degrees()
    fit = None
    gamma = a.gamma
    if gamma is None:
        fit = fit_degree_exponent(deg[deg > 0])
        gamma = fit.gamma
    hc = hub_attraction(g, a.b, gamma)
    doc = {"schema": "netrenorm.hubcorr/1", **_clean(hc.to_dict()),
           "degree_fit": None if fit is None else _clean(fit.to_dict())}
    _dump_json(doc, run.path("hubcorr.json"))
    with open(run.path("eb_curve.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "E_b"])
        for k, e in hc.curve:
            w.writerow([k, repr(e)])


# -- parser -------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=s, help="RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=s, help="worker cap for cover restarts")
    p.add_argument("--strict", action="store_true", default=s,
                   help="require an explicit --seed for randomized commands")
    p.add_argument("--output-dir", default=s, help="directory for outputs (default .)")
    p.add_argument("-v", "--verbose", action="store_true", default=s)
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="netrenorm", parents=[common],
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, "trace CSV -> mobility/attention edge lists + user stats")
    p.add_argument("trace")
    p.add_argument("--max-gap", type=float, default=None,
                   help="seconds; longer gaps break transitions")

    p = add("stats", cmd_stats, "per-user variables, correlations and tail fits")
    p.add_argument("trace")
    p.add_argument("--pairs", default=None, help="comma list of var:var (default all pairs)")

    p = add("boxcount", cmd_boxcount, "N(l_B) series")
    p.add_argument("edges")
    p.add_argument("--nodes", default=None, help="node metadata file")
    p.add_argument("--lb-max", type=int, default=None, help="default: diameter + 1")
    p.add_argument("--restarts", type=int, default=20)

    p = add("classify", cmd_classify, "fractal vs small-world verdict from a boxcount CSV")
    p.add_argument("boxcount")

    p = add("renorm", cmd_renorm, "collapse once, full flow, or correlation sweep")
    p.add_argument("edges")
    p.add_argument("--nodes", default=None)
    p.add_argument("--lb", type=int, default=2)
    p.add_argument("--mode", choices=["once", "flow", "sweep"], default="flow")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--dump-stages", action="store_true")

    p = add("generate", cmd_generate, "spatial-constrained attachment growth")
    p.add_argument("--rule", choices=[r.value for r in Rule], default="min")
    p.add_argument("--n", type=int, default=3000)
    p.add_argument("--radius", type=float, default=0.01)
    p.add_argument("--arena", type=float, default=1.0)
    p.add_argument("--checkpoints", default=None, help="comma list of node counts")
    p.add_argument("--max-rejections", type=int, default=1_000_000)

    p = add("communities", cmd_communities, "box communities + TF-IDF website ranking")
    p.add_argument("edges")
    p.add_argument("trace")
    p.add_argument("--nodes", default=None)
    p.add_argument("--lb", type=int, default=DEFAULT_COMMUNITY_LB)
    p.add_argument("--topk", type=int, default=10)
    p.add_argument("--window", type=float, default=None, help="attribution window, seconds")
    p.add_argument("--restarts", type=int, default=20)

    p = add("hubcorr", cmd_hubcorr, "E_b(k) slope, epsilon and phase region")
    p.add_argument("edges")
    p.add_argument("--nodes", default=None)
    p.add_argument("--b", type=float, default=3.0)
    p.add_argument("--gamma", type=float, default=None, help="skip the degree-exponent fit")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in {**DEFAULTS, "verbose": False}.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed is None:
        if args.strict and args.command in RANDOMIZED:
            parser.error(f"--strict: {args.command} needs an explicit --seed")
        args.seed = 0
    started = time.perf_counter()
    try:
        run = Run(args)
        args.func(run, args)
        run.manifest(started)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, KeyError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
