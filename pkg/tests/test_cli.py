import json

import numpy as np
import pytest

from netrenorm.cli import main
from netrenorm.trace import HEADER


def make_trace(path, users=40, stations=30, sites=25, seed=0):
    rng = np.random.default_rng(seed)
    xy = rng.random((stations, 2))
    rows = [",".join(HEADER)]
    for u in range(users):
        s = int(rng.integers(stations))
        t = 0
        for _ in range(int(rng.integers(10, 40))):
            t += int(rng.integers(1, 300))
            if rng.random() < 0.5:
                s = (s + int(rng.integers(-2, 3))) % stations
                rows.append(f"u{u},{t},location,s{s},{float(xy[s, 0])!r},{float(xy[s, 1])!r}")
            else:
                w = min(int(rng.zipf(1.8)), sites) if rng.random() < 0.6 else (s % 7) + 100
                rows.append(f"u{u},{t},web,w{w},,")
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    make_trace(d / "trace.csv")
    assert main(["--output-dir", str(d / "base"), "--seed", "1", "ingest", str(d / "trace.csv")]) == 0
    assert main(["generate", "--n", "400", "--rule", "max", "--radius", "0.04",
                 "--seed", "2", "--output-dir", str(d / "base")]) == 0
    return d


def commands(d):
    base = d / "base"
    mob = str(base / "mobility.edges")
    trace = str(d / "trace.csv")
    return {
        "ingest": ["ingest", trace],
        "stats": ["stats", trace],
        "boxcount": ["boxcount", mob, "--restarts", "5"],
        "renorm": ["renorm", mob, "--mode", "flow", "--lb", "2", "--dump-stages"],
        "renorm-once": ["renorm", mob, "--mode", "once", "--lb", "3"],
        "renorm-sweep": ["renorm", mob, "--mode", "sweep", "--lb", "5", "--restarts", "5"],
        "generate": ["generate", "--n", "300", "--rule", "min", "--radius", "0.05",
                     "--checkpoints", "50,150,300"],
        "communities": ["communities", mob, trace, "--lb", "3", "--topk", "3"],
        "hubcorr": ["hubcorr", str(base / "model.edges"), "--gamma", "2.5"],
    }


@pytest.mark.parametrize("name", ["ingest", "stats", "boxcount", "renorm", "renorm-once",
                                  "renorm-sweep", "generate", "communities", "hubcorr"])
def test_rerun_byte_identical(workdir, name):
    argv = commands(workdir)[name]
    manifests = []
    for run in ("a", "b"):
        out = workdir / f"{name}-{run}"
        assert main(argv + ["--seed", "5", "--output-dir", str(out)]) == 0
        (mf,) = out.glob("manifest-*.json")
        manifests.append(json.loads(mf.read_text()))
    a, b = manifests
    assert a["outputs"] and a["outputs"] == b["outputs"]
    assert a["inputs"] == b["inputs"]
    assert a["schema"] == "netrenorm.manifest/1" and a["rng_seed"] == 5


def test_classify(workdir):
    out = workdir / "cls"
    assert main(["boxcount", str(workdir / "base" / "model.edges"), "--output-dir", str(out)]) == 0
    assert main(["classify", str(out / "boxcount.csv"), "--output-dir", str(out)]) == 0
    doc = json.loads((out / "classification.json").read_text())
    assert doc["schema"] == "netrenorm.classify/1"
    assert doc["verdict"] in ("fractal", "small_world", "ambiguous")


def test_ingest_outputs_match_library(workdir):
    from netrenorm.graph import read_graph
    from netrenorm.trace import build_mobility_network, read_trace
    g = read_graph(workdir / "base" / "mobility.edges")
    ref = build_mobility_network(read_trace(workdir / "trace.csv"))
    assert sorted(map(sorted, g.edges())) == sorted(map(sorted, ref.edges()))


def test_exit_codes(tmp_path, workdir):
    out = str(tmp_path / "o")
    (tmp_path / "empty.csv").write_text("")
    assert main(["ingest", str(tmp_path / "empty.csv"), "--output-dir", out]) == 3
    assert main(["ingest", str(tmp_path / "missing.csv"), "--output-dir", out]) == 2
    (tmp_path / "bad.edges").write_text("a b c\n")
    assert main(["boxcount", str(tmp_path / "bad.edges"), "--output-dir", out]) == 3
    (tmp_path / "tiny.edges").write_text("a b\n")
    assert main(["hubcorr", str(tmp_path / "tiny.edges"), "--gamma", "2.5",
                 "--output-dir", out]) == 4
    assert main(["renorm", str(workdir / "base" / "mobility.edges"), "--lb", "1",
                 "--output-dir", out]) == 4


def test_strict_requires_seed(tmp_path, workdir):
    mob = str(workdir / "base" / "mobility.edges")
    with pytest.raises(SystemExit) as exc:
        main(["--strict", "boxcount", mob, "--output-dir", str(tmp_path)])
    assert exc.value.code == 2
    assert main(["--strict", "--seed", "3", "boxcount", mob, "--restarts", "2",
                 "--output-dir", str(tmp_path)]) == 0


def test_generate_files(workdir):
    out = workdir / "gen"
    assert main(["generate", "--n", "200", "--rule", "all", "--radius", "0.06",
                 "--checkpoints", "10,100,200", "--output-dir", str(out)]) == 0
    rows = (out / "diameter.csv").read_text().splitlines()
    assert rows[0] == "N,diameter" and len(rows) == 4
    assert (out / "growth_log.csv").read_text().splitlines()[0] == "step,node,rejected_before,attached_to"
    assert len((out / "model.nodes").read_text().splitlines()) == 200
