"""Randomized cross-validation of the three classification routes."""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .classify import classify, random_semi_standard
from .graph import Graph, format_graph, is_cluster_graph
from .metric import format_metric, random_metric, standard_metric
from .nilpotent import build_algebra

log = logging.getLogger(__name__)


def random_cluster_graph(n: int, rng: random.Random) -> Graph:
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    edges = []
    i = 0
    while i < n:
        k = rng.randint(1, min(5, n - i))
        edges.extend(combinations(sorted(verts[i:i + k]), 2))
        i += k
    rng.shuffle(edges)
    return Graph(n, tuple(edges))


def random_graph(n: int, rng: random.Random) -> Graph:
    p = rng.uniform(0.2, 0.8)
    edges = [e for e in combinations(range(1, n + 1), 2) if rng.random() < p]
    rng.shuffle(edges)
    return Graph(n, tuple(edges))


def trial_graph(rng: random.Random, max_vertices: int, only_noncluster: bool = False) -> Graph:
    if only_noncluster:
        if max_vertices < 3:
            raise ValueError("non-cluster graphs need at least 3 vertices")
        while True:
            g = random_graph(rng.randint(3, max_vertices), rng)
            if not is_cluster_graph(g).is_cluster:
                return g
    n = rng.randint(1, max_vertices)
    if rng.random() < 0.5:
        return random_cluster_graph(n, rng)
    return random_graph(n, rng)


@dataclass
class CrossValSummary:
    trials: int = 0
    runs: int = 0
    agreements: int = 0
    noncluster_trials: int = 0
    noncluster_witnessed: int = 0
    noncluster_family_witnessed: int = 0
    dumps: list = field(default_factory=list)

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.runs

    def lines(self) -> list:
        return [
            f"trials: {self.trials}, classify runs: {self.runs}",
            f"agreement: {self.agreements}/{self.runs}",
            f"non-cluster trials with a Gordon witness: "
            f"{self.noncluster_witnessed}/{self.noncluster_trials} "
            f"(from the (C^-1 z_a, e_i) family: {self.noncluster_family_witnessed})",
        ] + [f"disagreement dumped to {p}" for p in self.dumps]


def dump_case(dump_dir: Path, name: str, seed, trial, kind, g, metric, report) -> Path:
    """Write one reproducible disagreement case; the name must be unique per trial."""
    dump_dir = Path(dump_dir)
    dump_dir.mkdir(parents=True, exist_ok=True)
    path = dump_dir / f"{name}.json"
    doc = {
        "seed": seed,
        "trial": trial,
        "metric_kind": kind,
        "graph": format_graph(g),
        "metric": json.loads(format_metric(metric)),
        "verdicts": {
            "cluster": report.cluster.is_cluster,
            "nr": report.nr.ok,
            "go": report.go.tag,
            "semi_standard": report.semi.ok,
        },
        "notes": list(report.notes),
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def cross_validate(
    trials: int,
    max_vertices: int = 7,
    seed: int = 0,
    dump_dir: str | Path | None = None,
    only_noncluster: bool = False,
    graph: Graph | None = None,
    progress=None,
) -> CrossValSummary:
    """Classify (graph, metric) pairs from every generator and count Theorem-consistent verdicts."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dump_path = Path(dump_dir) if dump_dir else Path("crossval-dumps")
    summary = CrossValSummary()
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        g = graph if graph is not None else trial_graph(rng, max_vertices, only_noncluster)
        alg = build_algebra(g)
        cluster = is_cluster_graph(g).is_cluster
        metrics = [("standard", standard_metric(alg))]
        if cluster:
            metrics.append(("semi-standard", random_semi_standard(alg, rng)))
        metrics.append(("random", random_metric(alg, rng)))
        summary.trials += 1
        if not cluster:
            summary.noncluster_trials += 1
        witnessed = family = True
        for kind, metric in metrics:
            report = classify(g, metric, seed=rng.randrange(2**31))
            summary.runs += 1
            if report.agree:
                summary.agreements += 1
            else:
                summary.dumps.append(str(dump_case(dump_path, f"case-s{seed}-t{t}-{kind}", seed, t, kind, g, metric, report)))
                log.warning("disagreement on trial %d (%s metric)", t, kind)
            if not cluster:
                witnessed &= report.go.is_no
                family &= report.go.is_no and (report.go.witness_label or "").startswith("(C^-1 z")
        if not cluster:
            summary.noncluster_witnessed += witnessed
            summary.noncluster_family_witnessed += family
        if progress:
            progress(t + 1, summary)
    return summary
