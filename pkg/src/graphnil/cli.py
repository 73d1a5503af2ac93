"""graphnil command-line interface.

Subcommands:
    analyze FILE                 combinatorics, derivation dimensions, ideals
    check FILE [metric choice]   full three-route classification
    crossval                     randomized agreement sweep
    example                      the twelve-vertex cluster graph worked in full

Exit codes: 0 consistent, 2 input error, 3 the routes disagree.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from .classify import (
    NotClusterGraph,
    classify,
    construct_semi_standard,
    ideal_decomposition,
    is_semi_standard,
    phi_space,
)
from .crossval import cross_validate, dump_case
from .derivations import derivation_space, skew_derivation_space
from .gonr import nr_test
from .graph import (
    DichotomyViolation,
    Graph,
    GraphFormatError,
    equivalence_classes,
    format_graph,
    is_cluster_graph,
    neighborhoods,
    parse_graph,
    preceq_table,
)
from .linalg import Matrix, format_rational, parse_rational
from .metric import MetricError, adapt, check_metric, parse_metric, standard_metric
from .nilpotent import build_algebra
from .report import Report, from_classification, versions

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISAGREE = 3

# K4 + K3 + K2 + K2 + K1, edges in the order that numbers z1..z11
EXAMPLE_EDGES = (
    (1, 2), (2, 3), (1, 3), (1, 4), (2, 4), (3, 4),
    (5, 6), (6, 7), (5, 7),
    (8, 9),
    (10, 11),
)
EXAMPLE_COEFFICIENTS = (Fraction(2), Fraction(3), Fraction(5))
EXAMPLE_CENTER = Fraction(7)

log = logging.getLogger("graphnil")


class InputError(Exception):
    pass


def example_graph() -> Graph:
    return Graph(12, EXAMPLE_EDGES)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def load_graph(path: str) -> Graph:
    try:
        return parse_graph(_read(path))
    except GraphFormatError as exc:
        line = f"{path}:{exc.line}: " if getattr(exc, "line", None) else f"{path}: "
        raise InputError(line + str(exc.args[0])) from exc


def _vset(s) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _combo(vec, prefix="J") -> str:
    """Render a coordinate vector as a signed sum like J1+J6 or 2J5-J3."""
    parts = []
    for k, c in enumerate(vec, start=1):
        if not c:
            continue
        mag = "" if abs(c) == 1 else format_rational(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign}{mag}{prefix}{k}")
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


def bracket_lines(g: Graph) -> list:
    alg = build_algebra(g)
    return [f"[e{i},e{j}] = z{a}" for i, j, a in alg.bracket_table()]


def ideal_lines(g: Graph) -> list:
    dec = ideal_decomposition(build_algebra(g))
    return [f"{i.label}: span(" + ", ".join(_combo(v) for v in i.z_basis) + ")" for i in dec.ideals]


def parse_coefficients(text: str) -> list:
    try:
        vals = [parse_rational(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad coefficient list {text!r}: {exc}") from exc
    if not vals:
        raise InputError("empty coefficient list")
    if any(v <= 0 for v in vals):
        raise InputError("semi-standard coefficients must be positive")
    return vals


def semi_standard_from_values(g: Graph, values: list):
    """Split values into ideal coefficients and a center (one scalar or d0 diagonal entries)."""
    alg = build_algebra(g)
    try:
        dec = ideal_decomposition(alg)
    except NotClusterGraph as exc:
        raise InputError(f"--semi-standard needs a cluster graph; {exc}") from exc
    k, d0 = len(dec.simple), dec.center_dim
    coeffs, rest = values[:k], values[k:]
    if len(values) < k:
        raise InputError(f"expected {k} ideal coefficients, got {len(values)}")
    if not rest:
        center = None
    elif d0 and len(rest) == 1:
        center = rest[0]
    elif d0 and len(rest) == d0:
        center = Matrix.diag(rest)
    else:
        want = f"{k}, {k + 1} or {k + d0}" if d0 else str(k)
        raise InputError(f"coefficient count mismatch: expected {want} values, got {len(values)}")
    return construct_semi_standard(alg, coeffs, center)


# -- commands ---------------------------------------------------------------------

def cmd_analyze(g: Graph, source: str = "") -> Report:
    alg = build_algebra(g)
    open_, closed = neighborhoods(g)
    table = preceq_table(g)
    sections = {
        "neighbourhoods": [f"{v}: open {_vset(open_[v])}, closed {_vset(closed[v])}" for v in g.vertices],
        "precedence": [
            f"{i} <= " + _vset(j for j in g.vertices if table[i, j] and j != i) for i in g.vertices
        ],
    }
    notes = []
    try:
        part = equivalence_classes(g)
        sections["classes"] = [f"{_vset(c)} {k}" for c, k in zip(part.classes, part.kinds)]
    except DichotomyViolation as exc:
        notes.append(str(exc))
    info = is_cluster_graph(g)
    basis_std = adapt(alg, standard_metric(alg))
    std = standard_metric(alg)
    der = derivation_space(alg, std, basis_std)
    skew = skew_derivation_space(alg, std, basis_std)
    sections["derivations"] = {"dim Der": der.dim, "dim skew (standard metric)": skew.dim}
    witnesses = {}
    if info.is_cluster:
        sections["ideals"] = ideal_lines(g) if alg.m else ["none: the algebra is abelian"]
    else:
        i, j = info.witness
        witnesses["cluster"] = f"not a cluster graph: edge {i}-{j} joins non-equivalent vertices"
    return Report(
        command="analyze",
        graph=format_graph(g),
        provenance=dict({"input": source} if source else {}, **versions()),
        verdicts={"cluster": info.is_cluster, "abelian": alg.m == 0},
        witnesses=witnesses,
        sections=sections,
        notes=notes,
    )


def cmd_check(g: Graph, metric, seed: int = 0, provenance=None) -> tuple:
    rep = classify(g, metric, seed=seed)
    return rep, from_classification(rep, "check", dict(provenance or {}, seed=seed))


def cmd_crossval(trials: int, max_vertices: int, seed: int, dump_dir: str, only_noncluster: bool = False):
    if trials < 1:
        raise InputError("--trials must be at least 1")
    if max_vertices < 1 or (only_noncluster and max_vertices < 3):
        raise InputError("--max-vertices too small for the requested graphs")
    t0 = time.perf_counter()
    s = cross_validate(trials, max_vertices, seed, dump_dir=dump_dir, only_noncluster=only_noncluster)
    elapsed = time.perf_counter() - t0
    report = Report(
        command="crossval",
        provenance=dict({"trials": trials, "max_vertices": max_vertices, "seed": seed,
                         "only_noncluster": only_noncluster}, **versions()),
        verdicts={"all_agree": s.all_agree},
        sections={
            "summary": {
                "trials": s.trials,
                "classify_runs": s.runs,
                "agreements": s.agreements,
                "noncluster_trials": s.noncluster_trials,
                "noncluster_with_gordon_witness": s.noncluster_witnessed,
                "noncluster_witness_from_z_e_family": s.noncluster_family_witnessed,
                "seconds": round(elapsed, 2),
            },
            "dumps": list(s.dumps),
        },
    )
    return s, report


def cmd_example() -> Report:
    g = example_graph()
    alg = build_algebra(g)
    dec = ideal_decomposition(alg)
    phi = phi_space(alg)
    metric = construct_semi_standard(alg, EXAMPLE_COEFFICIENTS, EXAMPLE_CENTER)
    basis = adapt(alg, metric)
    nr = nr_test(alg, metric, basis)
    semi = is_semi_standard(alg, metric, basis)
    unit = construct_semi_standard(alg, [1] * len(dec.simple), 1)
    return Report(
        command="example",
        graph=format_graph(g),
        provenance=versions(),
        verdicts={
            "phi_space_dim": phi.dim,
            "semi_standard_metric_nr": nr.ok,
            "recognized_semi_standard": semi.ok,
            "unit_coefficients_give_standard_metric": unit == standard_metric(alg),
        },
        sections={
            "brackets": bracket_lines(g),
            "ideals": ideal_lines(g),
            "semi_standard_metric": {
                "coefficients": [format_rational(c) for c in EXAMPLE_COEFFICIENTS],
                "center": format_rational(EXAMPLE_CENTER),
                "recovered_coefficients": [format_rational(c) for c in semi.coefficients],
                "recovered_center": [[format_rational(x) for x in r] for r in semi.center.rows()],
                "z_block": [[format_rational(x) for x in r] for r in basis.C.rows()],
            },
        },
    )


# -- argument handling --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphnil", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="neighbourhood preorder, classes, derivations, ideals")
    a.add_argument("graph", help="graph file: vertex count, then one 'i j' edge per line")
    a.add_argument("--json", action="store_true", help="emit the structured report")

    c = sub.add_parser("check", help="classify a graph with a metric")
    c.add_argument("graph")
    grp = c.add_mutually_exclusive_group()
    grp.add_argument("--metric", help="JSON metric file with 'dim' and 'gram'")
    grp.add_argument("--standard", action="store_true", help="the standard metric (default)")
    grp.add_argument("--semi-standard", metavar="COEFFS",
                     help="comma-separated ideal coefficients, then optional center value(s)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--dump-dir", default="crossval-dumps")
    c.add_argument("--json", action="store_true")

    x = sub.add_parser("crossval", help="random sweep checking that the three routes agree")
    x.add_argument("--trials", type=int, default=200)
    x.add_argument("--max-vertices", type=int, default=7)
    x.add_argument("--seed", type=int, default=42)
    x.add_argument("--only-noncluster", action="store_true")
    x.add_argument("--dump-dir", default="crossval-dumps")
    x.add_argument("--json", action="store_true")

    e = sub.add_parser("example", help="reproduce the twelve-vertex worked example")
    e.add_argument("--json", action="store_true")
    return p


def _emit(report: Report, as_json: bool) -> None:
    print(report.to_json() if as_json else report.render_text())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "analyze":
            _emit(cmd_analyze(load_graph(args.graph), args.graph), args.json)
            return EXIT_OK
        if args.command == "example":
            _emit(cmd_example(), args.json)
            return EXIT_OK
        if args.command == "crossval":
            s, report = cmd_crossval(args.trials, args.max_vertices, args.seed,
                                     args.dump_dir, args.only_noncluster)
            _emit(report, args.json)
            if not s.all_agree:
                for path in s.dumps:
                    print(f"disagreement case written to {path}", file=sys.stderr)
                return EXIT_DISAGREE
            return EXIT_OK
        # check
        g = load_graph(args.graph)
        alg = build_algebra(g)
        prov = {"input": args.graph}
        if args.metric:
            metric = parse_metric(_read(args.metric))
            check_metric(alg, metric)
            prov["metric"] = args.metric
        elif args.semi_standard:
            metric = semi_standard_from_values(g, parse_coefficients(args.semi_standard))
            prov["metric"] = f"semi-standard {args.semi_standard}"
        else:
            metric = standard_metric(alg)
            prov["metric"] = "standard"
        rep, report = cmd_check(g, metric, args.seed, prov)
        _emit(report, args.json)
        if not rep.agree:
            path = dump_case(Path(args.dump_dir), f"check-s{args.seed}-{int(time.time() * 1000)}",
                             args.seed, None, prov["metric"], g, metric, rep)
            print(f"disagreement case written to {path}", file=sys.stderr)
            return EXIT_DISAGREE
        return EXIT_OK
    except (InputError, MetricError) as exc:
        print(f"graphnil: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
