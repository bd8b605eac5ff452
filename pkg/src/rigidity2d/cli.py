"""The ``analyze`` command line tool.

Every subcommand reads a graph JSON file, prints one JSON document to
stdout (two-space indent, sorted keys) and exits 0 on success, 1 on a
validation error, 2 on a certification failure.  Identical inputs and
seed give byte-identical output.  Human-oriented notes go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bruteforce import (brute_is_sparse, brute_is_tight,
                         brute_max_tight_parts)
from .calligraphs import (class_of, coupler_multiplicity, coupler_prediction,
                          coupler_trace, is_calligraph, is_thin)
from .components import class_sizes, classify_witnesses, component_number
from .graphs import (EdgeLengths, Graph, ValidationError, parse_graph,
                     parse_lengths, sample_lengths)
from .homotopy import TrackingError
from .solver import (CertificationError, _derived_seed, count_report,
                     witness_points)
from .sparsity import (henneberg_sequence, is_sparse, is_tight,
                       max_tight_decomposition, replay_henneberg)

_BRUTE_FORCE_LIMIT = 12     # vertex cap for exhaustive subgraph checks


class _CliParser(argparse.ArgumentParser):
    """argparse that reports usage problems as validation errors."""

    def error(self, message):
        raise ValidationError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _CliParser(
        prog="analyze",
        description="Rigidity analysis of 2D bar-joint frameworks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, lengths=False, verify=False, plot=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="path to a graph JSON file")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for all randomized choices (default 0)")
        if lengths:
            p.add_argument("--lengths", default=None,
                           help="edge lengths JSON file (default: sampled)")
        if verify:
            p.add_argument("--verify", action="store_true",
                           help="add the witness-classification cross-check")
        if plot:
            p.add_argument("-o", "--output", required=False, default=None,
                           help="SVG output path (required)")
            p.add_argument("--samples", type=int, default=720,
                           help="driving-angle samples (default 720)")
        else:
            p.add_argument("-o", "--output", default=None,
                           help="also write the JSON to this file")
        return p

    add("decompose", "max-tight decomposition of a sparse graph")
    add("count", "certified realization count of a tight graph", lengths=True)
    add("components", "component number by the product formula", verify=True)
    add("calligraph", "calligraph class and coupler-curve prediction")
    add("coupler-plot", "trace the real coupler curve to an SVG",
        lengths=True, plot=True)
    add("verify", "cross-check the analyses on this graph")
    return parser


def _read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError("cannot read graph file: %s" % exc) from exc
    return parse_graph(text)


def _read_lengths(path: str | None, g: Graph, seed: int,
                  purpose: int) -> EdgeLengths:
    if path is None:
        return sample_lengths(g, _derived_seed(seed, purpose))
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError("cannot read lengths file: %s" % exc) from exc
    return parse_lengths(text, g)


def _run_decompose(args) -> dict:
    g = _read_graph(args.graph)
    dec = max_tight_decomposition(g)
    return {
        "command": "decompose",
        "sparse": True,
        "tight": is_tight(g),
        "n_parts": dec.n_parts,
        "parts": [{"vertices": sorted(vs), "edges": [list(e) for e in sorted(es)]}
                  for vs, es in dec.parts],
    }


def _run_count(args) -> dict:
    g = _read_graph(args.graph)
    lengths = None
    if args.lengths is not None:
        lengths = _read_lengths(args.lengths, g, args.seed, 0)
    report = count_report(g, args.seed, lengths)
    return {
        "command": "count",
        "c": report.c,
        "paths": report.paths,
        "certified": report.certified,
        "seed": args.seed,
    }


def _witness_cross_check(g: Graph, seed: int, expected: int) -> dict:
    """Classify witness points of the general fiber; compare class count."""
    fiber_dim = 2 * (g.n_vertices - 2) - (g.n_edges - 1)
    if not is_sparse(g):
        return {"skipped": True, "reason": "graph is not sparse"}
    if g.n_vertices < 3:
        return {"skipped": True, "reason": "fiber is a point"}
    if fiber_dim > 1:
        return {"skipped": True,
                "reason": "pinned fiber dimension %d exceeds 1" % fiber_dim}
    paths = 2 ** (g.n_edges - 1)
    if paths > 1024:
        return {"skipped": True,
                "reason": "witness solve needs %d paths; capped at 1024" % paths}
    lengths = sample_lengths(g, _derived_seed(seed, 0))
    if fiber_dim == 0:
        ws = witness_points(g, lengths, 0, seed)
        n_classes = ws.count
    else:
        ws = witness_points(g, lengths, 1, seed, slice_vertices="all")
        labels = classify_witnesses(g, lengths, ws)
        n_classes = len(class_sizes(labels))
    result = {
        "skipped": False,
        "witness_count": ws.count,
        "n_classes": n_classes,
        "matches_product": n_classes == expected,
    }
    if not result["matches_product"]:
        raise CertificationError(
            "witness classification found %d classes but the product "
            "formula gives %d" % (n_classes, expected))
    return result


def _run_components(args) -> dict:
    g = _read_graph(args.graph)
    report = component_number(g, args.seed)
    out = {
        "command": "components",
        "component_number": report.component_number,
        "parts": len(report.per_part_counts),
        "per_part_counts": report.per_part_counts,
        "fiber_dimension": report.fiber_dimension,
        "sparse": report.sparse,
        "seed": args.seed,
    }
    if args.verify:
        out["verification"] = _witness_cross_check(
            g, args.seed, report.component_number)
    return out


def _run_calligraph(args) -> dict:
    g = _read_graph(args.graph)
    out = {
        "command": "calligraph",
        "is_calligraph": is_calligraph(g),
        "is_thin": False,
        "class": None,
        "k": None,
        "degree_per_component": None,
        "total_degree": None,
        "genus_bound_sing0": None,
        "multiplicity": None,
        "seed": args.seed,
    }
    if not out["is_calligraph"]:
        return out
    out["is_thin"] = is_thin(g)
    try:
        out["class"] = list(class_of(g, args.seed))
    except ValidationError as exc:
        # A coupler vertex adjacent to the base degenerates the split;
        # the class is undefined there but the multiplicity is not.
        print("note: %s" % exc, file=sys.stderr)
    out["multiplicity"] = coupler_multiplicity(g, args.seed)
    if out["is_thin"] and out["class"] is not None:
        prediction = coupler_prediction(g, args.seed)
        out["k"] = prediction.k
        out["degree_per_component"] = int(prediction.degree_per_component)
        out["total_degree"] = prediction.total_degree
        out["genus_bound_sing0"] = prediction.genus_bound(0)
    return out


def _run_coupler_plot(args) -> dict:
    g = _read_graph(args.graph)
    if args.output is None:
        raise ValidationError("coupler-plot needs -o for the SVG file")
    lengths = _read_lengths(args.lengths, g, args.seed, 0)
    trace = coupler_trace(g, lengths, n_samples=args.samples, seed=args.seed)
    try:
        Path(args.output).write_text(trace.svg, encoding="utf-8")
    except OSError as exc:
        raise ValidationError("cannot write SVG: %s" % exc) from exc
    empty = not trace.points
    if empty:
        print("warning: no real coupler points for these lengths",
              file=sys.stderr)
    return {
        "command": "coupler-plot",
        "chains": len(trace.chains),
        "classes": trace.n_classes,
        "points": len(trace.points),
        "samples": trace.n_samples,
        "driving_edge": list(trace.driving_edge),
        "svg_path": args.output,
        "empty": empty,
        "warning": ("no real coupler points for these lengths"
                    if empty else None),
        "seed": args.seed,
    }


def _run_verify(args) -> dict:
    g = _read_graph(args.graph)
    checks: list[dict] = []

    def record(name, status, detail):
        checks.append({"name": name, "status": status, "detail": detail})

    small = g.n_vertices <= _BRUTE_FORCE_LIMIT
    skip_note = ("graph has %d vertices; exhaustive check capped at %d"
                 % (g.n_vertices, _BRUTE_FORCE_LIMIT))

    sparse = is_sparse(g)
    if small:
        agree = sparse == brute_is_sparse(g)
        record("sparsity-brute-force", "passed" if agree else "failed",
               "pebble game %s exhaustive subgraph counts"
               % ("matches" if agree else "contradicts"))
    else:
        record("sparsity-brute-force", "skipped", skip_note)

    tight = is_tight(g)
    if small:
        agree = tight == brute_is_tight(g)
        record("tightness-brute-force", "passed" if agree else "failed",
               "pebble game %s exhaustive subgraph counts"
               % ("matches" if agree else "contradicts"))
    else:
        record("tightness-brute-force", "skipped", skip_note)

    if not sparse:
        record("decomposition-brute-force", "skipped", "graph is not sparse")
    elif small:
        dec = max_tight_decomposition(g)

        def canonical(parts):
            return sorted((tuple(sorted(vs)), tuple(sorted(es)))
                          for vs, es in parts)

        got = canonical((vs, es) for vs, es in dec.parts if es)
        want = canonical(brute_max_tight_parts(g))
        agree = got == want
        record("decomposition-brute-force", "passed" if agree else "failed",
               "%d parts %s the exhaustively enumerated maximal tight "
               "subgraphs" % (dec.n_parts,
                              "match" if agree else "do not match"))
    else:
        record("decomposition-brute-force", "skipped", skip_note)

    if tight and g.n_vertices >= 2:
        seq = henneberg_sequence(g)
        if seq is None:
            record("henneberg-replay", "failed",
                   "no construction sequence found for a tight graph")
        else:
            rebuilt = replay_henneberg(seq)
            agree = (rebuilt.vertices == g.vertices
                     and rebuilt.edges == g.edges)
            record("henneberg-replay", "passed" if agree else "failed",
                   "replaying %d moves %s the graph"
                   % (len(seq.steps),
                      "reconstructs" if agree else "does not reconstruct"))
    else:
        record("henneberg-replay", "skipped", "graph is not tight")

    fiber_dim = 2 * (g.n_vertices - 2) - (g.n_edges - 1) \
        if g.n_vertices >= 2 else 0
    if sparse and g.n_vertices >= 3 and 0 <= fiber_dim <= 1:
        expected = component_number(g, args.seed).component_number
        try:
            cross = _witness_cross_check(g, args.seed, expected)
        except CertificationError as exc:
            record("witness-vs-product", "failed", str(exc))
        else:
            if cross["skipped"]:
                record("witness-vs-product", "skipped", cross["reason"])
            else:
                record("witness-vs-product", "passed",
                       "%d witness points fall into %d classes; product "
                       "formula gives %d"
                       % (cross["witness_count"], cross["n_classes"], expected))
    else:
        record("witness-vs-product", "skipped",
               "needs a sparse graph with pinned fiber dimension 0 or 1"
               + ("" if sparse else " (graph is not sparse)"))

    failed = [c for c in checks if c["status"] == "failed"]
    return {
        "command": "verify",
        "checks": checks,
        "all_passed": not failed,
        "seed": args.seed,
    }


_RUNNERS = {
    "decompose": _run_decompose,
    "count": _run_count,
    "components": _run_components,
    "calligraph": _run_calligraph,
    "coupler-plot": _run_coupler_plot,
    "verify": _run_verify,
}


def _emit(obj: dict, output: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if output is not None:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ValidationError("cannot write output file: %s" % exc) from exc


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        result = _RUNNERS[args.command](args)
    except ValidationError as exc:
        _emit_error("validation", str(exc))
        return 1
    except (CertificationError, TrackingError) as exc:
        _emit_error("certification", str(exc))
        return 2
    json_output = None if args.command == "coupler-plot" else args.output
    _emit(result, json_output)
    if args.command == "verify" and not result["all_passed"]:
        return 2
    return 0


def _emit_error(code: str, message: str) -> None:
    sys.stdout.write(json.dumps(
        {"error": {"code": code, "message": message}},
        indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
