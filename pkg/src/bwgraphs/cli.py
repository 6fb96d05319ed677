"""Batch command-line front end.

Subcommands: validate, info, enumerate, homology, compose, glue-metric,
export-dot, dsq-check.  Exit status is 0 on success, 1 on a domain error
and 2 on a usage error.  All output is deterministic.
"""

import argparse
import json
import os
import sys

from .fatgraph import FatGraph, FatGraphError, validate
from . import bw as bwmod
from . import complex as cpx
from .compose import compose as compose_bw
from .metric import MetricAdmissibleGraph, compose as compose_metric
from .openclosed import (
    ComponentType, OpenClosedGraph, TopologicalType, is_admissible,
    mixed_degree, topological_type, validate_oc,
)

_TYPE_KEYS = ("g", "in_closed", "in_open", "out_closed", "out_open", "free")


def parse_type_spec(spec):
    """Parse `g=..,in_closed=..,...` component specs joined by `+`.

    The global boundary orders list the closed boundaries of every
    component first, then the open ones, both in component order.
    """
    components = []
    for part in spec.split("+"):
        values = dict.fromkeys(_TYPE_KEYS, 0)
        for item in part.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise FatGraphError("bad type entry %r" % item)
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in values:
                raise FatGraphError("unknown type key %r" % key)
            values[key] = int(val)
        components.append(ComponentType(
            values["g"], values["in_closed"], values["in_open"],
            values["out_closed"], values["out_open"], values["free"]))
    in_order = []
    out_order = []
    for kind_key in ("closed", "open"):
        for ci, c in enumerate(components):
            count = c.in_closed if kind_key == "closed" else c.in_open
            in_order.extend((ci, kind_key) for _ in range(count))
    for kind_key in ("closed", "open"):
        for ci, c in enumerate(components):
            count = c.out_closed if kind_key == "closed" else c.out_open
            out_order.extend((ci, kind_key) for _ in range(count))
    return TopologicalType(tuple(components), tuple(in_order),
                           tuple(out_order))


def load_graph(path):
    """Load a FatGraph, OpenClosedGraph, BWGraph or metric graph by shape."""
    with open(path) as fh:
        data = json.load(fh)
    if "white_order" in data:
        return bwmod.BWGraph.from_json_dict(data)
    if "lengths" in data:
        return MetricAdmissibleGraph.from_json_dict(data)
    if "in_leaves" in data:
        return OpenClosedGraph.from_json_dict(data)
    return FatGraph.from_json_dict(data)


def _dump_json(data, out):
    out.write(json.dumps(data, indent=2, sort_keys=False))
    out.write("\n")


def cmd_validate(args, out):
    g = load_graph(args.path)
    if isinstance(g, bwmod.BWGraph):
        bwmod.validate_bw(g, generalized=args.generalized)
    elif isinstance(g, MetricAdmissibleGraph):
        from .metric import validate_metric
        validate_metric(g)
    elif isinstance(g, OpenClosedGraph):
        validate_oc(g)
    else:
        validate(g)
    out.write("OK\n")
    return 0


def _type_lines(t):
    lines = []
    for k, c in enumerate(t.components):
        lines.append(
            "component %d: g=%d in_closed=%d in_open=%d out_closed=%d "
            "out_open=%d free=%d"
            % (k, c.genus, c.in_closed, c.in_open, c.out_closed,
               c.out_open, c.free))
    lines.append("in order:  %s" % " ".join(
        "%d:%s" % e for e in t.in_order))
    lines.append("out order: %s" % " ".join(
        "%d:%s" % e for e in t.out_order))
    return lines


def cmd_info(args, out):
    g = load_graph(args.path)
    if isinstance(g, MetricAdmissibleGraph):
        g = g.graph
    if isinstance(g, bwmod.BWGraph):
        t = bwmod.topological_type(g)
        for line in _type_lines(t):
            out.write(line + "\n")
        out.write("degree: %d\n" % bwmod.degree(g))
        return 0
    if not isinstance(g, OpenClosedGraph):
        raise FatGraphError("info needs leaf labels")
    t = topological_type(g)
    for line in _type_lines(t):
        out.write(line + "\n")
    if is_admissible(g):
        rep = mixed_degree(g)
        out.write("mixed degree: %d\n" % rep.mixed_degree)
        out.write("bw degree: %d\n" % rep.bw_degree)
        out.write("essentially trivalent: %s\n"
                  % ("yes" if rep.essentially_trivalent else "no"))
    else:
        out.write("admissible: no\n")
    return 0


def cmd_enumerate(args, out):
    t = parse_type_spec(args.type)
    gens = cpx.enumerate_generators(t, max_degree=args.max_degree)
    if args.format == "json":
        data = {str(d): [g.to_json_dict() for g in lst]
                for d, lst in gens.items()}
        _dump_json(data, out)
        return 0
    out.write("degree  generators\n")
    for d in sorted(gens):
        out.write("%6d  %d\n" % (d, len(gens[d])))
    return 0


def cmd_homology(args, out):
    t = parse_type_spec(args.type)
    c = cpx.build_complex(t, max_degree=args.max_degree)
    h = cpx.homology(c)
    if args.emit_matrices:
        os.makedirs(args.emit_matrices, exist_ok=True)
        for d, mat in sorted(c.boundaries.items()):
            path = os.path.join(args.emit_matrices, "boundary_%d.txt" % d)
            with open(path, "w") as fh:
                for row in mat:
                    fh.write(" ".join(str(x) for x in row) + "\n")
    if args.format == "json":
        data = {
            "betti": list(h.betti),
            "torsion": [list(ts) for ts in h.torsion],
            "generators": {str(d): len(v) for d, v in c.generators.items()},
        }
        _dump_json(data, out)
        return 0
    out.write("n  #gens  betti  torsion\n")
    for n in range(c.max_degree + 1):
        torsion = ",".join(str(d) for d in h.torsion[n]) or "-"
        out.write("%d  %5d  %5d  %s\n"
                  % (n, len(c.generators.get(n, [])), h.betti[n], torsion))
    return 0


def cmd_compose(args, out):
    g2 = load_graph(args.g2)
    g1 = load_graph(args.g1)
    if isinstance(g2, MetricAdmissibleGraph):
        raise FatGraphError("use glue-metric for metric graphs")
    result = compose_bw(g2, g1)
    for coeff, rep in result.terms():
        out.write("%+d * %s\n" % (coeff, json.dumps(rep.to_json_dict())))
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
        for k, (coeff, rep) in enumerate(result.terms()):
            path = os.path.join(args.dot_dir, "term_%03d.dot" % k)
            with open(path, "w") as fh:
                fh.write(bwmod.to_dot(rep, name="term%d" % k))
    return 0


def cmd_glue_metric(args, out):
    m2 = load_graph(args.m2)
    m1 = load_graph(args.m1)
    if not isinstance(m2, MetricAdmissibleGraph) or \
            not isinstance(m1, MetricAdmissibleGraph):
        raise FatGraphError("glue-metric needs metric graphs")
    result = compose_metric(m2, m1)
    if args.output:
        with open(args.output, "w") as fh:
            _dump_json(result.to_json_dict(), fh)
    else:
        _dump_json(result.to_json_dict(), out)
    return 0


def cmd_export_dot(args, out):
    g = load_graph(args.path)
    if isinstance(g, MetricAdmissibleGraph):
        g = g.graph
    if isinstance(g, FatGraph):
        raise FatGraphError("export-dot needs leaf labels")
    text = bwmod.to_dot(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_dsq_check(args, out):
    t = parse_type_spec(args.type)
    c = cpx.build_complex(t, max_degree=args.max_degree)
    if cpx.check_dsquared(c):
        out.write("OK\n")
        return 0
    out.write("FAIL: d squared is nonzero\n")
    return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bwgraphs",
        description="fat graphs, admissible circles and the black-and-white "
                    "graph chain complex")
    parser.add_argument("--jobs", type=int, default=1,
                        help="enumeration sharding (reserved; runs "
                             "single-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph file")
    p.add_argument("path")
    p.add_argument("--generalized", action="store_true",
                   help="allow unlabeled leaves away from white starts")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", help="topological type and degrees")
    p.add_argument("path")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("enumerate", help="list generators of a type")
    p.add_argument("--type", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("homology", help="integral homology of a type")
    p.add_argument("--type", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--emit-matrices", metavar="DIR", default=None)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("compose", help="chain-level composition g2 o g1")
    p.add_argument("g2")
    p.add_argument("g1")
    p.add_argument("--dot-dir", default=None)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("glue-metric", help="metric composition m2 o m1")
    p.add_argument("m2")
    p.add_argument("m1")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_glue_metric)

    p = sub.add_parser("export-dot", help="GraphViz rendering")
    p.add_argument("path")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("dsq-check", help="verify that d squared vanishes")
    p.add_argument("--type", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(func=cmd_dsq_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except FatGraphError as exc:
        sys.stderr.write("%s: %s\n" % (type(exc).__name__, exc))
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
