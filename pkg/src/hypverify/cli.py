"""Command-line interface: constants, separators, criticality,
enumeration, and verification campaigns with JSON reports.

Exit codes: 0 success (and verification passed), 1 verification found
failures, 2 usage or input error.  Reports on stdout are byte-identical
for fixed inputs and seed; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .criticality import (
    ClassSpec,
    Tristate,
    is_critical_for_k_choosability,
    is_critical_for_k_coloring,
    is_critical_for_lists,
    parse_lists,
)
from .cylinder import CylinderGraph, fat_cylinder_check, thin_layer_decomposition
from .embedding import DiskGraph, parse_graph, serialize_graph
from .engine import (
    BoundFunction,
    CampaignConfig,
    theorem1_threshold,
    theorem2_constants,
    verify_hyperbolic_up_to,
    verify_strongly_hyperbolic_up_to,
)
from .enumeration import enumerate_cylinder_graphs, enumerate_disk_graphs
from .errors import HypVerifyError
from .exact import format_rational, parse_rational
from .separator import cycle_separator, iterated_separator


def _emit(data, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        for key, value in data.items():
            sys.stdout.write(f"{key}: {value}\n")


def _read_graph(path):
    with open(path) as fh:
        return parse_graph(fh.read())


def cmd_constants(args):
    if args.thm == 1:
        if args.epsilon is None:
            raise HypVerifyError("--epsilon is required for --thm 1")
        k = theorem1_threshold(
            parse_rational(args.c),
            parse_rational(args.epsilon),
            external_bound=args.external_bound,
        )
        _emit(k.to_dict(), args.format)
    else:
        f = _bound_function(args)
        k = theorem2_constants(parse_rational(args.c), f)
        data = k.to_dict()
        data["g_samples"] = {str(i): k.g(i) for i in range(0, 25)}
        _emit(data, args.format)
    return 0


def _bound_function(args):
    if getattr(args, "f_table", None):
        return BoundFunction(
            table=[int(x) for x in args.f_table.split(",")]
        )
    return BoundFunction.identity()


def cmd_separate(args):
    g = DiskGraph.from_embedding(_read_graph(args.input))
    c = parse_rational(args.c)
    if args.t is not None:
        res = iterated_separator(g, c, parse_rational(args.t))
        data = dict(res.ledger)
        data["iterations"] = res.iterations
        data["case"] = "iterated"
    else:
        res = cycle_separator(g, c)
        data = dict(res.ledger)
        data["case"] = res.case
        data["augmented_edges"] = res.augmented_edges
    _emit(data, args.format)
    return 0


def cmd_cylinder(args):
    g = CylinderGraph.from_embedding(_read_graph(args.input))
    c = parse_rational(args.c)
    data = {}
    if args.fat_check:
        data["fat_check"] = fat_cylinder_check(g, c)
    dec = thin_layer_decomposition(g, c)
    data["decomposition"] = {
        "thin_levels": list(dec.thin_levels),
        "curves": [
            [(s.vertex, type(s.segment).__name__) for s in spec.steps]
            for spec in dec.curves
        ],
        "touched": [list(t) for t in dec.touched],
        "pieces": [
            {
                "level_from": p.level_from,
                "level_to": p.level_to,
                "interior": p.interior,
                "boundary": p.boundary,
                "fat": p.fat,
            }
            for p in dec.pieces
        ],
        "shift": list(dec.shift),
        "added_edges": dec.added_edges,
    }
    _emit(data, args.format)
    return 0


def cmd_critical(args):
    e = _read_graph(args.input)
    g = DiskGraph.from_embedding(e)
    if args.lists:
        with open(args.lists) as fh:
            lists = parse_lists(fh.read(), g.n)
        verdict = is_critical_for_lists(g, lists)
        _emit({"critical": verdict, "mode": "lists"}, args.format)
        return 0
    if args.mode == "choosability":
        if args.palette_bound is None:
            raise HypVerifyError("--palette-bound is required for choosability")
        tri = is_critical_for_k_choosability(g, args.k, args.palette_bound)
        _emit(
            {"critical": tri.value, "mode": "choosability", "k": args.k},
            args.format,
        )
        return 0
    verdict = is_critical_for_k_coloring(g, args.k)
    _emit({"critical": verdict, "mode": "coloring", "k": args.k}, args.format)
    return 0


def cmd_enumerate(args):
    if args.surface == "disk":
        stream = enumerate_disk_graphs(
            args.max_n,
            girth_min=args.girth_min,
            max_boundary=args.max_boundary,
        )
    else:
        stream = enumerate_cylinder_graphs(args.max_n, girth_min=args.girth_min)
    if args.count_only:
        counts = {}
        for d in stream:
            counts[d.n] = counts.get(d.n, 0) + 1
        _emit({str(k): v for k, v in sorted(counts.items())}, args.format)
        return 0
    first = True
    for d in stream:
        if not first:
            sys.stdout.write("\n")
        sys.stdout.write(serialize_graph(d.base))
        first = False
    return 0


def cmd_verify(args):
    with open(args.config) as fh:
        config = CampaignConfig.from_json(json.load(fh))
    if args.jobs is not None:
        config.jobs = args.jobs
    if args.checkpoint is not None:
        config.checkpoint_dir = args.checkpoint
    if config.surface == "disk":
        report = verify_hyperbolic_up_to(
            config.spec,
            config.cheeger_c,
            config.max_size,
            jobs=config.jobs,
            checkpoint_dir=config.checkpoint_dir,
        )
    else:
        report = verify_strongly_hyperbolic_up_to(
            config.spec,
            config.f,
            config.max_size,
            jobs=config.jobs,
            checkpoint_dir=config.checkpoint_dir,
        )
    sys.stdout.write(report.to_json())
    sys.stderr.write(f"wall time: {report.wall_time:.2f}s\n")
    return 0 if report.succeeded else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypverify",
        description=(
            "finite verification toolkit for hyperbolic families of "
            "embedded graphs"
        ),
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument(
            "--format", choices=("json", "text"), default="json"
        )
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("constants", help="threshold formulas")
    common(sp)
    sp.add_argument("--thm", type=int, choices=(1, 2), required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--epsilon")
    sp.add_argument("--external-bound", type=int, default=None)
    sp.add_argument("--f-table")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("separate", help="cycle separator ledger")
    common(sp)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--t", help="iterate down to this size")
    sp.set_defaults(func=cmd_separate)

    sp = sub.add_parser("cylinder", help="fat check and decomposition")
    common(sp)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--fat-check", action="store_true")
    sp.set_defaults(func=cmd_cylinder)

    sp = sub.add_parser("critical", help="coloring criticality")
    common(sp)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument(
        "--mode", choices=("coloring", "choosability"), default="coloring"
    )
    sp.add_argument("--palette-bound", type=int, default=None)
    sp.add_argument("--lists", help="list assignment file")
    sp.set_defaults(func=cmd_critical)

    sp = sub.add_parser("enumerate", help="canonical candidate stream")
    common(sp)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--girth-min", type=int, default=3)
    sp.add_argument("--max-boundary", type=int, default=None)
    sp.add_argument("--surface", choices=("disk", "cylinder"), default="disk")
    sp.add_argument("--count-only", action="store_true")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", help="verification campaign")
    common(sp)
    sp.add_argument("--config", required=True)
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--checkpoint", default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (HypVerifyError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
