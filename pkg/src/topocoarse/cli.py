"""Command line entry point: ``topocoarse <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from topocoarse.bottleneck import bottleneck_distance
from topocoarse.coarsening import coarsen, with_custom_weights
from topocoarse.features import extract_features, features_csv
from topocoarse.filtration import build_filtration, build_unmodified_filtration, default_r_max
from topocoarse.generators import gen_annulus, random_geometric_graph
from topocoarse.graph import CUSTOM, LENGTH
from topocoarse.io import load_diagram, load_graph, save_diagram, save_graph
from topocoarse.metric import shortest_path_metric
from topocoarse.persistence import compute_persistence
from topocoarse.selector import DEFAULT_GRID_SIZE, score_curve, select
from topocoarse.similarity import Similarity, apply_similarity, random_similarity


class UsageError(Exception):
    pass


def _weighting(name):
    return CUSTOM if name == "custom" else LENGTH


def _read(args):
    path = Path(args.input)
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    edges = getattr(args, "edges", None)
    if edges is not None and not Path(edges).exists():
        raise UsageError(f"no such file: {edges}")
    return load_graph(path, args.format, edges)


def _common(p, grid=True):
    p.add_argument("--input", required=True, help="graph file (JSON, or nodes CSV with --edges)")
    p.add_argument("--edges", help="edges CSV for the csv-edgelist format")
    p.add_argument("--format", choices=["json", "csv-edgelist"])
    p.add_argument("--weight", choices=["length", "custom"], default="length")
    p.add_argument("--rmax-frac", type=float, default=2.0, help="r_max as a multiple of the max component diameter")
    if grid:
        p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
        p.add_argument("--positioning", choices=["average", "degree"], default="average")
        p.add_argument("--dims", choices=["max", "1"], default="max", help="bottleneck over max(H0, H1) or H1 only")
        p.add_argument("--coarse-weights", choices=["length", "min", "sum"], default="length")
    p.add_argument("--seed", type=int, default=0)


def cmd_gen(args):
    if args.kind == "annulus":
        g = gen_annulus(args.n, args.inner, args.outer, args.p, args.seed)
    else:
        g = random_geometric_graph(args.n, args.p, args.seed)
    save_graph(g, args.out)


def cmd_coarsen(args):
    g = _read(args)
    w = _weighting(args.weight)
    res = coarsen(g, w, args.theta, args.positioning)
    out = res.coarse
    if args.coarse_weights != "length":
        out = with_custom_weights(g, res, args.coarse_weights)
    save_graph(out, args.out)
    if args.partition_out:
        ids = g.node_ids
        lines = ["node,block"] + [f"{ids[i]},{b}" for i, b in enumerate(res.partition.block_of.tolist())]
        Path(args.partition_out).write_text("\n".join(lines) + "\n")


def cmd_pd(args):
    g = _read(args)
    metric = shortest_path_metric(g, _weighting(args.weight))
    r_max = args.rmax if args.rmax is not None else default_r_max(metric, args.rmax_frac)
    build = build_unmodified_filtration if args.unmodified else build_filtration
    fc = build(metric, r_max)
    if args.dump_filtration:
        Path(args.dump_filtration).write_text(fc.to_csv())
    pd = compute_persistence(fc, keep_zero=args.keep_zero)
    if args.out:
        save_diagram(pd, args.out)
    else:
        sys.stdout.write(pd.to_csv())


def cmd_bottleneck(args):
    for p in (args.a, args.b):
        if not Path(p).exists():
            raise UsageError(f"no such file: {p}")
    a, b = load_diagram(args.a), load_diagram(args.b)
    dim = args.dim if args.dim == "max" else int(args.dim)
    print(repr(bottleneck_distance(a, b, dim)))


def _curve_kwargs(args):
    return dict(dims=args.dims, coarse_weights=args.coarse_weights)


def cmd_score_curve(args):
    g = _read(args)
    curve = score_curve(
        g,
        _weighting(args.weight),
        args.positioning,
        args.grid_size,
        args.rmax_frac,
        include_zero=args.include_zero,
        **_curve_kwargs(args),
    )
    if args.out:
        Path(args.out).write_text(curve.to_csv())
    else:
        sys.stdout.write(curve.to_csv())


def cmd_select(args):
    g = _read(args)
    theta, res, curve = select(
        g, _weighting(args.weight), args.positioning, args.grid_size, args.rmax_frac, **_curve_kwargs(args)
    )
    prefix = args.out_prefix
    coarse = res.coarse
    if args.coarse_weights != "length":
        coarse = with_custom_weights(g, res, args.coarse_weights)
    save_graph(coarse, f"{prefix}.coarse.json")
    Path(f"{prefix}.scores.csv").write_text(curve.to_csv())
    save_diagram(curve.original_diagram, f"{prefix}.pd_orig.csv")
    save_diagram(curve.diagrams[curve.argmin_index], f"{prefix}.pd_reduced.csv")
    print(f"theta_star={theta!r} alpha_star={curve.alpha_star!r} nodes {g.n_nodes}->{coarse.n_nodes} edges {g.n_edges}->{coarse.n_edges}")


def cmd_features(args):
    rows = []
    for item in args.inputs:
        path = Path(item)
        if not path.exists():
            raise UsageError(f"no such file: {path}")
        g = load_graph(path)
        w = _weighting(args.weight)
        if args.reduced:
            _, res, curve = select(g, w, args.positioning, args.grid_size, args.rmax_frac, **_curve_kwargs(args))
            g, pd = res.coarse, curve.diagrams[curve.argmin_index]
        else:
            metric = shortest_path_metric(g, w)
            pd = compute_persistence(build_filtration(metric, default_r_max(metric, args.rmax_frac)))
        rows.append((path.stem, extract_features(g, pd)))
    text = features_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_transform(args):
    g = _read(args)
    if args.rotate is not None or args.scale is not None or args.translate is not None:
        if g.dim != 2 and args.rotate is not None:
            raise UsageError("--rotate only applies to 2D graphs")
        R = np.eye(g.dim)
        if args.rotate is not None:
            c, s = np.cos(np.radians(args.rotate)), np.sin(np.radians(args.rotate))
            R = np.array([[c, -s], [s, c]])
        A = np.zeros(g.dim) if args.translate is None else np.array(args.translate, dtype=float)
        sim = Similarity(R, A, args.scale if args.scale is not None else 1.0)
    else:
        sim = random_similarity(g.dim, args.seed)
    save_graph(apply_similarity(g, sim), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topocoarse", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic graph")
    p.add_argument("kind", choices=["annulus", "random"])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--inner", type=float, default=0.7)
    p.add_argument("--outer", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.1, help="edge fraction (annulus) or edge probability (random)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("coarsen", help="coarsen at a fixed threshold")
    _common(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--partition-out")
    p.set_defaults(func=cmd_coarsen)

    p = sub.add_parser("pd", help="persistence diagram of a graph")
    _common(p, grid=False)
    p.add_argument("--rmax", type=float, help="absolute r_max, overrides --rmax-frac")
    p.add_argument("--unmodified", action="store_true", help="plain shortest-path VR triangles")
    p.add_argument("--keep-zero", action="store_true")
    p.add_argument("--dump-filtration")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pd)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two diagram CSVs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--dim", choices=["0", "1", "max"], default="max")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("score-curve", help="score every grid threshold")
    _common(p)
    p.add_argument("--include-zero", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_score_curve)

    p = sub.add_parser("select", help="pick the best threshold and write the results")
    _common(p)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("features", help="feature CSV for one or more graphs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--weight", choices=["length", "custom"], default="length")
    p.add_argument("--rmax-frac", type=float, default=2.0)
    p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    p.add_argument("--positioning", choices=["average", "degree"], default="average")
    p.add_argument("--dims", choices=["max", "1"], default="max")
    p.add_argument("--coarse-weights", choices=["length", "min", "sum"], default="length")
    p.add_argument("--reduced", action="store_true", help="features of the selected coarsening")
    p.add_argument("--out")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("transform", help="apply a similarity transform")
    p.add_argument("--input", required=True)
    p.add_argument("--edges")
    p.add_argument("--format", choices=["json", "csv-edgelist"])
    p.add_argument("--seed", type=int, default=0, help="random similarity when no explicit transform is given")
    p.add_argument("--rotate", type=float, help="degrees, 2D only")
    p.add_argument("--scale", type=float)
    p.add_argument("--translate", type=float, nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"topocoarse: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"topocoarse: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
