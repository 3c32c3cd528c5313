"""
Command-line front end for the private MST toolkit.

    python -m scheduler.cli gen --family cycle --params n=8 --out graph.txt
    python -m scheduler.cli release --graph graph.txt --weights w.txt --mech expmech --rel l1 --eps 1 --seed 7
    python -m scheduler.cli bench --spec spec.toml --out results.csv

Exit codes: 0 success, 1 validation error, 2 enumeration guard exceeded,
3 numerics error.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - argparse, logging, sys, core.*, tools.*, scheduler.experiment_runner
# OUTPUT: 对外提供 - build_parser, main (gen/mst/release/diam/dissimilar/lowerbound/audit/bench)
# POSITION: 系统地位 - [Scheduler/Entry Layer] - 命令行入口,配置日志并把错误映射为退出码
# ============================================================================

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from core.counting import diameter_exact
from core.errors import MSTPrivacyError
from core.graph import diameter_2approx, mst, tree_weight, zero_weight_tree
from core.state import MechanismConfig, NeighborRelation
from scheduler.experiment_runner import ExperimentRunner, laplace_tail_experiment, load_spec, separation_ratios
from tools.file_manager import FileManager
from tools.graph_generators import GENERATORS, generate_graph, parse_params
from tools.lower_bounds import lower_bound_value
from tools.mechanisms import MECHANISMS, release, release_error
from tools.privacy_audit import audit_mechanism
from tools.tree_space import dissimilar_set

logger = logging.getLogger("scheduler.cli")


def cmd_gen(args: argparse.Namespace, fm: FileManager) -> int:
    graph = generate_graph(args.family, parse_params(args.params))
    path = fm.write_graph(graph, args.out)
    print(f"n={graph.n} m={graph.m} -> {path}")
    return 0


def cmd_mst(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    w = fm.read_weights(args.weights, graph)
    tree = mst(graph, w)
    print(tree.format())
    print(f"weight {tree_weight(w, tree)!r}")
    return 0


def cmd_release(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    w = fm.read_weights(args.weights, graph)
    cfg = MechanismConfig(epsilon=args.eps, relation=args.rel, seed=args.seed)
    tree = release(graph, w, args.mech, cfg)
    print(tree.format())
    print(f"error {release_error(graph, w, tree)!r}")
    return 0


def cmd_diam(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    print(f"R0 {diameter_2approx(graph, zero_weight_tree(graph))}")
    if args.exact:
        print(f"D {diameter_exact(graph)}")
    return 0


def cmd_dissimilar(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    dset = dissimilar_set(graph)
    path = fm.write_trees(dset.trees, dset.separation, args.out)
    print(f"|S|={dset.size} separation={dset.separation!r} method={dset.method} -> {path}")
    return 0


def cmd_lowerbound(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    report = lower_bound_value(graph, args.eps, args.rel)
    label = "D" if report["diameter_is_exact"] else "R0"
    print(f"value {report['value']!r}")
    print(f"|S| {report['set_size']}")
    print(f"d {report['separation']!r}")
    print(f"{label} {report['diameter']}")
    print(f"vacuous {str(report['vacuous']).lower()}")
    print(f"expected_error_floor {report['expected_error_floor']!r}")
    return 0


def cmd_audit(args: argparse.Namespace, fm: FileManager) -> int:
    graph = fm.read_graph(args.graph)
    w = fm.read_weights(args.weights, graph)
    cfg = MechanismConfig(epsilon=args.eps, relation=args.rel, seed=args.seed)
    report = audit_mechanism(graph, w, args.mech, cfg, args.dirs)
    print(f"mechanism {report['mechanism']} relation {report['relation']} eps {report['epsilon']!r}")
    print(f"directions {report['directions']}")
    print(f"max_ratio {report['max_ratio']!r}")
    print(f"bound {report['bound']!r}")
    print("PASS" if report["passed"] else "FAIL")
    return 0


def cmd_bench(args: argparse.Namespace, fm: FileManager) -> int:
    overrides = {"output": args.out} if args.out else {}
    spec = load_spec(fm.resolve(args.spec), overrides)
    runner = ExperimentRunner(max_workers=args.workers, file_manager=fm)
    rows = runner.run(spec)
    if spec.output:
        fm.write_rows(rows, spec.output)
    if spec.kind == "error":
        for _, rec in runner.summarize_with_bounds(spec, rows).iterrows():
            print(f"{rec['graph_id']} {rec['mechanism']}/{rec['relation']} eps={rec['epsilon']!r} "
                  f"mean={rec['mean']:.6g} se={rec['standard_error']:.3g} bound={rec['bound']:.6g}")
    else:
        for _, rec in separation_ratios(rows).iterrows():
            print(f"n={int(rec['n'])} eps={rec['epsilon']!r} laplace={rec['laplace']:.6g} "
                  f"expmech={rec['expmech']:.6g} ratio={rec['ratio']:.6g} "
                  f"laplace_bound={rec['laplace_bound']:.6g}")
    if spec.tail_gamma is not None:
        for rec in laplace_tail_experiment(rows, spec.tail_gamma):
            print(f"eps={rec['epsilon']!r} gamma={rec['gamma']!r} threshold={rec['threshold']:.6g} "
                  f"fraction={rec['fraction']:.6g} within={str(rec['within']).lower()}")
    print(f"{len(rows)} rows")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstdp", description="Differentially private MST release toolkit")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--base-dir", type=Path, default=None, help="Resolve relative paths against this directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="Generate a graph family instance")
    p.add_argument("--family", required=True, choices=sorted(GENERATORS))
    p.add_argument("--params", nargs="*", default=[], help="key=value pairs, e.g. n=20 k=4 seed=1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mst", help="Print the exact MST and its weight")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", required=True)
    p.set_defaults(func=cmd_mst)

    p = sub.add_parser("release", help="Release a private spanning tree")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--mech", required=True, choices=sorted(MECHANISMS))
    p.add_argument("--rel", choices=[r.value for r in NeighborRelation], default="l1")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("diam", help="Tree-space diameter (R0, optionally exact D)")
    p.add_argument("--graph", required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_diam)

    p = sub.add_parser("dissimilar", help="Build a dissimilar tree set")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dissimilar)

    p = sub.add_parser("lowerbound", help="Concrete packing lower bound for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rel", choices=[r.value for r in NeighborRelation], default="l1")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("audit", help="Exact privacy audit over neighbouring directions")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--mech", choices=sorted(MECHANISMS), default="expmech")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rel", choices=[r.value for r in NeighborRelation], default="l1")
    p.add_argument("--dirs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="Run a TOML experiment spec and write CSV rows")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors count as validation errors
        return 1 if e.code else 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    try:
        return args.func(args, FileManager(args.base_dir))
    except MSTPrivacyError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=args.verbose)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
