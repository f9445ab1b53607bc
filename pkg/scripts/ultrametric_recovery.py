#!/usr/bin/env python3
"""Estimate tree distances from samples and rebuild the merge hierarchy.

Part one samples the interval ensemble and tracks how the pair-distance
estimate (the fraction of other samples falling below a pair's branch point)
approaches the true distance max(1 - x_i, 1 - x_j) as the sample count
grows.  Part two walks the contour of a fixed small tree, estimates the full
distance matrix from its leaf visits, and feeds it to the single-linkage
reconstruction, which recovers the tree shape exactly.
"""

import argparse
import sys
from dataclasses import dataclass, field

from remychain import (
    ExcursionEnsemble,
    ExcursionPoint,
    Hierarchy,
    IntervalEnsemble,
    SampleView,
    decode_tree,
    distance_matrix,
    encode_tree,
    estimate_distance,
    harris_path,
    leaf_visit_indices,
    make_rng,
    sample_points,
    ultrametric_tree,
)


@dataclass(frozen=True)
class Config:
    sizes: tuple[int, ...] = field(default=(100, 1_000, 10_000))
    replicates: int = 50
    seed: int = 0
    tree: str = "(((()())())((()())(()())))"


def parse_config(argv) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(Config().sizes))
    ap.add_argument("--replicates", type=int, default=Config().replicates)
    ap.add_argument("--seed", type=int, default=Config().seed)
    ap.add_argument("--tree", default=Config().tree)
    ns = ap.parse_args(argv)
    return Config(tuple(ns.sizes), ns.replicates, ns.seed, ns.tree)


def error_trend(cfg: Config) -> bool:
    ens = IntervalEnsemble()
    rng = make_rng(cfg.seed)
    maes = []
    for n in cfg.sizes:
        errs = []
        for _ in range(cfg.replicates):
            pts = sample_points(ens, n, rng)
            view = SampleView(ens, pts)
            est = estimate_distance(view, 1, 2)
            truth = max(pts[0].depth, pts[1].depth)
            errs.append(abs(est - truth))
        mae = sum(errs) / len(errs)
        maes.append(mae)
        print(f"n = {n:6d}: mean absolute error {mae:.5f}")
    decreasing = all(a > b for a, b in zip(maes, maes[1:]))
    print("error trend:", "decreasing" if decreasing else "NOT decreasing")
    return decreasing


def render(node: Hierarchy, indent: str = "") -> None:
    if node.is_leaf:
        print(f"{indent}leaf {node.label}")
    else:
        print(f"{indent}merge at {node.height:.4f}")
        for child in node.children:
            render(child, indent + "  ")


def contour_reconstruction(cfg: Config) -> bool:
    t = decode_tree(cfg.tree)
    ens = ExcursionEnsemble(harris_path(t))
    handles = [
        ExcursionPoint(index=i, aux=0.0) for i in leaf_visit_indices(t)
    ]
    view = SampleView(ens, handles)
    d = distance_matrix(view)
    print(f"\ncontour distance matrix of {cfg.tree}:")
    for row in d:
        print("  " + " ".join(f"{x:.3f}" for x in row))
    tree = ultrametric_tree(d)
    render(tree)
    recovered = _shape_of(tree, t.n_leaves)
    print(f"recovered shape: {recovered}")
    print("matches input:", recovered == cfg.tree)
    return recovered == cfg.tree


def _shape_of(node: Hierarchy, n_leaves: int) -> str:
    """Parenthesis string of a binary hierarchy over lex-ordered leaves."""
    if node.is_leaf:
        return "()"
    if len(node.children) != 2:
        return "<not binary>"
    return "(" + "".join(_shape_of(c, n_leaves) for c in node.children) + ")"


def main(argv=None) -> int:
    cfg = parse_config(argv)
    ok = error_trend(cfg)
    ok = contour_reconstruction(cfg) and ok
    print("\noverall:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
