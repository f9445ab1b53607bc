#!/usr/bin/env python3
"""Compare the three boundary ensembles on four-leaf shape frequencies.

Each ensemble is sampled at m = 3 (four labels) and the unlabeled shape law
is compared against its reference:

  interval   vs the coin-tossing spine bridge at the same level (TV distance);
               both concentrate on the four comb shapes.
  dyadic     vs the exact shape probabilities of fair-bit streams
               (chi-square); the balanced shape carries weight 3/7.
  excursion  vs the uniform law on all five shapes (chi-square), drawing a
               fresh random Dyck grid per sample so the grid is averaged out.
"""

import argparse
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from remychain import (
    DyadicEnsemble,
    ExcursionEnsemble,
    IntervalEnsemble,
    catalan,
    chi_square,
    encode_tree,
    enumerate_trees,
    kappa_shape_prob,
    make_rng,
    random_dyck_path,
    sample_didendritic,
    spine_chain,
    spine_tree,
    tv_distance,
)


@dataclass(frozen=True)
class Config:
    reps: int = 20_000
    dyck_n: int = 400
    seed: int = 0
    # Three independent gates share one run, so each one is held to a
    # stricter level to keep the overall false-alarm rate low.
    significance: float = 0.001


def parse_config(argv) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=Config.reps)
    ap.add_argument("--dyck-n", type=int, default=Config.dyck_n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--significance", type=float, default=Config.significance)
    ns = ap.parse_args(argv)
    return Config(ns.reps, ns.dyck_n, ns.seed, ns.significance)


def show(name: str, counts: Counter, reps: int) -> None:
    print(f"\n{name} ({reps} samples)")
    for shape, c in sorted(counts.items(), key=lambda kv: -kv[1]):
        print(f"  {shape:22s} {c / reps:.4f}")


def main(argv=None) -> int:
    cfg = parse_config(argv)
    rng = make_rng(cfg.seed)
    ok = True

    interval = Counter(
        encode_tree(sample_didendritic(IntervalEnsemble(), 3, rng).tree)
        for _ in range(cfg.reps)
    )
    spine = Counter(
        encode_tree(spine_tree(spine_chain(3, rng))) for _ in range(cfg.reps)
    )
    show("interval ensemble", interval, cfg.reps)
    show("spine bridge", spine, cfg.reps)
    tv = float(
        tv_distance(
            {k: Fraction(v, cfg.reps) for k, v in interval.items()},
            {k: Fraction(v, cfg.reps) for k, v in spine.items()},
        )
    )
    print(f"interval vs spine bridge: TV = {tv:.4f}")
    ok = ok and tv < 0.05

    dyadic = Counter(
        encode_tree(sample_didendritic(DyadicEnsemble(), 3, rng).tree)
        for _ in range(cfg.reps)
    )
    show("dyadic ensemble", dyadic, cfg.reps)
    kappa_law = {encode_tree(s): kappa_shape_prob(s) for s in enumerate_trees(3)}
    report = chi_square(dict(dyadic), kappa_law, cfg.significance)
    print(f"dyadic vs exact shape probabilities: {report.line()}")
    ok = ok and report.passed

    excursion = Counter()
    for _ in range(cfg.reps):
        grid = random_dyck_path(cfg.dyck_n, rng)
        lt = sample_didendritic(ExcursionEnsemble(grid), 3, rng)
        excursion[encode_tree(lt.tree)] += 1
    show("excursion ensemble (fresh grid per draw)", excursion, cfg.reps)
    uniform = {
        encode_tree(s): Fraction(1, catalan(3)) for s in enumerate_trees(3)
    }
    report = chi_square(dict(excursion), uniform, cfg.significance)
    print(f"excursion vs uniform shapes: {report.line()}")
    ok = ok and report.passed

    print("\noverall:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
