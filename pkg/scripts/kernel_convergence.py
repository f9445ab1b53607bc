#!/usr/bin/env python3
"""Tabulate kernel values along complete binary trees against their limit.

For every shape s at the chosen level, prints K(s, complete(k)) for a run of
depths next to the limit C_m * kappa(s), with absolute and relative errors.
Trees with at most three leaves sit at the limit from the first depth that
fits them; larger shapes approach it geometrically.
"""

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from remychain import (
    complete_tree,
    encode_tree,
    enumerate_trees,
    kernel_limit_complete,
    martin_kernel,
)


@dataclass(frozen=True)
class Config:
    level: int = 3
    depths: tuple[int, ...] = field(default=(4, 6, 8, 10, 12))


def parse_config(argv) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--level", type=int, default=Config().level)
    ap.add_argument(
        "--depths",
        type=int,
        nargs="+",
        default=list(Config().depths),
        help="complete-tree depths to evaluate",
    )
    ns = ap.parse_args(argv)
    return Config(ns.level, tuple(ns.depths))


def main(argv=None) -> int:
    cfg = parse_config(argv)
    shapes = list(enumerate_trees(cfg.level))
    print(f"{len(shapes)} shapes at level {cfg.level}; depths {cfg.depths}")
    for s in shapes:
        limit = kernel_limit_complete(s)
        print(f"\n{encode_tree(s)}   limit = {limit} = {float(limit):.6f}")
        for k in cfg.depths:
            if 2**k < s.n_leaves:
                print(f"  depth {k:2d}: complete tree too small, skipped")
                continue
            val = martin_kernel(s, complete_tree(k))
            err = abs(val - limit)
            rel = err / limit if limit else Fraction(0)
            print(
                f"  depth {k:2d}: K = {float(val):.9f}"
                f"   abs err {float(err):.3e}   rel err {float(rel):.3e}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
