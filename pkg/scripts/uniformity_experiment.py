#!/usr/bin/env python3
"""Check that the growth chain is uniform: exactly, then by simulation.

The exact half propagates the one-step law from the two-leaf start and
compares every entry with 1/C_n.  The Monte Carlo half runs the sampler at a
chosen level and applies a chi-square test against the uniform law, which
exercises the RNG plumbing rather than the arithmetic.
"""

import argparse
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from remychain import (
    catalan,
    chain_push_forward,
    chi_square,
    encode_tree,
    enumerate_trees,
    make_rng,
    remy_chain,
)


@dataclass(frozen=True)
class Config:
    max_level: int = 6
    mc_level: int = 5
    reps: int = 50_000
    seed: int = 0
    significance: float = 0.01


def parse_config(argv) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-level", type=int, default=Config.max_level)
    ap.add_argument("--mc-level", type=int, default=Config.mc_level)
    ap.add_argument("--reps", type=int, default=Config.reps)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--significance", type=float, default=Config.significance)
    ns = ap.parse_args(argv)
    return Config(ns.max_level, ns.mc_level, ns.reps, ns.seed, ns.significance)


def exact_check(cfg: Config) -> bool:
    ok = True
    for n in range(1, cfg.max_level + 1):
        t0 = time.monotonic()
        law = chain_push_forward(n)
        target = Fraction(1, catalan(n))
        bad = [s for s, p in law.items() if p != target]
        missing = catalan(n) - len(law)
        status = "exact" if not bad and not missing else "MISMATCH"
        print(
            f"level {n}: {len(law):4d} shapes, each 1/{catalan(n)}"
            f" -> {status} ({time.monotonic() - t0:.2f}s)"
        )
        ok = ok and status == "exact"
    return ok


def monte_carlo_check(cfg: Config) -> bool:
    rng = make_rng(cfg.seed)
    counts: dict[str, int] = {}
    for _ in range(cfg.reps):
        key = encode_tree(remy_chain(cfg.mc_level, rng))
        counts[key] = counts.get(key, 0) + 1
    uniform = {
        encode_tree(s): Fraction(1, catalan(cfg.mc_level))
        for s in enumerate_trees(cfg.mc_level)
    }
    report = chi_square(counts, uniform, cfg.significance)
    print(f"monte carlo at level {cfg.mc_level}: {report.line()}")
    return report.passed


def main(argv=None) -> int:
    cfg = parse_config(argv)
    ok = exact_check(cfg)
    ok = monte_carlo_check(cfg) and ok
    print("overall:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
