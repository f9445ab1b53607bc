"""Command-line surface: samplers, exact kernels, codecs, and statistics.

Every command writes JSON-lines records to standard output, one per result,
each carrying the command name, its parameters, the seed, a replica index
for sampled output, and the outputs themselves.  Replaying the same
(command, parameters, seed) reproduces the records byte for byte; wall
time is reported on standard error so it never perturbs replay.  Exact
probabilities are printed as "numerator/denominator" strings.

Exit codes: 0 success, 1 usage or input error, 2 invariant or axiom
failure, 3 statistical-test failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import didendritic, ensembles, kernel, remy, stats, trees
from .rng import make_rng, split_rng

ENV_SEED = "REMYCHAIN_SEED"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2
EXIT_STAT = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE) -> None:
        super().__init__(message)
        self.code = code


@dataclass
class ExperimentRecord:
    """One emitted result; wall time stays out of the replayable payload."""

    command: str
    params: dict[str, Any]
    seed: int | None
    outputs: dict[str, Any]
    replica: int | None = None
    wall_time_s: float = field(default=0.0, compare=False)

    def payload(self) -> dict[str, Any]:
        body: dict[str, Any] = {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
        }
        if self.replica is not None:
            body["replica"] = self.replica
        body["outputs"] = self.outputs
        return body


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


def _emit(rec: ExperimentRecord, pretty: bool, out=None) -> None:
    out = out or sys.stdout
    if pretty:
        bits = [f"{rec.command}"]
        if rec.replica is not None:
            bits.append(f"[{rec.replica}]")
        for k, v in rec.outputs.items():
            bits.append(f"{k}={v}")
        print(" ".join(str(b) for b in bits), file=out)
    else:
        print(json.dumps(rec.payload(), sort_keys=True, default=str), file=out)


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as e:
            raise CliError(f"bad {ENV_SEED} value: {env}") from e
    return 0


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from e


def _parse_tree_arg(text: str) -> trees.BinaryTree:
    try:
        return trees.parse_tree(text)
    except (trees.ParseError, trees.TreeInvariantError) as e:
        raise CliError(f"bad tree {text!r}: {e}") from e


def _parse_labeled_arg(text: str) -> trees.LabeledBinaryTree:
    try:
        return trees.decode_labeled_tree(text)
    except (trees.ParseError, trees.TreeInvariantError, ValueError) as e:
        raise CliError(f"bad labeled tree {text!r}: {e}") from e


# ---------------------------------------------------------------------------
# Command implementations


def cmd_chain(args) -> int:
    seed = _resolve_seed(args)
    streams = split_rng(make_rng(seed), args.reps)
    for r, rng in enumerate(streams):
        t = remy.remy_chain(args.n, rng)
        rec = ExperimentRecord(
            "chain",
            {"n": args.n, "reps": args.reps},
            seed,
            {"tree": trees.encode_tree(t)},
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def cmd_bridge(args) -> int:
    seed = _resolve_seed(args)
    target = _parse_tree_arg(args.target)
    streams = split_rng(make_rng(seed), args.reps)
    for r, rng in enumerate(streams):
        path = remy.finite_bridge(target, rng)
        rec = ExperimentRecord(
            "bridge",
            {"target": trees.encode_tree(target), "reps": args.reps},
            seed,
            {"path": [trees.encode_tree(t) for t in path]},
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def cmd_spine(args) -> int:
    seed = _resolve_seed(args)
    streams = split_rng(make_rng(seed), args.reps)
    for r, rng in enumerate(streams):
        state = remy.spine_chain(args.n, rng)
        rec = ExperimentRecord(
            "spine",
            {"n": args.n, "reps": args.reps},
            seed,
            {
                "tosses": "".join(str(b) for b in state.tosses),
                "tree": trees.encode_tree(remy.spine_tree(state)),
            },
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def cmd_dyadic(args) -> int:
    seed = _resolve_seed(args)
    streams = split_rng(make_rng(seed), args.reps)
    for r, rng in enumerate(streams):
        t = remy.dyadic_bridge_sample(args.n, rng)
        rec = ExperimentRecord(
            "dyadic",
            {"n": args.n, "reps": args.reps},
            seed,
            {"tree": trees.encode_tree(t)},
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def cmd_kernel(args) -> int:
    s = _parse_tree_arg(args.s)
    t = _parse_tree_arg(args.t)
    if t.n_leaves < s.n_leaves:
        raise CliError("target has fewer leaves than source")
    rec = ExperimentRecord(
        "kernel",
        {"s": trees.encode_tree(s), "t": trees.encode_tree(t)},
        None,
        {
            "count": kernel.count_embeddings(s, t),
            "transition_prob": frac_str(kernel.transition_prob(s, t)),
            "martin_kernel": frac_str(kernel.martin_kernel(s, t)),
        },
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def cmd_embeddings(args) -> int:
    s = _parse_tree_arg(args.s)
    t = _parse_tree_arg(args.t)
    outputs: dict[str, Any] = {"count": kernel.count_embeddings(s, t)}
    if t.n_leaves <= kernel.MAX_ENUMERATE_EMBEDDINGS_LEAVES:
        embs = kernel.enumerate_embeddings(s, t)
        outputs["embeddings"] = [
            [[trees.word_str(u), trees.word_str(v)] for u, v in e.pairs] for e in embs
        ]
    else:
        outputs["enumeration_skipped"] = True
    rec = ExperimentRecord(
        "embeddings",
        {"s": trees.encode_tree(s), "t": trees.encode_tree(t)},
        None,
        outputs,
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def cmd_check_harmonic(args) -> int:
    if args.max_leaves < 2:
        raise CliError("--max-leaves must be at least 2")
    failures: list[str] = []
    total = 0
    for m in range(1, args.max_leaves):
        for s in trees.enumerate_trees(m):
            total += 1
            if not kernel.check_harmonic(kernel.harmonic_h_complete, s):
                failures.append(trees.encode_tree(s))
    rec = ExperimentRecord(
        "check-harmonic",
        {"max_leaves": args.max_leaves},
        None,
        {"trees_checked": total, "all_pass": not failures, "failures": failures},
    )
    _emit(rec, args.pretty)
    return EXIT_OK if not failures else EXIT_INVARIANT


def cmd_kernel_limit(args) -> int:
    s = _parse_tree_arg(args.s)
    if s.n_leaves < 2:
        raise CliError("need a tree with at least two leaves")
    if args.kmax < 1 or args.kmax > kernel.MAX_COMPLETE_DEPTH:
        raise CliError(f"--kmax must be in 1..{kernel.MAX_COMPLETE_DEPTH}")
    limit = kernel.kernel_limit_complete(s)
    rows = []
    for k in range(1, args.kmax + 1):
        if 2**k < s.n_leaves:
            continue  # complete tree of depth k: too few leaves to host s
        val = kernel.martin_kernel(s, kernel.complete_tree(k))
        rows.append(
            {
                "k": k,
                "kernel": frac_str(val),
                "abs_error": float(abs(val - limit)),
            }
        )
    rec = ExperimentRecord(
        "kernel-limit",
        {"s": trees.encode_tree(s), "kmax": args.kmax},
        None,
        {"limit": frac_str(limit), "values": rows},
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def cmd_encode(args) -> int:
    lt = _parse_labeled_arg(args.t)
    if lt.n_leaves < 3:
        raise CliError("didendritic encoding needs at least three leaves")
    arr = didendritic.encode(lt)
    rec = ExperimentRecord(
        "encode",
        {"t": trees.encode_labeled_tree(lt)},
        None,
        {"array": didendritic.to_lines(arr)},
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def cmd_decode(args) -> int:
    text = _read_text(args.infile)
    try:
        arr = didendritic.from_lines(text.splitlines())
        lt = didendritic.decode(arr)
    except didendritic.DidendriticError as e:
        print(f"decode failed: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    rec = ExperimentRecord(
        "decode",
        {"in": args.infile},
        None,
        {"tree": trees.encode_labeled_tree(lt)},
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def cmd_check(args) -> int:
    text = _read_text(args.infile)
    try:
        arr = didendritic.from_lines(text.splitlines())
    except didendritic.DidendriticError as e:
        print(f"malformed array: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    violations = didendritic.axioms_check(arr)
    rec = ExperimentRecord(
        "check",
        {"in": args.infile},
        None,
        {"violations": violations, "ok": not violations},
    )
    _emit(rec, args.pretty)
    return EXIT_OK if not violations else EXIT_INVARIANT


def _build_ensemble(args, rng) -> ensembles.Ensemble:
    if args.kind == "interval":
        return ensembles.IntervalEnsemble()
    if args.kind == "dyadic":
        return ensembles.DyadicEnsemble()
    if args.kind == "excursion":
        if args.grid:
            grid = ensembles.parse_grid(_read_text(args.grid))
        elif args.dyck_n:
            grid = ensembles.random_dyck_path(args.dyck_n, rng)
        else:
            raise CliError("excursion ensemble needs --grid FILE or --dyck-n N")
        return ensembles.ExcursionEnsemble(grid)
    raise CliError(f"unknown ensemble kind {args.kind!r}")


def cmd_ensemble_sample(args) -> int:
    seed = _resolve_seed(args)
    root = make_rng(seed)
    ens = _build_ensemble(args, root)
    params = {
        "kind": args.kind,
        "m": args.m,
        "reps": args.reps,
        "grid": args.grid,
        "dyck_n": args.dyck_n,
    }
    streams = split_rng(root, args.reps)
    for r, rng in enumerate(streams):
        try:
            lt = ensembles.sample_didendritic(ens, args.m, rng)
        except ensembles.RetryLimitError as e:
            print(f"sampling failed: {e}", file=sys.stderr)
            return EXIT_INVARIANT
        rec = ExperimentRecord(
            "ensemble-sample",
            params,
            seed,
            {"tree": trees.encode_labeled_tree(lt)},
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def cmd_dyck(args) -> int:
    seed = _resolve_seed(args)
    streams = split_rng(make_rng(seed), args.reps)
    for r, rng in enumerate(streams):
        grid = ensembles.random_dyck_path(args.n, rng)
        rec = ExperimentRecord(
            "dyck",
            {"n": args.n, "reps": args.reps},
            seed,
            {"grid": ensembles.format_grid(grid)},
            replica=r,
        )
        _emit(rec, args.pretty)
    return EXIT_OK


def _hierarchy_json(node: ensembles.Hierarchy) -> dict[str, Any]:
    if node.is_leaf:
        return {"label": node.label, "height": node.height}
    return {
        "height": node.height,
        "children": [_hierarchy_json(c) for c in node.children],
    }


def cmd_ultrametric(args) -> int:
    text = _read_text(args.infile)
    rows = [
        [float(x) for x in line.split("\t")]
        for line in text.splitlines()
        if line.strip()
    ]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise CliError("matrix must be square TSV")
    try:
        tree = ensembles.ultrametric_tree(np.array(rows), tol=args.tol)
    except (ensembles.UltrametricError, ValueError) as e:
        print(f"ultrametric reconstruction failed: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    rec = ExperimentRecord(
        "ultrametric",
        {"in": args.infile, "tol": args.tol},
        None,
        {"hierarchy": _hierarchy_json(tree)},
    )
    _emit(rec, args.pretty)
    return EXIT_OK


def _load_law(path: str) -> dict[str, Any]:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise CliError(f"bad JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise CliError(f"{path} must hold a JSON object")
    return data


def cmd_stats(args) -> int:
    if args.mode == "chi2":
        observed = {k: int(v) for k, v in _load_law(args.observed).items()}
        expected = {k: parse_frac(str(v)) for k, v in _load_law(args.expected).items()}
        try:
            report = stats.chi_square(observed, expected, args.significance)
        except ValueError as e:
            raise CliError(str(e)) from e
        rec = ExperimentRecord(
            "stats",
            {
                "mode": "chi2",
                "observed": args.observed,
                "expected": args.expected,
                "significance": args.significance,
            },
            None,
            {
                "statistic": report.statistic,
                "threshold": report.threshold,
                "dof": report.dof,
                "sample_size": report.sample_size,
                "passed": report.passed,
            },
        )
        _emit(rec, args.pretty)
        return EXIT_OK if report.passed else EXIT_STAT
    if args.mode == "tv":
        p = {k: parse_frac(str(v)) for k, v in _load_law(args.observed).items()}
        q = {k: parse_frac(str(v)) for k, v in _load_law(args.expected).items()}
        rec = ExperimentRecord(
            "stats",
            {"mode": "tv", "observed": args.observed, "expected": args.expected},
            None,
            {"tv": stats.tv_distance(p, q)},
        )
        _emit(rec, args.pretty)
        return EXIT_OK
    raise CliError(f"unknown stats mode {args.mode!r}")


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse usage errors to exit code 1
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="remychain", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seeded=True, reps=True):
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        if seeded:
            p.add_argument("--seed", type=int, default=None)
        if reps:
            p.add_argument("--reps", type=int, default=1)

    p = sub.add_parser("chain", help="run the growth chain")
    p.add_argument("--n", type=int, required=True, help="final level (n+1 leaves)")
    common(p)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("bridge", help="sample a bridge path to a target tree")
    p.add_argument("--target", required=True)
    common(p)
    p.set_defaults(func=cmd_bridge)

    p = sub.add_parser("spine", help="run the coin-tossing bridge")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_spine)

    p = sub.add_parser("dyadic", help="sample the coin-sequence bridge tree")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_dyadic)

    p = sub.add_parser("kernel", help="exact transition and kernel values")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("embeddings", help="count and list embeddings of s into t")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_embeddings)

    p = sub.add_parser("check-harmonic", help="verify the harmonic identity")
    p.add_argument("--max-leaves", type=int, required=True)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_check_harmonic)

    p = sub.add_parser("kernel-limit", help="kernel values along complete trees")
    p.add_argument("--s", required=True)
    p.add_argument("--kmax", type=int, required=True)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_kernel_limit)

    p = sub.add_parser("encode", help="labeled tree to triple-type array")
    p.add_argument("--t", required=True)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="triple-type array lines to labeled tree")
    p.add_argument("--in", dest="infile", default="-")
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("check", help="axioms check on an array file")
    p.add_argument("--in", dest="infile", default="-")
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ensemble-sample", help="sample trees from an ensemble")
    p.add_argument("--kind", choices=["interval", "dyadic", "excursion"], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--grid", default=None, help="excursion grid file")
    p.add_argument("--dyck-n", type=int, default=None, help="random grid size")
    common(p)
    p.set_defaults(func=cmd_ensemble_sample)

    p = sub.add_parser("dyck", help="sample uniform Dyck paths")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_dyck)

    p = sub.add_parser("ultrametric", help="merge tree of a TSV distance matrix")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tol", type=float, default=ensembles.ULTRAMETRIC_TOL)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_ultrametric)

    p = sub.add_parser("stats", help="chi-square or total-variation utilities")
    p.add_argument("--mode", choices=["chi2", "tv"], required=True)
    p.add_argument("--observed", required=True, help="JSON file of counts or probs")
    p.add_argument("--expected", required=True, help="JSON file of probabilities")
    p.add_argument("--significance", type=float, default=0.01)
    common(p, seeded=False, reps=False)
    p.set_defaults(func=cmd_stats)

    return top


def dispatch(argv: Sequence[str] | None = None) -> int:
    t0 = time.monotonic()
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        code = args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (trees.ParseError, trees.TreeInvariantError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        elapsed = time.monotonic() - t0
        print(f"wall-time: {elapsed:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
