"""Command line interface: outputs, exit codes, seeds, file round-trips."""

import json

import pytest

from remychain import catalan, martin_kernel, transition_prob, decode_tree
from remychain.cli import EXIT_INVARIANT, EXIT_OK, EXIT_STAT, EXIT_USAGE, dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def records(out: str):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


# ---------------------------------------------------------------------------
# Exit codes


def test_unknown_command_is_usage_error(capsys):
    code, _, err = run(capsys, "no-such-command")
    assert code == EXIT_USAGE


def test_bad_tree_argument_is_usage_error(capsys):
    code, _, err = run(capsys, "kernel", "--s", "((", "--t", "(()())")
    assert code == EXIT_USAGE
    assert "error" in err


def test_negative_level_is_usage_error(capsys):
    code, _, _ = run(capsys, "chain", "--n", "0")
    assert code == EXIT_USAGE


def test_every_command_reports_wall_time(capsys):
    _, _, err = run(capsys, "chain", "--n", "3", "--seed", "1")
    assert "wall-time" in err


# ---------------------------------------------------------------------------
# Seeds and replay


def test_same_seed_replays_byte_identical(capsys):
    _, out1, _ = run(capsys, "chain", "--n", "6", "--seed", "9", "--reps", "4")
    _, out2, _ = run(capsys, "chain", "--n", "6", "--seed", "9", "--reps", "4")
    assert out1 == out2
    assert len(records(out1)) == 4


def test_different_seeds_differ(capsys):
    _, out1, _ = run(capsys, "chain", "--n", "8", "--seed", "1")
    _, out2, _ = run(capsys, "chain", "--n", "8", "--seed", "2")
    assert records(out1)[0]["outputs"] != records(out2)[0]["outputs"]


def test_env_seed_is_used(capsys, monkeypatch):
    monkeypatch.setenv("REMYCHAIN_SEED", "31")
    _, out_env, _ = run(capsys, "chain", "--n", "5")
    _, out_flag, _ = run(capsys, "chain", "--n", "5", "--seed", "31")
    assert records(out_env) == records(out_flag)


def test_flag_overrides_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("REMYCHAIN_SEED", "31")
    _, out, _ = run(capsys, "chain", "--n", "5", "--seed", "77")
    assert records(out)[0]["seed"] == 77


def test_bad_env_seed_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("REMYCHAIN_SEED", "not-a-number")
    code, _, err = run(capsys, "chain", "--n", "3")
    assert code == EXIT_USAGE


def test_replicas_are_distinct_streams(capsys):
    _, out, _ = run(capsys, "chain", "--n", "9", "--seed", "5", "--reps", "3")
    recs = records(out)
    assert [r["replica"] for r in recs] == [0, 1, 2]
    assert len({r["outputs"]["tree"] for r in recs}) > 1


# ---------------------------------------------------------------------------
# Values against the library


def test_kernel_command_matches_library(capsys):
    s, t = "(()())", "((()())(()()))"
    code, out, _ = run(capsys, "kernel", "--s", s, "--t", t)
    assert code == EXIT_OK
    rec = records(out)[0]
    s_tree, t_tree = decode_tree(s), decode_tree(t)
    p = transition_prob(s_tree, t_tree)
    k = martin_kernel(s_tree, t_tree)
    assert rec["outputs"]["transition_prob"] == f"{p.numerator}/{p.denominator}"
    assert rec["outputs"]["martin_kernel"] == f"{k.numerator}/{k.denominator}"


def test_chain_outputs_valid_trees(capsys):
    _, out, _ = run(capsys, "chain", "--n", "4", "--seed", "3")
    tree = decode_tree(records(out)[0]["outputs"]["tree"])
    assert tree.n_leaves == 5


def test_bridge_path_levels(capsys):
    target = "((()())(()()))"
    _, out, _ = run(capsys, "bridge", "--target", target, "--seed", "0")
    path = records(out)[0]["outputs"]["path"]
    assert path[-1] == target
    assert [decode_tree(p).n_leaves for p in path] == [2, 3, 4]


def test_check_harmonic_command(capsys):
    code, out, _ = run(capsys, "check-harmonic", "--max-leaves", "4")
    assert code == EXIT_OK
    rec = records(out)[0]
    assert rec["outputs"]["all_pass"] is True
    assert rec["outputs"]["failures"] == []


def test_kernel_limit_on_two_leaf_source_is_constant_one(capsys):
    code, out, _ = run(capsys, "kernel-limit", "--s", "(()())", "--kmax", "5")
    assert code == EXIT_OK
    outputs = records(out)[0]["outputs"]
    assert outputs["limit"] == "1/1"
    assert [row["kernel"] for row in outputs["values"]] == ["1/1"] * 5
    assert all(row["abs_error"] == 0.0 for row in outputs["values"])


def test_kernel_limit_skips_undersized_depths(capsys):
    code, out, _ = run(capsys, "kernel-limit", "--s", "((()())())", "--kmax", "4")
    assert code == EXIT_OK
    rows = records(out)[0]["outputs"]["values"]
    # Depth 1 has two leaves, too few to host a three-leaf tree, so the
    # table starts at depth 2, where the value already sits at its limit.
    assert [row["k"] for row in rows] == [2, 3, 4]
    assert all(row["abs_error"] == 0.0 for row in rows)


def test_dyck_command_deterministic(capsys):
    _, out1, _ = run(capsys, "dyck", "--n", "6", "--seed", "2", "--reps", "2")
    _, out2, _ = run(capsys, "dyck", "--n", "6", "--seed", "2", "--reps", "2")
    assert out1 == out2
    grid = records(out1)[0]["outputs"]["grid"]
    heights = [int(x) for x in grid.split()]
    assert len(heights) == 13 and heights[0] == heights[-1] == 0


# ---------------------------------------------------------------------------
# Array files through encode / decode / check


def test_encode_decode_round_trip(capsys, tmp_path):
    labeled = "(((1)(3))((2)(4)))"
    code, out, _ = run(capsys, "encode", "--t", labeled)
    assert code == EXIT_OK
    lines = records(out)[0]["outputs"]["array"]
    path = tmp_path / "arr.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "decode", "--in", str(path))
    assert code == EXIT_OK
    assert records(out)[0]["outputs"]["tree"] == labeled


def test_check_accepts_valid_array(capsys, tmp_path):
    _, out, _ = run(capsys, "encode", "--t", "(((1)(2))(3))")
    lines = records(out)[0]["outputs"]["array"]
    path = tmp_path / "ok.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check", "--in", str(path))
    assert code == EXIT_OK
    assert records(out)[0]["outputs"]["ok"] is True


def test_check_flags_corrupted_array(capsys, tmp_path):
    _, out, _ = run(capsys, "encode", "--t", "((((1)(2))(3))(4))")
    lines = records(out)[0]["outputs"]["array"]
    lines[0] = lines[0].rsplit(" ", 1)[0] + " c_ba"
    path = tmp_path / "bad.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check", "--in", str(path))
    assert code == EXIT_INVARIANT
    rec = records(out)[0]
    assert rec["outputs"]["ok"] is False
    assert rec["outputs"]["violations"]


def test_decode_rejects_contradictory_lines(capsys, tmp_path):
    path = tmp_path / "contradiction.txt"
    path.write_text("1 2 3 ab_c\n2 1 3 ab_c\n")
    code, _, err = run(capsys, "decode", "--in", str(path))
    assert code == EXIT_INVARIANT
    assert "decode failed" in err


def test_encode_needs_three_leaves(capsys):
    code, _, err = run(capsys, "encode", "--t", "((1)(2))")
    assert code == EXIT_USAGE


# ---------------------------------------------------------------------------
# Ensembles and grids


def test_ensemble_sample_interval(capsys):
    code, out, _ = run(
        capsys, "ensemble-sample", "--kind", "interval", "--m", "3", "--seed", "8"
    )
    assert code == EXIT_OK
    tree = records(out)[0]["outputs"]["tree"]
    assert tree.count("(") > 0


def test_ensemble_sample_excursion_needs_grid(capsys):
    code, _, err = run(capsys, "ensemble-sample", "--kind", "excursion", "--m", "2")
    assert code == EXIT_USAGE
    assert "grid" in err


def test_ensemble_sample_excursion_from_file(capsys, tmp_path):
    path = tmp_path / "grid.txt"
    path.write_text("0 1 2 1 2 1 0\n")
    code, out, _ = run(
        capsys,
        "ensemble-sample",
        "--kind",
        "excursion",
        "--m",
        "2",
        "--grid",
        str(path),
        "--seed",
        "4",
    )
    assert code == EXIT_OK
    assert records(out)[0]["outputs"]["tree"]


def test_ensemble_sample_excursion_random_grid(capsys):
    code, out, _ = run(
        capsys,
        "ensemble-sample",
        "--kind",
        "excursion",
        "--m",
        "2",
        "--dyck-n",
        "30",
        "--seed",
        "4",
    )
    assert code == EXIT_OK


# ---------------------------------------------------------------------------
# Ultrametric reconstruction


def test_ultrametric_from_tsv(capsys, tmp_path):
    path = tmp_path / "d.tsv"
    path.write_text("0\t0.2\t0.6\n0.2\t0\t0.6\n0.6\t0.6\t0\n")
    code, out, _ = run(capsys, "ultrametric", "--in", str(path))
    assert code == EXIT_OK
    h = records(out)[0]["outputs"]["hierarchy"]
    assert h["height"] == 0.6
    assert len(h["children"]) == 2


def test_ultrametric_flags_violation(capsys, tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("0\t0.2\t0.6\n0.2\t0\t0.3\n0.6\t0.3\t0\n")
    code, _, err = run(capsys, "ultrametric", "--in", str(path))
    assert code == EXIT_INVARIANT
    assert "failed" in err


def test_ultrametric_rejects_ragged_matrix(capsys, tmp_path):
    path = tmp_path / "ragged.tsv"
    path.write_text("0\t1\n1\n")
    code, _, _ = run(capsys, "ultrametric", "--in", str(path))
    assert code == EXIT_USAGE


# ---------------------------------------------------------------------------
# Stats utilities


def test_stats_chi2_pass_and_fail(capsys, tmp_path):
    obs = tmp_path / "obs.json"
    exp = tmp_path / "exp.json"
    exp.write_text(json.dumps({"a": "1/2", "b": "1/2"}))
    obs.write_text(json.dumps({"a": 501, "b": 499}))
    code, out, _ = run(
        capsys, "stats", "--mode", "chi2", "--observed", str(obs), "--expected", str(exp)
    )
    assert code == EXIT_OK
    assert records(out)[0]["outputs"]["passed"] is True
    obs.write_text(json.dumps({"a": 900, "b": 100}))
    code, out, _ = run(
        capsys, "stats", "--mode", "chi2", "--observed", str(obs), "--expected", str(exp)
    )
    assert code == EXIT_STAT
    assert records(out)[0]["outputs"]["passed"] is False


def test_stats_tv_mode(capsys, tmp_path):
    p = tmp_path / "p.json"
    q = tmp_path / "q.json"
    p.write_text(json.dumps({"a": "1/2", "b": "1/2"}))
    q.write_text(json.dumps({"a": "1/4", "b": "3/4"}))
    code, out, _ = run(
        capsys, "stats", "--mode", "tv", "--observed", str(p), "--expected", str(q)
    )
    assert code == EXIT_OK
    assert records(out)[0]["outputs"]["tv"] == 0.25


def test_stats_missing_file_is_usage_error(capsys, tmp_path):
    code, _, _ = run(
        capsys,
        "stats",
        "--mode",
        "tv",
        "--observed",
        str(tmp_path / "nope.json"),
        "--expected",
        str(tmp_path / "nope2.json"),
    )
    assert code == EXIT_USAGE


# ---------------------------------------------------------------------------
# Output formats


def test_pretty_output_is_line_oriented(capsys):
    code, out, _ = run(capsys, "kernel", "--s", "(()())", "--t", "((()())())", "--pretty")
    assert code == EXIT_OK
    assert "martin_kernel" in out
    with pytest.raises(json.JSONDecodeError):
        json.loads(out.splitlines()[0])


def test_json_output_has_sorted_keys(capsys):
    _, out, _ = run(capsys, "chain", "--n", "2", "--seed", "0")
    line = out.splitlines()[0]
    rec = json.loads(line)
    assert line == json.dumps(rec, sort_keys=True)


def test_embeddings_command_lists_all_maps(capsys):
    code, out, _ = run(capsys, "embeddings", "--s", "(()())", "--t", "((()())())")
    assert code == EXIT_OK
    rec = records(out)[0]
    assert rec["outputs"]["count"] == 3
    embs = rec["outputs"]["embeddings"]
    assert len(embs) == 3
    # Each map covers the three words of the two-leaf source exactly once.
    for pairs in embs:
        assert sorted(p[0] for p in pairs) == ["0", "1", "e"]
