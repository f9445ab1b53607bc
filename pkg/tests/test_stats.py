"""Total variation, empirical laws, and the pooled chi-square check."""

from fractions import Fraction

import pytest

from remychain import StatReport, chi_square, empirical_law, make_rng, tv_distance


def test_tv_distance_identical_laws():
    p = {"a": Fraction(1, 3), "b": Fraction(2, 3)}
    assert tv_distance(p, p) == 0.0


def test_tv_distance_disjoint_supports():
    assert tv_distance({"a": 1}, {"b": 1}) == 1.0


def test_tv_distance_exact_fraction_arithmetic():
    p = {"a": Fraction(1, 3), "b": Fraction(2, 3)}
    q = {"a": Fraction(2, 3), "b": Fraction(1, 3)}
    assert tv_distance(p, q) == float(Fraction(1, 3))


def test_tv_distance_handles_missing_keys():
    p = {"a": Fraction(1, 2), "b": Fraction(1, 2)}
    q = {"a": Fraction(1, 2), "c": Fraction(1, 2)}
    assert tv_distance(p, q) == 0.5


def test_empirical_law_counts_samples():
    law = empirical_law(["x", "y", "x", "x"])
    assert law == {"x": Fraction(3, 4), "y": Fraction(1, 4)}


def test_chi_square_proportional_counts_pass():
    observed = {"a": 500, "b": 300, "c": 200}
    expected = {"a": Fraction(1, 2), "b": Fraction(3, 10), "c": Fraction(1, 5)}
    report = chi_square(observed, expected, significance=0.01, name="exact")
    assert isinstance(report, StatReport)
    assert report.statistic == 0.0
    assert report.passed
    assert report.sample_size == 1000
    assert "pass" in report.line()


def test_chi_square_detects_bias():
    observed = {"a": 900, "b": 100}
    expected = {"a": Fraction(1, 2), "b": Fraction(1, 2)}
    report = chi_square(observed, expected, significance=0.01, name="biased")
    assert not report.passed
    assert "FAIL" in report.line()


def test_chi_square_passes_honest_samples():
    rng = make_rng(4)
    expected = {k: Fraction(1, 6) for k in range(6)}
    draws = rng.integers(0, 6, size=30_000)
    observed: dict = {}
    for d in draws:
        observed[int(d)] = observed.get(int(d), 0) + 1
    assert chi_square(observed, expected).passed


def test_chi_square_pools_rare_cells():
    # each tiny cell expects 3 at n=150, so the two pool into one cell of 6
    observed = {"big": 144, "tiny1": 3, "tiny2": 3}
    expected = {
        "big": Fraction(24, 25),
        "tiny1": Fraction(1, 50),
        "tiny2": Fraction(1, 50),
    }
    report = chi_square(observed, expected)
    assert report.dof == 1  # two cells after pooling
    assert report.passed


def test_chi_square_rejects_unpoolable_law():
    # at n=100 the tiny cells drag everything into a single pool
    observed = {"big": 96, "tiny1": 2, "tiny2": 2}
    expected = {
        "big": Fraction(24, 25),
        "tiny1": Fraction(1, 50),
        "tiny2": Fraction(1, 50),
    }
    with pytest.raises(ValueError, match="pooling"):
        chi_square(observed, expected)


def test_chi_square_rejects_outside_support():
    with pytest.raises(ValueError, match="support"):
        chi_square({"a": 5, "z": 1}, {"a": Fraction(1)})


def test_chi_square_rejects_bad_probabilities():
    with pytest.raises(ValueError, match="sum"):
        chi_square({"a": 5}, {"a": Fraction(1, 2)})


def test_chi_square_rejects_empty_observations():
    with pytest.raises(ValueError):
        chi_square({}, {"a": Fraction(1)})


def test_chi_square_needs_two_pooled_cells():
    with pytest.raises(ValueError):
        chi_square({"a": 100}, {"a": Fraction(1)})


def test_report_line_format():
    report = StatReport(
        name="demo", statistic=1.5, threshold=9.2, passed=True, sample_size=10, dof=3
    )
    line = report.line()
    assert "demo" in line and "1.5000" in line and "9.2000" in line
