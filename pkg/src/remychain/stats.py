"""Goodness-of-fit helpers for comparing sampled laws against exact ones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from scipy.stats import chi2


@dataclass(frozen=True)
class StatReport:
    """Outcome of one statistical check."""

    name: str
    statistic: float
    threshold: float
    passed: bool
    sample_size: int
    dof: int

    def line(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{self.name}: statistic {self.statistic:.4f} vs threshold "
            f"{self.threshold:.4f} (dof {self.dof}, n {self.sample_size}) "
            f"[{verdict}]"
        )


def tv_distance(p: Mapping, q: Mapping) -> float:
    """Total variation distance between two laws on a shared countable space."""
    keys = set(p) | set(q)
    total = Fraction(0)
    for k in keys:
        total += abs(Fraction(p.get(k, 0)) - Fraction(q.get(k, 0)))
    return float(total) / 2.0


def empirical_law(samples: Sequence) -> dict:
    """Observed frequencies as exact fractions of the sample size."""
    counts: dict = {}
    for s in samples:
        counts[s] = counts.get(s, 0) + 1
    n = len(samples)
    return {k: Fraction(v, n) for k, v in counts.items()}


def chi_square(
    observed: Mapping,
    expected: Mapping,
    significance: float = 0.01,
    name: str = "chi-square",
) -> StatReport:
    """Pearson goodness-of-fit with low-expectation cells pooled.

    `observed` maps outcomes to counts; `expected` maps the same outcomes to
    probabilities summing to one.  Outcomes are sorted by ascending expected
    probability and merged greedily until every pooled cell expects at least
    five counts; the statistic is compared against the upper `significance`
    quantile of the chi-square law with (cells - 1) degrees of freedom.
    Observed outcomes missing from `expected` are rejected, since any mass
    outside the support already falsifies the law.
    """
    extra = [k for k in observed if k not in expected]
    if extra:
        raise ValueError(f"observed outcomes outside the expected support: {extra[:5]}")
    total_prob = sum(Fraction(v) for v in expected.values())
    if abs(total_prob - 1) > Fraction(1, 10**12):
        raise ValueError(f"expected probabilities sum to {float(total_prob)}, not 1")
    n = sum(observed.values())
    if n <= 0:
        raise ValueError("need at least one observation")

    cells = sorted(expected.items(), key=lambda kv: (Fraction(kv[1]), repr(kv[0])))
    pooled: list[tuple[float, int]] = []
    acc_p = Fraction(0)
    acc_o = 0
    for key, prob in cells:
        acc_p += Fraction(prob)
        acc_o += observed.get(key, 0)
        if acc_p * n >= 5:
            pooled.append((float(acc_p), acc_o))
            acc_p = Fraction(0)
            acc_o = 0
    if acc_p > 0 or acc_o > 0:
        if pooled:
            last_p, last_o = pooled.pop()
            pooled.append((last_p + float(acc_p), last_o + acc_o))
        else:
            pooled.append((float(acc_p), acc_o))
    if len(pooled) < 2:
        raise ValueError("too few cells after pooling; need a larger sample")

    statistic = sum((o - n * p) ** 2 / (n * p) for p, o in pooled)
    dof = len(pooled) - 1
    threshold = float(chi2.ppf(1.0 - significance, dof))
    return StatReport(
        name=name,
        statistic=float(statistic),
        threshold=threshold,
        passed=statistic <= threshold,
        sample_size=n,
        dof=dof,
    )
