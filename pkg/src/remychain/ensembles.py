"""Concrete realizations of the chain's boundary as sampleable metric data.

An ensemble is a rooted continuum shape S with a base point, a sampling
measure, and a left/right rule W.  Leaves are sampled as points of S; for
any two samples the segment from the base point to their branch point is
comparable against other such segments, and W orients pairs at their branch
point.  Three segment comparisons classify every triple of samples, which
yields the triple-type table of a labeled tree; decoding the table turns
independent samples into the tree they span.

Three ensembles are provided: the unit interval with coin-flip orientation
(the comb limit), infinite fair-coin sequences under longest-common-prefix
metric (the complete-tree limit), and discrete excursion grids (contour
walks, including random Dyck paths).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

import numpy as np

from . import didendritic
from .didendritic import DidendriticArray, TripleType
from .remy import RetryLimitError
from .rng import Rng
from .trees import BinaryTree, HarrisPath, LabeledBinaryTree

DEFAULT_RETRY_CAP = 100
DYADIC_BIT_CAP = 64
ULTRAMETRIC_TOL = 1e-9


class SegmentRelation(Enum):
    """How the base-to-branch-point segment of one pair meets another's."""

    EQUAL = "equal"
    CONTAINS = "contains"  # first segment strictly contains the second
    CONTAINED = "contained"  # first segment strictly inside the second
    INCOMPARABLE = "incomparable"


class DegenerateSampleError(RuntimeError):
    """A draw hit a tie that valid samples avoid almost surely."""

    def __init__(self, message: str, labels: tuple[int, ...] = ()) -> None:
        super().__init__(message)
        self.labels = labels


class Ensemble(Protocol):
    def sample_point(self, rng: Rng) -> "PointHandle": ...

    def compare(self, a, b, c, d) -> SegmentRelation: ...

    def left_value(self, a, b) -> int: ...


class PointHandle:
    """Base for sampled points; aux is the auxiliary uniform coordinate."""

    aux: float

    @property
    def identity(self) -> object | None:
        """Hashable collision key, or None when collisions need no watch."""
        return None


# ---------------------------------------------------------------------------
# The unit interval with base point 0


@dataclass(frozen=True)
class IntervalPoint(PointHandle):
    x: float
    aux: float

    @property
    def identity(self) -> float:
        return self.x

    @property
    def depth(self) -> float:
        """Distance from the far end; pairwise tree distance is max of depths."""
        return 1.0 - self.x


class IntervalEnsemble:
    """S = [0, 1] rooted at 0 with uniform samples.

    The branch point of x and y is min(x, y), so segment comparison reduces
    to comparing minima.  The pair orientation is the fair coin of the point
    sitting at the branch point (the one with the smaller coordinate): it
    goes left when its auxiliary is below one half.  The other point's coin
    is read in reverse so that orientation is antisymmetric.
    """

    def sample_point(self, rng: Rng) -> IntervalPoint:
        return IntervalPoint(x=float(rng.random()), aux=float(rng.random()))

    def compare(
        self, a: IntervalPoint, b: IntervalPoint, c: IntervalPoint, d: IntervalPoint
    ) -> SegmentRelation:
        m1 = min(a.x, b.x)
        m2 = min(c.x, d.x)
        if m1 == m2:
            return SegmentRelation.EQUAL
        return SegmentRelation.CONTAINED if m1 < m2 else SegmentRelation.CONTAINS

    def left_value(self, a: IntervalPoint, b: IntervalPoint) -> int:
        if a.x < b.x:
            return 1 if a.aux < 0.5 else 0
        if b.x < a.x:
            return 1 if b.aux > 0.5 else 0
        return 0  # coordinate ties are probability zero and resampled


# ---------------------------------------------------------------------------
# Fair-coin sequences


class DyadicPoint(PointHandle):
    """A lazily extended fair bit stream.

    An initial block of bits is drawn eagerly from the sampling stream;
    deeper bits, rarely needed, come from a private generator whose seed
    was also drawn eagerly, so values never depend on later sampling.
    """

    __slots__ = ("aux", "_bits", "_ext_seed", "_gen")

    def __init__(self, bits: Sequence[int], ext_seed: int, aux: float) -> None:
        self.aux = aux
        self._bits = [int(b) for b in bits]
        self._ext_seed = ext_seed
        self._gen: Rng | None = None

    def bit(self, idx: int) -> int:
        while len(self._bits) <= idx:
            if self._gen is None:
                self._gen = np.random.Generator(np.random.PCG64(self._ext_seed))
            self._bits.extend(int(b) for b in self._gen.integers(0, 2, size=16))
        return self._bits[idx]

    def prefix(self, length: int) -> tuple[int, ...]:
        if length:
            self.bit(length - 1)
        return tuple(self._bits[:length])


class DyadicEnsemble:
    """Infinite fair-coin sequences; branch points are common prefixes.

    Streams are extended on demand and capped: a pair agreeing through
    `bit_cap` bits counts as a tie and is resampled by callers.
    Orientation is deterministic, by the first differing bit.
    """

    def __init__(self, bit_cap: int = DYADIC_BIT_CAP) -> None:
        self.bit_cap = bit_cap

    INITIAL_BLOCK = 16

    def sample_point(self, rng: Rng) -> DyadicPoint:
        return DyadicPoint(
            bits=rng.integers(0, 2, size=self.INITIAL_BLOCK),
            ext_seed=int(rng.integers(1 << 63)),
            aux=float(rng.random()),
        )

    def _lcp(self, a: DyadicPoint, b: DyadicPoint) -> int:
        if a is b:
            raise ValueError("need two distinct points")
        for d in range(self.bit_cap):
            if a.bit(d) != b.bit(d):
                return d
        raise DegenerateSampleError(
            f"streams agree through the {self.bit_cap}-bit cap"
        )

    def compare(
        self, a: DyadicPoint, b: DyadicPoint, c: DyadicPoint, d: DyadicPoint
    ) -> SegmentRelation:
        w1 = a.prefix(self._lcp(a, b))
        w2 = c.prefix(self._lcp(c, d))
        if w1 == w2:
            return SegmentRelation.EQUAL
        if len(w1) < len(w2) and w2[: len(w1)] == w1:
            return SegmentRelation.CONTAINED
        if len(w2) < len(w1) and w1[: len(w2)] == w2:
            return SegmentRelation.CONTAINS
        return SegmentRelation.INCOMPARABLE

    def left_value(self, a: DyadicPoint, b: DyadicPoint) -> int:
        return 1 if a.bit(self._lcp(a, b)) == 0 else 0


# ---------------------------------------------------------------------------
# Excursion grids


@dataclass(frozen=True)
class ExcursionGrid:
    """Nonnegative heights f(0), ..., f(2N) with f(0) = f(2N) = 0."""

    heights: tuple[float, ...]

    def __post_init__(self) -> None:
        h = self.heights
        if len(h) < 3 or len(h) % 2 == 0:
            raise ValueError("need an odd number of heights, at least three")
        if h[0] != 0 or h[-1] != 0:
            raise ValueError("the walk must start and end at zero")
        if any(x < 0 for x in h):
            raise ValueError("negative height")

    @property
    def is_dyck(self) -> bool:
        return all(
            abs(a - b) == 1 and float(a).is_integer()
            for a, b in zip(self.heights, self.heights[1:])
        )

    @staticmethod
    def from_harris(path: HarrisPath) -> "ExcursionGrid":
        return ExcursionGrid(tuple(float(x) for x in path.heights))


def parse_grid(text: str) -> ExcursionGrid:
    parts = text.split()
    if not parts:
        raise ValueError("empty grid")
    return ExcursionGrid(tuple(float(p) for p in parts))


def format_grid(grid: ExcursionGrid) -> str:
    out = []
    for x in grid.heights:
        out.append(str(int(x)) if float(x).is_integer() else repr(x))
    return " ".join(out)


def random_dyck_path(n: int, rng: Rng) -> ExcursionGrid:
    """Uniform Dyck path with 2n steps, by the cycle construction.

    Shuffle n+1 rises and n falls; exactly one rotation of the resulting
    cycle keeps every partial sum positive (start just after the last
    minimum of the prefix sums), and dropping its first rise leaves a
    nonnegative walk of length 2n hitting zero at the end, uniform over the
    catalan(n) possibilities.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    steps = np.concatenate([np.ones(n + 1, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    steps = rng.permutation(steps)
    sums = np.cumsum(steps)
    start = int(np.flatnonzero(sums == sums.min())[-1]) + 1
    rotated = np.concatenate([steps[start:], steps[:start]])
    heights = np.concatenate([[0], np.cumsum(rotated[1:])])
    return ExcursionGrid(tuple(float(x) for x in heights))


class _RangeMin:
    """Sparse table for range minima with leftmost argmin."""

    def __init__(self, values: Sequence[float]) -> None:
        vals = np.asarray(values, dtype=float)
        n = len(vals)
        self._val = [vals]
        self._arg = [np.arange(n)]
        k = 1
        while 2**k <= n:
            half = 2 ** (k - 1)
            m = n - 2**k + 1
            pv, pa = self._val[-1], self._arg[-1]
            left_v, right_v = pv[:m], pv[half : half + m]
            take_right = right_v < left_v
            self._val.append(np.where(take_right, right_v, left_v))
            self._arg.append(np.where(take_right, pa[half : half + m], pa[:m]))
            k += 1

    def query(self, lo: int, hi: int) -> tuple[float, int]:
        """(min value, leftmost argmin) over the inclusive window [lo, hi]."""
        k = (hi - lo + 1).bit_length() - 1
        j = hi - 2**k + 1
        v1, a1 = self._val[k][lo], self._arg[k][lo]
        v2, a2 = self._val[k][j], self._arg[k][j]
        if v2 < v1:
            return float(v2), int(a2)
        if v1 < v2:
            return float(v1), int(a1)
        return float(v1), int(min(a1, a2))


@dataclass(frozen=True)
class ExcursionPoint(PointHandle):
    index: int
    aux: float

    @property
    def identity(self) -> int:
        return self.index


class ExcursionEnsemble:
    """The tree coded by an excursion grid, sampled at uniform grid indices.

    Two indices branch at the minimum of the grid between them; positions
    are the same tree point exactly when the grid never dips below their
    common height between them.  Orientation follows index order, so W is
    deterministic.  `support` restricts sampling to a subset of indices
    (e.g. the leaf visits of a contour walk).
    """

    def __init__(
        self, grid: ExcursionGrid, support: Sequence[int] | None = None
    ) -> None:
        self.grid = grid
        self._rmq = _RangeMin(grid.heights)
        n = len(grid.heights)
        if support is None:
            self.support: tuple[int, ...] = tuple(range(n))
        else:
            self.support = tuple(int(i) for i in support)
            if len(set(self.support)) != len(self.support):
                raise ValueError("support indices must be distinct")
            if any(not 0 <= i < n for i in self.support):
                raise ValueError("support index out of range")

    def point_at(self, index: int, aux: float = 0.5) -> ExcursionPoint:
        if not 0 <= index < len(self.grid.heights):
            raise ValueError("index out of range")
        return ExcursionPoint(index=index, aux=aux)

    def sample_point(self, rng: Rng) -> ExcursionPoint:
        idx = self.support[rng.integers(len(self.support))]
        return ExcursionPoint(index=int(idx), aux=float(rng.random()))

    def _pair_class(self, a: ExcursionPoint, b: ExcursionPoint) -> tuple[float, int]:
        lo, hi = sorted((a.index, b.index))
        return self._rmq.query(lo, hi)

    def _ancestor_or_equal(self, c1: tuple[float, int], c2: tuple[float, int]) -> bool:
        h1, p1 = c1
        h2, p2 = c2
        if h1 > h2:
            return False
        lo, hi = sorted((p1, p2))
        return self._rmq.query(lo, hi)[0] >= h1

    def compare(
        self,
        a: ExcursionPoint,
        b: ExcursionPoint,
        c: ExcursionPoint,
        d: ExcursionPoint,
    ) -> SegmentRelation:
        c1 = self._pair_class(a, b)
        c2 = self._pair_class(c, d)
        anc12 = self._ancestor_or_equal(c1, c2)
        anc21 = self._ancestor_or_equal(c2, c1)
        if anc12 and anc21:
            return SegmentRelation.EQUAL
        if anc12:
            return SegmentRelation.CONTAINED
        if anc21:
            return SegmentRelation.CONTAINS
        return SegmentRelation.INCOMPARABLE

    def left_value(self, a: ExcursionPoint, b: ExcursionPoint) -> int:
        return 1 if a.index < b.index else 0


# ---------------------------------------------------------------------------
# From samples to labeled trees


def sample_points(
    ensemble: Ensemble, count: int, rng: Rng, retry_cap: int = DEFAULT_RETRY_CAP
) -> list[PointHandle]:
    """Draw `count` points, redrawing identity collisions up to the cap."""
    points: list[PointHandle] = []
    seen: set[object] = set()
    retries = 0
    while len(points) < count:
        p = ensemble.sample_point(rng)
        key = p.identity
        if key is not None and key in seen:
            retries += 1
            if retries > retry_cap:
                raise RetryLimitError("identity collisions persist; ensemble too coarse")
            continue
        if key is not None:
            seen.add(key)
        points.append(p)
    return points


def _classify_triple(
    ensemble: Ensemble,
    handles: Sequence[PointHandle],
    i: int,
    j: int,
    k: int,
) -> TripleType:
    """TripleType at sorted labels (i, j, k), 1-based into `handles`."""
    a, b, c = handles[i - 1], handles[j - 1], handles[k - 1]
    EQ, IN = SegmentRelation.EQUAL, SegmentRelation.CONTAINED
    r_ij_ik = ensemble.compare(a, b, a, c)
    r_ij_jk = ensemble.compare(a, b, b, c)
    r_ik_jk = ensemble.compare(a, c, b, c)
    if r_ij_ik == EQ and r_ij_jk == IN and r_ik_jk == IN:
        pair, solo = (j, k), i
    elif r_ij_jk == EQ and r_ij_ik == IN and r_ik_jk == SegmentRelation.CONTAINS:
        pair, solo = (i, k), j
    elif r_ik_jk == EQ and r_ij_ik == SegmentRelation.CONTAINS and r_ij_jk == SegmentRelation.CONTAINS:
        pair, solo = (i, j), k
    else:
        raise DegenerateSampleError(
            f"triple {(i, j, k)} fails the two-equal-one-larger pattern "
            f"({r_ij_ik.value}, {r_ij_jk.value}, {r_ik_jk.value})",
            labels=(i, j, k),
        )
    p, q = pair
    hp, hq, hs = handles[p - 1], handles[q - 1], handles[solo - 1]
    if ensemble.left_value(hp, hq) == 1:
        left_leaf, right_leaf = p, q
    else:
        left_leaf, right_leaf = q, p
    cherry_on_left = ensemble.left_value(hp, hs) == 1
    ordered = (i, j, k)
    return TripleType(
        (ordered.index(left_leaf), ordered.index(right_leaf)),
        ordered.index(solo),
        cherry_on_left,
    )


def didendritic_array_from_points(
    ensemble: Ensemble, handles: Sequence[PointHandle]
) -> DidendriticArray:
    """Triple-type table of the tree spanned by the handles (labels 1-based).

    Raises DegenerateSampleError when some triple has tied branch points.
    """
    n1 = len(handles)
    if n1 < 3:
        raise ValueError("need at least three points")
    entries: dict[tuple[int, int, int], TripleType] = {}
    for i, j, k in itertools.combinations(range(1, n1 + 1), 3):
        try:
            entries[(i, j, k)] = _classify_triple(ensemble, handles, i, j, k)
        except DegenerateSampleError as e:
            if e.labels:
                raise
            raise DegenerateSampleError(str(e), labels=(i, j, k)) from None
    return DidendriticArray(range(1, n1 + 1), entries)


def sample_didendritic(
    ensemble: Ensemble, m: int, rng: Rng, retry_cap: int = DEFAULT_RETRY_CAP
) -> LabeledBinaryTree:
    """Tree spanned by m+1 independent samples, labels in sampling order.

    Degenerate draws (tied branch points, identity collisions, capped
    streams) have the offending point redrawn, at most `retry_cap` times.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    handles = sample_points(ensemble, m + 1, rng, retry_cap)
    if m == 1:
        return _two_point_tree(ensemble, handles, rng, retry_cap)
    retries = 0
    while True:
        try:
            arr = didendritic_array_from_points(ensemble, handles)
            break
        except DegenerateSampleError as e:
            retries += 1
            if retries > retry_cap:
                raise RetryLimitError(
                    f"degenerate draws persist past {retry_cap} retries: {e}"
                ) from e
            # Rotate the redrawn member across retries: a tie can sit inside
            # any pair of the failing triple (two samples landing on one tree
            # point stay degenerate no matter how the third is redrawn).
            if e.labels:
                trip = sorted(e.labels, reverse=True)
                victim = trip[(retries - 1) % 3] - 1
            else:
                victim = len(handles) - 1
            handles[victim] = _fresh_point(ensemble, handles, rng, retry_cap)
    return didendritic.decode(arr)


def _fresh_point(
    ensemble: Ensemble,
    handles: Sequence[PointHandle],
    rng: Rng,
    retry_cap: int,
) -> PointHandle:
    taken = {p.identity for p in handles if p.identity is not None}
    for _ in range(retry_cap + 1):
        p = ensemble.sample_point(rng)
        if p.identity is None or p.identity not in taken:
            return p
    raise RetryLimitError("identity collisions persist; ensemble too coarse")


def _two_point_tree(
    ensemble: Ensemble,
    handles: list[PointHandle],
    rng: Rng,
    retry_cap: int,
) -> LabeledBinaryTree:
    from .trees import ALEPH

    retries = 0
    while True:
        try:
            first_left = ensemble.left_value(handles[0], handles[1]) == 1
            break
        except DegenerateSampleError:
            retries += 1
            if retries > retry_cap:
                raise RetryLimitError("degenerate pair persists") from None
            handles[1] = _fresh_point(ensemble, handles[:1], rng, retry_cap)
    labels = {(0,): 1, (1,): 2} if first_left else {(0,): 2, (1,): 1}
    return LabeledBinaryTree.from_labels(ALEPH, labels)


def check_ensemble_axioms(
    ensemble: Ensemble,
    n_triples: int,
    rng: Rng,
    retry_cap: int = DEFAULT_RETRY_CAP,
) -> list[str]:
    """Exact per-draw checks on sampled triples; empty when all hold.

    Each accepted draw must show two equal branch segments strictly inside
    the third, antisymmetric pair orientations, and the same orientation of
    the outer point against both cherry members.  Ties are redrawn.
    """
    violations: list[str] = []
    for rep in range(n_triples):
        for attempt in range(retry_cap + 1):
            handles = sample_points(ensemble, 3, rng, retry_cap)
            try:
                tt = _classify_triple(ensemble, handles, 1, 2, 3)
                break
            except DegenerateSampleError:
                continue
        else:
            raise RetryLimitError("degenerate triples persist; ensemble too coarse")
        for a, b in itertools.permutations(range(3), 2):
            va = ensemble.left_value(handles[a], handles[b])
            vb = ensemble.left_value(handles[b], handles[a])
            if va not in (0, 1) or va + vb != 1:
                violations.append(
                    f"draw {rep}: orientation of ({a + 1}, {b + 1}) is not "
                    f"antisymmetric ({va} vs {vb})"
                )
        solo = tt.outer
        x, y = tt.cherry
        v1 = ensemble.left_value(handles[solo], handles[x])
        v2 = ensemble.left_value(handles[solo], handles[y])
        if v1 != v2:
            violations.append(
                f"draw {rep}: outer point {solo + 1} is oriented differently "
                f"against the two cherry members ({v1} vs {v2})"
            )
    return violations


# ---------------------------------------------------------------------------
# Distance estimation and ultrametric reconstruction


class SampleView:
    """Triple queries over sampled points, labels 1..len(handles)."""

    def __init__(self, ensemble: Ensemble, handles: Sequence[PointHandle]) -> None:
        if len(handles) < 3:
            raise ValueError("need at least three points")
        self.ensemble = ensemble
        self.handles = list(handles)
        self.labels = tuple(range(1, len(handles) + 1))

    def below(self, i: int, j: int, p: int) -> bool:
        """Is sample p strictly below the branch point of samples i and j?"""
        if p == i or p == j:
            return False
        hi, hj, hp = (self.handles[x - 1] for x in (i, j, p))
        rel = self.ensemble.compare(hi, hj, hi, hp)
        return rel in (SegmentRelation.EQUAL, SegmentRelation.CONTAINED)


def estimate_distance(source, i: int, j: int) -> float:
    """Fraction of the other labels lying below the branch point of i and j.

    `source` is a DidendriticArray or a SampleView; with n+1 labels the sum
    runs over the n-1 labels other than i and j.
    """
    labels = source.labels
    if i == j or i not in labels or j not in labels:
        raise ValueError("need two distinct labels from the source")
    others = [p for p in labels if p != i and p != j]
    if not others:
        raise ValueError("need at least three labels")
    hits = sum(1 for p in others if source.below(i, j, p))
    return hits / len(others)


def distance_matrix(source) -> np.ndarray:
    """Symmetric matrix of estimate_distance over all label pairs."""
    labels = list(source.labels)
    n = len(labels)
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            d = estimate_distance(source, labels[a], labels[b])
            out[a, b] = out[b, a] = d
    return out


def attachment_distance(d_matrix: np.ndarray, i: int) -> float:
    """Half the distance from label i (1-based row) to its nearest neighbor."""
    n = d_matrix.shape[0]
    if not 1 <= i <= n:
        raise ValueError("label out of range")
    row = np.delete(d_matrix[i - 1], i - 1)
    return float(row.min()) / 2.0


@dataclass(frozen=True)
class Hierarchy:
    """Merge tree of an ultrametric; leaves carry 1-based labels."""

    height: float
    children: tuple["Hierarchy", ...]
    label: int | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaf_labels(self) -> list[int]:
        if self.is_leaf:
            return [self.label]
        out: list[int] = []
        for c in self.children:
            out.extend(c.leaf_labels())
        return out

    def canonical(self):
        """Nested shape with children sorted, heights and sides forgotten."""
        if self.is_leaf:
            return ("leaf", self.label)
        return ("node", tuple(sorted(c.canonical() for c in self.children)))


class UltrametricError(ValueError):
    """The matrix violates the strong triangle inequality."""


def ultrametric_tree(
    d_matrix: np.ndarray, tol: float = ULTRAMETRIC_TOL
) -> Hierarchy:
    """Single-linkage merge tree of an ultrametric distance matrix.

    Validates symmetry, a zero diagonal, nonnegativity, and the strong
    triangle inequality up to `tol`, naming a violating triple otherwise.
    Clusters merging at one common height become one node, so exact inputs
    reproduce the unordered shape of the tree they came from.
    """
    d = np.asarray(d_matrix, dtype=float)
    n = d.shape[0]
    if d.ndim != 2 or d.shape != (n, n) or n < 2:
        raise ValueError("need a square matrix of side at least 2")
    if not np.array_equal(d, d.T):
        raise ValueError("matrix is not symmetric")
    if any(d[i, i] != 0 for i in range(n)):
        raise ValueError("diagonal must be zero")
    if d.min() < 0:
        raise ValueError("negative distance")
    for j in range(n):
        bound = np.maximum.outer(d[:, j], d[j, :])
        bad = np.argwhere(d > bound + tol)
        if bad.size:
            i, k = bad[0]
            raise UltrametricError(
                f"d({i + 1},{k + 1}) = {d[i, k]} exceeds "
                f"max(d({i + 1},{j + 1}), d({j + 1},{k + 1})) = {bound[i, k]}"
            )

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    nodes: dict[int, Hierarchy] = {
        i: Hierarchy(height=0.0, children=(), label=i + 1) for i in range(n)
    }
    values = sorted(set(float(d[i, j]) for i in range(n) for j in range(i + 1, n)))
    for h in values:
        adj: dict[int, set[int]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                if d[i, j] == h:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        adj.setdefault(ri, set()).add(rj)
                        adj.setdefault(rj, set()).add(ri)
        seen: set[int] = set()
        for start in list(adj):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            kids = tuple(
                sorted(
                    (nodes.pop(r) for r in comp),
                    key=lambda node: min(node.leaf_labels()),
                )
            )
            members = list(comp)
            for r in members[1:]:
                parent[find(r)] = find(members[0])
            nodes[find(members[0])] = Hierarchy(height=h, children=kids)
    roots = list(nodes.values())
    if len(roots) != 1:
        raise ValueError("matrix does not connect all points")
    return roots[0]
