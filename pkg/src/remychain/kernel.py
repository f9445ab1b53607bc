"""Embedding counts and the space-time harmonic analysis of the growth chain.

An embedding of a tree s into a tree t maps leaves to leaves injectively,
preserving the left and right ancestor orders.  Such a map is uniquely
determined by the leaf images (internal vertices go to the mrcas of their
leaf sets), so embeddings correspond one to one with leaf subsets of t that
span a copy of s.  The count N(s, t) drives the transition probabilities of
the growth chain, the kernel K normalized at the three-vertex tree, and the
conditioned dynamics below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .rng import Rng
from .trees import (
    ALEPH,
    ROOT,
    BinaryTree,
    Vertex,
    catalan,
    enumerate_trees,
    validate_tree,
    word_str,
)

MAX_ENUMERATE_EMBEDDINGS_LEAVES = 10
MAX_COMPLETE_DEPTH = 16


def double_factorial_odd(m: int) -> int:
    """1 * 3 * ... * (2m-1); equals 1 when m = 0."""
    out = 1
    for k in range(1, m + 1):
        out *= 2 * k - 1
    return out


@lru_cache(maxsize=None)
def count_embeddings(s: BinaryTree, t: BinaryTree) -> int:
    """Number of order-preserving leaf-to-leaf embeddings of s into t.

    Two-table recursion over vertex pairs: g(u, v) counts embeddings of the
    subtree at u whose root lands exactly on v, and h(u, v) counts those
    landing on v or anywhere below it.
    """
    if s.n_leaves > t.n_leaves:
        return 0

    g: dict[tuple[Vertex, Vertex], int] = {}
    h: dict[tuple[Vertex, Vertex], int] = {}

    s_words, t_words = s.words, t.words

    def compute(u: Vertex, v: Vertex) -> int:
        key = (u, v)
        if key in h:
            return h[key]
        u_internal = u + (0,) in s_words
        v_internal = v + (0,) in t_words
        if not u_internal:
            exact = 0 if v_internal else 1
        elif not v_internal:
            exact = 0
        else:
            exact = compute(u + (0,), v + (0,)) * compute(u + (1,), v + (1,))
        g[key] = exact
        total = exact
        if v_internal:
            total += compute(u, v + (0,)) + compute(u, v + (1,))
        h[key] = total
        return total

    return compute(ROOT, ROOT)


def spanned_subtree_with_map(
    t: BinaryTree, leaf_set: Iterable[Vertex]
) -> tuple[BinaryTree, dict[Vertex, Vertex]]:
    """Plane tree spanned by a nonempty set of leaves of t.

    Returns the spanned shape together with the map from each chosen leaf of
    t to the leaf of the shape it becomes.
    """
    chosen = sorted(set(leaf_set))
    if not chosen:
        raise ValueError("need at least one leaf")
    for v in chosen:
        if v not in t.words or v + (0,) in t.words:
            raise ValueError(f"{word_str(v)} is not a leaf of t")

    words: set[Vertex] = set()
    mapping: dict[Vertex, Vertex] = {}

    def build(group: Sequence[Vertex], depth: int, prefix: Vertex) -> None:
        words.add(prefix)
        if len(group) == 1:
            mapping[group[0]] = prefix
            return
        # advance past the common prefix of the group, then split on the bit
        d = depth
        while all(w[d] == group[0][d] for w in group):
            d += 1
        left = [w for w in group if w[d] == 0]
        right = [w for w in group if w[d] == 1]
        build(left, d + 1, prefix + (0,))
        build(right, d + 1, prefix + (1,))

    build(chosen, 0, ROOT)
    return validate_tree(words), mapping


def spanned_subtree(t: BinaryTree, leaf_set: Iterable[Vertex]) -> BinaryTree:
    return spanned_subtree_with_map(t, leaf_set)[0]


def sample_spanned_subtree(t: BinaryTree, m: int, rng: Rng) -> BinaryTree:
    """Shape spanned by m+1 leaves of t drawn uniformly without replacement."""
    leaves = t.leaves
    if not 0 <= m + 1 <= len(leaves):
        raise ValueError(f"cannot choose {m + 1} of {len(leaves)} leaves")
    idx = rng.choice(len(leaves), size=m + 1, replace=False)
    return spanned_subtree(t, [leaves[i] for i in idx])


@dataclass(frozen=True)
class Embedding:
    """An order-preserving embedding, stored as a vertex-to-vertex map."""

    pairs: tuple[tuple[Vertex, Vertex], ...]

    @property
    def mapping(self) -> dict[Vertex, Vertex]:
        return dict(self.pairs)


def enumerate_embeddings(s: BinaryTree, t: BinaryTree) -> list[Embedding]:
    """All embeddings of s into t, via leaf subsets spanning a copy of s."""
    if t.n_leaves > MAX_ENUMERATE_EMBEDDINGS_LEAVES:
        raise ValueError(
            f"enumeration is guarded at {MAX_ENUMERATE_EMBEDDINGS_LEAVES} leaves"
        )
    out = []
    for subset in itertools.combinations(t.leaves, s.n_leaves):
        shape, mapping = spanned_subtree_with_map(t, subset)
        if shape != s:
            continue
        # leaf of s -> chosen leaf of t, then internal vertices by mrca
        leaf_to_t = {shape_leaf: tl for tl, shape_leaf in mapping.items()}
        pairs: dict[Vertex, Vertex] = dict()
        for u in s.words:
            below = [leaf_to_t[w] for w in s.leaves if w[: len(u)] == u]
            common = below[0]
            for w in below[1:]:
                k = 0
                for a, b in zip(common, w):
                    if a != b:
                        break
                    k += 1
                common = common[:k]
            pairs[u] = common
        out.append(Embedding(tuple(sorted(pairs.items()))))
    return out


# ---------------------------------------------------------------------------
# Transition probabilities and the kernel


def _check_growth_pair(s: BinaryTree, t: BinaryTree) -> tuple[int, int]:
    m = s.level
    n = t.level - s.level
    if n < 0:
        raise ValueError("t must have at least as many leaves as s")
    return m, n


def transition_prob(s: BinaryTree, t: BinaryTree) -> Fraction:
    """P{chain visits t at time level(t) | it is at s at time level(s)}."""
    m, n = _check_growth_pair(s, t)
    denom = 1
    for j in range(m, m + n):
        denom *= 2 * j + 1
    p = Fraction(1, denom) / 2**n
    for k in range(1, n + 1):
        p *= k
    return p * count_embeddings(s, t)


def martin_kernel(s: BinaryTree, t: BinaryTree) -> Fraction:
    """K(s, t), the transition probability normalized by the chain's law at t.

    Equals catalan(level(t)) * transition_prob(s, t); the closed form below
    avoids the factorials.  K(ALEPH, t) = 1 for every t.
    """
    m, n = _check_growth_pair(s, t)
    denom = 1
    for j in range(n + 1, m + n + 2):
        denom *= j
    return (
        Fraction(2**m * double_factorial_odd(m), denom) * count_embeddings(s, t)
    )


def kernel_identity_check(
    i: BinaryTree,
    k: BinaryTree,
    kernel: Callable[[BinaryTree, BinaryTree], Fraction] = martin_kernel,
) -> bool:
    """Does sum_j P(i, j) kernel(j, k) equal kernel(i, k) exactly?

    j runs over the level above i; P is the one-step growth law.
    """
    if i.level >= k.level:
        raise ValueError("need level(i) < level(k)")
    total = Fraction(0)
    for j in enumerate_trees(i.level + 1):
        p = transition_prob(i, j)
        if p:
            total += p * kernel(j, k)
    return total == kernel(i, k)


# ---------------------------------------------------------------------------
# The complete-tree boundary point


@lru_cache(maxsize=None)
def complete_tree(k: int) -> BinaryTree:
    """The full binary tree of depth k, with 2^k leaves."""
    if k < 0:
        raise ValueError("negative depth")
    if k > MAX_COMPLETE_DEPTH:
        raise ValueError(f"depth is guarded at {MAX_COMPLETE_DEPTH}")
    words = [
        w for d in range(k + 1) for w in itertools.product((0, 1), repeat=d)
    ]
    return BinaryTree(frozenset(words))


def kappa_shape_prob(s: BinaryTree) -> Fraction:
    """Probability that m+1 independent fair-coin sequences span the shape s.

    (m+1)! 2^{-m} prod_v (2^{gamma_v - 1} - 1)^{-1}, the product running over
    the m internal vertices with gamma_v leaves below v.
    """
    m = s.level
    if m < 1:
        raise ValueError("need at least two leaves")
    prob = Fraction(1, 2**m)
    for k in range(2, m + 2):
        prob *= k
    for v in s.internal:
        prob /= 2 ** (s.leaves_below(v) - 1) - 1
    return prob


def kernel_limit_complete(s: BinaryTree) -> Fraction:
    """lim_k K(s, complete_tree(k)) = catalan(m) * kappa_shape_prob(s)."""
    return catalan(s.level) * kappa_shape_prob(s)


def harmonic_h_complete(s: BinaryTree) -> Fraction:
    """The space-time harmonic function attached to the complete-tree limit.

    (2m-1)!! * prod_v (2^{#s(v)-1} - 1)^{-1} over internal vertices v, where
    #s(v) counts leaves below v.  Normalized so the three-vertex tree gets 1.
    """
    m = s.level
    if m < 1:
        raise ValueError("need at least two leaves")
    h = Fraction(double_factorial_odd(m))
    for v in s.internal:
        h /= 2 ** (s.leaves_below(v) - 1) - 1
    return h


def check_harmonic(
    h: Callable[[BinaryTree], Fraction], s: BinaryTree
) -> bool:
    """Does the one-step growth law from s preserve h exactly?"""
    from .remy import forward_step_law  # local import to avoid a cycle

    law = forward_step_law(s)
    return sum(p * h(t) for t, p in law.items()) == h(s)


# ---------------------------------------------------------------------------
# The chain conditioned to converge to the complete tree


def h_transform_weights(s: BinaryTree) -> dict[Vertex, Fraction]:
    """Vertex selection weights of the conditioned growth step.

    The weight of v multiplies, over proper ancestors u of v, the factor
    (2^{#s(u)-1} - 1) / (2^{#s(u)} - 1), times 1/(2^{#s(v)} - 1) with
    #s(v) = 1 at leaves.  The weights sum to one by telescoping.
    """
    if s.level < 1:
        raise ValueError("need at least two leaves")
    weights: dict[Vertex, Fraction] = {}
    for v in sorted(s.words):
        w = Fraction(1)
        for d in range(len(v)):
            cnt = s.leaves_below(v[:d])
            w *= Fraction(2 ** (cnt - 1) - 1, 2**cnt - 1)
        cnt_v = s.leaves_below(v)
        w /= 2**cnt_v - 1
        weights[v] = w
    total = sum(weights.values())
    if total != 1:
        raise AssertionError(f"selection weights sum to {total}, not 1")
    return weights


def h_transform_step_complete(s: BinaryTree, rng: Rng) -> BinaryTree:
    """One step of the chain conditioned on the complete-tree limit.

    Picks a vertex with the exact weights above, then clones it and
    reattaches its subtree to a fair-coin side, as in the plain growth step.
    """
    from .remy import apply_forward_move

    weights = h_transform_weights(s)
    vertices = sorted(weights)
    probs = [float(weights[v]) for v in vertices]
    v = vertices[rng.choice(len(vertices), p=probs)]
    side = int(rng.integers(2))
    return apply_forward_move(s, v, side)


def h_transform_step_law(s: BinaryTree) -> dict[BinaryTree, Fraction]:
    """Exact one-step law of h_transform_step_complete."""
    from .remy import apply_forward_move

    law: dict[BinaryTree, Fraction] = {}
    for v, w in h_transform_weights(s).items():
        for side in (0, 1):
            t = apply_forward_move(s, v, side)
            law[t] = law.get(t, Fraction(0)) + w / 2
    return law


def h_transform_transition_prob(s: BinaryTree, t: BinaryTree) -> Fraction:
    """Closed form for the conditioned one-step probability from s to t.

    (1/2) * prod_u (2^{#s(u)-1} - 1) / prod_v (2^{#t(v)-1} - 1) * N(s, t),
    with u and v running over the internal vertices of s and t.
    """
    if t.level != s.level + 1:
        raise ValueError("t must have exactly one more leaf than s")
    if s.level < 1:
        raise ValueError("need at least two leaves")
    num = 1
    for u in s.internal:
        num *= 2 ** (s.leaves_below(u) - 1) - 1
    den = 1
    for v in t.internal:
        den *= 2 ** (t.leaves_below(v) - 1) - 1
    return Fraction(num, 2 * den) * count_embeddings(s, t)
