"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's production algorithms:
embedding counts come from explicit subset enumeration, triple types from
direct mrca geometry, and tree shapes from a recursive canonical form, so
the fast implementations are checked against slow first-principles code.
"""

import itertools
from fractions import Fraction

import pytest

from remychain import (
    BinaryTree,
    LabeledBinaryTree,
    Order,
    enumerate_trees,
    mrca,
    order_query,
    spanned_subtree,
)


def subset_count_oracle(s: BinaryTree, t: BinaryTree) -> int:
    """Number of leaf subsets of t spanning exactly s, by enumeration."""
    k = s.n_leaves
    if k > t.n_leaves:
        return 0
    total = 0
    for combo in itertools.combinations(t.leaves, k):
        if spanned_subtree(t, combo) == s:
            total += 1
    return total


def spanned_shape_counter(t: BinaryTree, m: int) -> dict[BinaryTree, int]:
    """Counts of spanned shapes over all (m+1)-subsets of t's leaves."""
    counts: dict[BinaryTree, int] = {}
    for combo in itertools.combinations(t.leaves, m + 1):
        s = spanned_subtree(t, combo)
        counts[s] = counts.get(s, 0) + 1
    return counts


def triple_type_oracle(lt: LabeledBinaryTree, i: int, j: int, k: int):
    """(left cherry label, right cherry label, outer label, cherry_on_left)
    computed directly from mrca depths and order queries on the tree."""
    leaves = {lab: lt.leaf_of_label[lab] for lab in (i, j, k)}
    pairs = [frozenset(p) for p in ((i, j), (i, k), (j, k))]
    mrcas = {p: mrca(lt.tree, *(leaves[x] for x in p)) for p in pairs}
    deepest = max(pairs, key=lambda p: len(mrcas[p]))
    a, b = sorted(deepest)
    outer = next(x for x in (i, j, k) if x not in deepest)
    cherry_vertex = mrcas[deepest]
    if order_query(lt.tree, cherry_vertex, leaves[a]) == Order.ANCESTOR_LEFT:
        left_lab, right_lab = a, b
    else:
        left_lab, right_lab = b, a
    root_vertex = mrcas[frozenset((a, outer))]
    on_left = order_query(lt.tree, root_vertex, cherry_vertex) == Order.ANCESTOR_LEFT
    return left_lab, right_lab, outer, on_left


def tree_shape_canonical(lt: LabeledBinaryTree, v=()):
    """Label-decorated unordered canonical form, for hierarchy comparison."""
    if lt.tree.is_leaf(v):
        return ("leaf", lt.labels[v])
    return ("node", tuple(sorted(tree_shape_canonical(lt, v + (s,)) for s in (0, 1))))


def spanned_labeled_subtree(lt: LabeledBinaryTree, labels) -> LabeledBinaryTree:
    """Tree spanned by the given labels, relabeled 1..k preserving order."""
    from remychain import spanned_subtree_with_map

    chosen = sorted(labels)
    leaf_set = [lt.leaf_of_label[lab] for lab in chosen]
    shape, leaf_map = spanned_subtree_with_map(lt.tree, leaf_set)
    new_labels = {
        leaf_map[lt.leaf_of_label[lab]]: rank
        for rank, lab in enumerate(chosen, start=1)
    }
    return LabeledBinaryTree.from_labels(shape, new_labels)


def relabel(lt: LabeledBinaryTree, sigma) -> LabeledBinaryTree:
    """Apply a label permutation (dict) directly on the tree."""
    return LabeledBinaryTree.from_labels(
        lt.tree, {v: sigma[lab] for v, lab in lt.label_items}
    )


def all_trees_up_to(max_leaves: int):
    for m in range(max_leaves):
        yield from enumerate_trees(m)


def is_comb(t: BinaryTree) -> bool:
    """True when every internal vertex has at least one leaf child."""
    return all(
        t.is_leaf(v + (0,)) or t.is_leaf(v + (1,))
        for v in t.internal
    )


def three_sigma(count: int, n: int, p: Fraction) -> bool:
    """Is an observed count within three binomial standard deviations?"""
    mean = n * float(p)
    sd = (n * float(p) * (1.0 - float(p))) ** 0.5
    return abs(count - mean) <= 3.0 * sd


@pytest.fixture
def rng():
    from remychain import make_rng

    return make_rng(20260817)
