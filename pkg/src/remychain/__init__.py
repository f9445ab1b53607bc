"""Exact arithmetic and samplers for a uniform-binary-tree growth chain.

The package grows uniform binary plane trees one cherry at a time, computes
the chain's transition probabilities and its embedding-count kernel in
exact rationals, runs bridges conditioned on distant targets, encodes
leaf-labeled trees as triple-type arrays, and samples trees from continuum
limit objects (an interval with coin flips, fair bit streams, and
excursion grids), with statistics helpers to compare the laws.
"""

from .didendritic import (
    ALL_TRIPLE_TYPES,
    DidendriticArray,
    DidendriticError,
    TripleType,
    axioms_check,
    decode,
    encode,
    from_lines,
    left_of,
    parse_triple_type,
    permute,
    restrict,
    right_of,
    to_lines,
    triple_type,
)
from .ensembles import (
    DegenerateSampleError,
    DyadicEnsemble,
    DyadicPoint,
    ExcursionEnsemble,
    ExcursionGrid,
    ExcursionPoint,
    Hierarchy,
    IntervalEnsemble,
    IntervalPoint,
    PointHandle,
    SampleView,
    SegmentRelation,
    UltrametricError,
    attachment_distance,
    check_ensemble_axioms,
    didendritic_array_from_points,
    distance_matrix,
    estimate_distance,
    format_grid,
    parse_grid,
    random_dyck_path,
    sample_didendritic,
    sample_points,
    ultrametric_tree,
)
from .kernel import (
    Embedding,
    check_harmonic,
    complete_tree,
    count_embeddings,
    double_factorial_odd,
    enumerate_embeddings,
    h_transform_step_complete,
    h_transform_step_law,
    h_transform_transition_prob,
    h_transform_weights,
    harmonic_h_complete,
    kappa_shape_prob,
    kernel_identity_check,
    kernel_limit_complete,
    martin_kernel,
    sample_spanned_subtree,
    spanned_subtree,
    spanned_subtree_with_map,
    transition_prob,
)
from .remy import (
    ALEPH_LABELED,
    RetryLimitError,
    SpineState,
    apply_backward_move,
    apply_forward_move,
    backward_moves,
    backward_step,
    backward_step_law,
    backward_transition_prob,
    bridge_marginal_law,
    chain_push_forward,
    deterministic_unlabel_step,
    dyadic_bridge_sample,
    extract_choice,
    finite_bridge,
    forward_moves,
    forward_step_law,
    labeled_chain,
    labeled_chain_push_forward,
    labeled_forward_step,
    labeled_forward_step_law,
    remy_chain,
    remy_forward_step,
    spine_bridge_step,
    spine_chain,
    spine_tree,
)
from .rng import Rng, make_rng, split_rng
from .stats import StatReport, chi_square, empirical_law, tv_distance
from .trees import (
    ALEPH,
    SINGLETON,
    BinaryTree,
    HarrisPath,
    LabeledBinaryTree,
    Order,
    ParseError,
    TreeInvariantError,
    catalan,
    count_labeled_trees,
    decode_labeled_tree,
    decode_tree,
    encode_labeled_tree,
    encode_tree,
    enumerate_labeled_trees,
    enumerate_trees,
    format_word_set,
    harris_path,
    harris_tree,
    leaf_visit_indices,
    leaves_lex,
    mrca,
    order_query,
    parse_tree,
    parse_word_set,
    to_dot,
    validate_tree,
)

__version__ = "0.1.0"
