"""Counting, uniform sampling and exact expected dependency distance of
unconstrained, planar and projective linear arrangements of trees."""

from .arrangement import (
    Arrangement,
    count_crossings,
    edge_lengths,
    is_planar,
    is_projective,
    mean_dependency_distance,
    root_is_covered,
    sum_edge_lengths,
)
from .counting import (
    count_planar,
    count_projective,
    count_unconstrained,
    planar_projective_ratio,
    prob_crossing,
    prob_planar,
)
from .expectations import (
    UndefinedExpectationError,
    expected_anchor,
    expected_coanchor,
    expected_coanchor_root_fixed,
    expected_D_crossing,
    expected_D_planar,
    expected_D_planar_bfs,
    expected_D_planar_naive,
    expected_D_projective,
    expected_D_projective_all_roots,
    expected_D_projective_root_fixed,
    expected_D_unconstrained,
    expected_edge_length_planar,
    expected_edge_lengths_planar,
)
from .sampling import (
    SAMPLER_VERSION,
    make_rng,
    random_planar,
    random_projective,
    random_projective_gildea_temperley,
    random_unconstrained,
    sample_planar,
    sample_projective,
    sample_projective_gildea_temperley,
    sample_unconstrained,
)
from .tree import (
    FreeTree,
    RootedTree,
    TreeError,
    compute_directional_sizes,
    from_edge_list,
    from_head_vector,
    random_labeled_tree,
    root_at,
)

__version__ = "0.1.0"
