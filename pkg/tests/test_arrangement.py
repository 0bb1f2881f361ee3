import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linarr import oracle
from linarr.arrangement import (
    Arrangement,
    ArrangementSizeError,
    count_crossings,
    edge_lengths,
    is_planar,
    is_projective,
    mean_dependency_distance,
    root_is_covered,
    sum_edge_lengths,
)
from linarr.tree import from_head_vector, path_tree, root_at, star_tree

from .test_tree import trees

FIG1 = {
    "a": [2, 0, 4, 2],
    "b": [2, 0, 1, 5, 3],
    "c": [2, 3, 0, 3, 2, 7, 5, 4],
}
FIG2 = {"a": [2, 0, 4, 2, 7, 7, 4, 9, 2], "b": [2, 0, 2, 5, 2, 8, 8, 5]}


def test_arrangement_roundtrip():
    a = Arrangement.from_order([2, 0, 1])
    assert a.position.tolist() == [1, 2, 0]
    assert Arrangement.from_positions(a.position) == a
    assert a.to_text() == "3 1 2"
    assert Arrangement.from_text("3 1 2") == a
    assert a.reversed().key() == (1, 0, 2)
    with pytest.raises(ArrangementSizeError):
        Arrangement.from_order([0, 0, 1])
    with pytest.raises(ArrangementSizeError):
        Arrangement.from_positions([0, 3, 1])


def test_path_metrics():
    t = path_tree(3)
    a = Arrangement.from_order([0, 1, 2])
    assert sum_edge_lengths(t, a) == 2
    assert count_crossings(t, a) == 0
    b = Arrangement.from_order([1, 0, 2])
    assert edge_lengths(t, b).tolist() == [1, 2]
    assert mean_dependency_distance(t, b) == Fraction(3, 2)


def test_size_mismatch():
    with pytest.raises(ArrangementSizeError):
        sum_edge_lengths(path_tree(3), Arrangement.identity(4))


def test_crossing_example():
    # edge {0,1} spans positions 0..2, edge {2,3} spans 1..3
    t = path_tree(4)
    a = Arrangement.from_order([1, 3, 0, 2])
    assert count_crossings(t, a) == 1 and not is_planar(t, a)
    star = star_tree(4)
    for p in itertools.permutations(range(4)):
        assert count_crossings(star, Arrangement.from_order(p)) == 0


def test_fig1_classification():
    arr = lambda r: Arrangement.identity(r.n)
    ra, rb, rc = (from_head_vector(FIG1[k]) for k in "abc")
    assert is_projective(ra, arr(ra))
    assert is_planar(rb.base, arr(rb)) and not is_projective(rb, arr(rb))
    assert root_is_covered(rb, arr(rb))
    assert not is_planar(rc.base, arr(rc))
    assert count_crossings(rc, arr(rc)) == 1


def test_fig2_lengths():
    ra, rb = (from_head_vector(FIG2[k]) for k in "ab")
    assert sum_edge_lengths(ra.base, Arrangement.identity(9)) == 18
    assert sum_edge_lengths(rb.base, Arrangement.identity(8)) == 12


@settings(max_examples=80, deadline=None)
@given(trees(min_n=1, max_n=7), st.randoms(use_true_random=False))
def test_predicates_agree_with_vectorised(t, rnd):
    p = list(range(t.n))
    rnd.shuffle(p)
    a = Arrangement.from_order(p)
    planar = bool(oracle.crossing_free_mask(t, a.position[None, :])[0])
    assert is_planar(t, a) == planar == (count_crossings(t, a) == 0)
    cov = oracle.root_covered_mask(t, a.position[None, :])[0]
    for r in range(t.n):
        assert root_is_covered(root_at(t, r), a) == bool(cov[r])


@settings(max_examples=50, deadline=None)
@given(trees(min_n=2, max_n=12), st.randoms(use_true_random=False))
def test_reversal_invariance(t, rnd):
    p = list(range(t.n))
    rnd.shuffle(p)
    a = Arrangement.from_order(p)
    assert sum_edge_lengths(t, a) == sum_edge_lengths(t, a.reversed())
    assert count_crossings(t, a) == count_crossings(t, a.reversed())
