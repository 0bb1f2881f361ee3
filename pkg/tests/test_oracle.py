import pytest

from linarr import oracle
from linarr.arrangement import is_planar, is_projective
from linarr.counting import count_planar, count_projective
from linarr.tree import from_edge_list, path_tree, root_at, star_tree

F = __import__("fractions").Fraction


def test_enumerate_all_sizes():
    assert len(oracle.enumerate_all(path_tree(1))) == 1
    assert len(oracle.enumerate_all(path_tree(3))) == 6
    assert len(oracle.enumerate_all(path_tree(4))) == 24
    keys = [a.key() for a in oracle.enumerate_all(path_tree(4))]
    assert keys == sorted(keys)


def test_limits():
    with pytest.raises(oracle.EnumerationLimitError):
        oracle.enumerate_all(path_tree(9))
    with pytest.raises(oracle.EnumerationLimitError):
        oracle.enumerate_planar(path_tree(13))
    assert len(oracle.enumerate_all(path_tree(3), limit=3)) == 6


def test_planar_and_projective_sets():
    p3 = path_tree(3)
    assert len(oracle.enumerate_planar(p3)) == 6
    assert len(oracle.enumerate_planar(path_tree(4))) == 16
    assert len(oracle.enumerate_projective(root_at(p3, 0))) == 4


def test_brute_means():
    assert oracle.brute_expected_D(oracle.enumerate_all(path_tree(3))) == F(8, 3)
    assert oracle.brute_expected_D(oracle.enumerate_planar(path_tree(4))) == F(19, 4)
    assert oracle.brute_expected_D(oracle.enumerate_projective(root_at(path_tree(3), 0))) == F(5, 2)


@pytest.mark.parametrize(
    "tree",
    [path_tree(5), star_tree(5), from_edge_list(7, [(1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (5, 7)])],
)
def test_enumeration_equals_filter(tree):
    planar = oracle.enumerate_planar(tree)
    assert len(planar) == count_planar(tree) == len(set(planar))
    assert set(planar) == set(oracle.filter_all(tree, lambda a: is_planar(tree, a)))
    for r in range(tree.n):
        rooted = root_at(tree, r)
        proj = oracle.enumerate_projective(rooted)
        assert len(proj) == count_projective(rooted)
        assert set(proj) == set(oracle.filter_all(tree, lambda a: is_projective(rooted, a)))
        first = oracle.enumerate_projective_root_first(rooted)
        assert all(a.vertex_at[0] == r for a in first)


def test_chi_square_examples():
    res = oracle.chi_square_uniformity([100] * 6)
    assert res.statistic == 0 and res.passed and res.dof == 5
    res = oracle.chi_square_uniformity([600, 0, 0, 0, 0, 0], total=600)
    assert res.statistic == pytest.approx(3000) and not res.passed
    with pytest.raises(ValueError):
        oracle.chi_square_uniformity([])
    with pytest.raises(ValueError):
        oracle.chi_square_uniformity([5, 5], total=11)


def test_chi_square_critical_values():
    # tabulated upper quantiles at alpha = 0.001
    assert oracle.chi_square_critical(1, 0.001) == pytest.approx(10.828, abs=1e-3)
    assert oracle.chi_square_critical(15, 0.001) == pytest.approx(37.697, abs=1e-3)


def test_support_counts_rejects_outsiders():
    import numpy as np

    s = oracle.enumerate_projective(root_at(path_tree(3), 0))
    # order 1 0 2 covers the root 0 with edge 1-2
    bad = np.array([[1, 0, 2]])
    with pytest.raises(ValueError):
        oracle.support_counts(s, bad)
