"""Exact numbers of unconstrained, projective and planar arrangements."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

from .tree import FreeTree, RootedTree


def _prod_factorials(values) -> int:
    # degree sequences repeat a lot; exponentiate each distinct factorial once
    return math.prod(math.factorial(k) ** c for k, c in Counter(values).items())


def count_unconstrained(n: int) -> int:
    return math.factorial(n)


def count_projective(rooted: RootedTree) -> int:
    """Product over vertices of ``(out_degree + 1)!``."""
    return _prod_factorials((rooted.out_degree + 1).tolist())


def count_planar(tree: FreeTree) -> int:
    """``n`` times the product over vertices of ``degree!``."""
    return tree.n * _prod_factorials(tree.degrees.tolist())


def planar_projective_ratio(rooted: RootedTree) -> Fraction:
    """``N_planar / N_projective``, which reduces to ``n / (deg(root) + 1)``."""
    return Fraction(rooted.n, rooted.base.degree(rooted.root) + 1)


def prob_planar(tree: FreeTree) -> Fraction:
    return Fraction(count_planar(tree), count_unconstrained(tree.n))


def prob_crossing(tree: FreeTree) -> Fraction:
    return 1 - prob_planar(tree)
