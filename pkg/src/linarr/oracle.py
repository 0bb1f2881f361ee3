"""Brute-force ground truth for counts, expectations and samplers.

Nothing here uses a closed-form formula: arrangement classes are enumerated
outright, either by filtering all ``n!`` permutations or by iterating every
segment ordering of the projective/planar decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Mapping, Sequence

import numpy as np

from .arrangement import Arrangement, sum_edge_lengths
from .tree import FreeTree, RootedTree, root_at

Constraint = Literal["unconstrained", "planar", "projective"]

# limits are defaults, callers may pass their own
ALL_LIMIT = 8
CONSTRAINED_LIMIT = 12


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class ArrangementSet:
    tree: FreeTree
    constraint: Constraint
    root: int | None
    arrangements: tuple[Arrangement, ...]

    def __len__(self) -> int:
        return len(self.arrangements)

    def __iter__(self) -> Iterator[Arrangement]:
        return iter(self.arrangements)

    def index(self) -> dict[tuple[int, ...], int]:
        return {a.key(): i for i, a in enumerate(self.arrangements)}


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration limit {limit}")


def enumerate_all(tree: FreeTree, limit: int = ALL_LIMIT) -> ArrangementSet:
    _check_limit(tree.n, limit)
    arrs = tuple(Arrangement.from_order(p) for p in itertools.permutations(range(tree.n)))
    return ArrangementSet(tree, "unconstrained", None, arrs)


def _subtree_orders(children: Sequence[Sequence[int]], u: int) -> list[tuple[int, ...]]:
    """Every projective linearization of the subtree hanging from ``u``."""
    sub = {c: _subtree_orders(children, c) for c in children[u]}
    sub[u] = [(u,)]
    out = []
    for perm in itertools.permutations((u, *children[u])):
        for parts in itertools.product(*(sub[x] for x in perm)):
            out.append(tuple(itertools.chain.from_iterable(parts)))
    return out


def enumerate_projective(rooted: RootedTree, limit: int = CONSTRAINED_LIMIT) -> ArrangementSet:
    _check_limit(rooted.n, limit)
    orders = projective_orders(rooted)
    return ArrangementSet(
        rooted.base, "projective", rooted.root, tuple(Arrangement.from_order(o) for o in orders)
    )


def enumerate_projective_root_first(rooted: RootedTree, limit: int = CONSTRAINED_LIMIT) -> ArrangementSet:
    """The projective arrangements that put the root first (a subset)."""
    full = enumerate_projective(rooted, limit)
    keep = tuple(a for a in full if a.vertex_at[0] == rooted.root)
    return ArrangementSet(rooted.base, "projective", rooted.root, keep)


def planar_orders(tree: FreeTree) -> Iterator[tuple[int, ...]]:
    """Vertex orders of all planar arrangements: each vertex first in turn,
    then every projective layout of the subtrees hanging from it."""
    for u in range(tree.n):
        children = root_at(tree, u).children
        sub = {c: _subtree_orders(children, c) for c in children[u]}
        for perm in itertools.permutations(children[u]):
            for parts in itertools.product(*(sub[x] for x in perm)):
                yield (u, *itertools.chain.from_iterable(parts))


def projective_orders(rooted: RootedTree) -> list[tuple[int, ...]]:
    return _subtree_orders(rooted.children, rooted.root)


def enumerate_planar(tree: FreeTree, limit: int = CONSTRAINED_LIMIT) -> ArrangementSet:
    _check_limit(tree.n, limit)
    arrs = tuple(Arrangement.from_order(o) for o in planar_orders(tree))
    return ArrangementSet(tree, "planar", None, arrs)


def brute_expected_D(arrangements: ArrangementSet) -> Fraction:
    """Exact mean of D over the set."""
    if not arrangements.arrangements:
        raise ValueError("empty arrangement set")
    tree = arrangements.tree
    return Fraction(sum(sum_edge_lengths(tree, a) for a in arrangements), len(arrangements))


def brute_expected_edge_length(arrangements: ArrangementSet, u: int, v: int) -> Fraction:
    total = sum(abs(int(a.position[u]) - int(a.position[v])) for a in arrangements)
    return Fraction(total, len(arrangements))


def mean_D_of_orders(tree: FreeTree, orders) -> Fraction:
    """Exact mean of D over vertex orders, without building Arrangements."""
    edges = tree.edges.tolist()
    pos = [0] * tree.n
    total = count = 0
    for o in orders:
        for i, v in enumerate(o):
            pos[v] = i
        total += sum(abs(pos[a] - pos[b]) for a, b in edges)
        count += 1
    if count == 0:
        raise ValueError("no arrangements")
    return Fraction(total, count)


def all_positions(n: int) -> np.ndarray:
    """``(n!, n)`` array of positions, one row per permutation."""
    orders = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    pos = np.empty_like(orders)
    np.put_along_axis(pos, orders, np.arange(n)[None, :], axis=1)
    return pos


def crossing_free_mask(tree: FreeTree, pos: np.ndarray) -> np.ndarray:
    """Per row of ``pos``: no two edges interleave.  Vectorised brute force."""
    if tree.n < 4:
        return np.ones(len(pos), dtype=bool)
    e = tree.edges
    a, b = pos[:, e[:, 0]], pos[:, e[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    L1, H1 = lo[:, :, None], hi[:, :, None]
    L2, H2 = lo[:, None, :], hi[:, None, :]
    cross = (L1 < L2) & (L2 < H1) & (H1 < H2)
    return ~cross.any(axis=(1, 2))


def root_covered_mask(tree: FreeTree, pos: np.ndarray) -> np.ndarray:
    """``(rows, n)``: vertex ``r`` lies strictly inside some edge's span."""
    if tree.n < 2:
        return np.zeros((len(pos), tree.n), dtype=bool)
    e = tree.edges
    a, b = pos[:, e[:, 0]], pos[:, e[:, 1]]
    lo, hi = np.minimum(a, b)[:, None, :], np.maximum(a, b)[:, None, :]
    p = pos[:, :, None]
    return ((lo < p) & (p < hi)).any(axis=2)


def filter_all(tree: FreeTree, predicate, limit: int = ALL_LIMIT) -> list[Arrangement]:
    """Members of :func:`enumerate_all` satisfying ``predicate(arrangement)``."""
    return [a for a in enumerate_all(tree, limit) if predicate(a)]


# -- uniformity --------------------------------------------------------------


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    critical: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical


def chi_square_critical(dof: int, alpha: float) -> float:
    from scipy.stats import chi2

    return float(chi2.isf(alpha, dof))


def chi_square_uniformity(
    counts: Sequence[int] | Mapping[object, int], total: int | None = None, alpha: float = 0.001
) -> ChiSquareResult:
    """Pearson test of ``counts`` against the uniform distribution on their support.

    ``counts`` must list every support element, zeros included; ``total``
    defaults to their sum and must equal it.
    """
    obs = np.asarray(list(counts.values()) if isinstance(counts, Mapping) else list(counts), dtype=float)
    k = len(obs)
    if k == 0:
        raise ValueError("empty support")
    if total is None:
        total = int(obs.sum())
    if int(obs.sum()) != total:
        raise ValueError(f"counts sum to {int(obs.sum())}, expected {total}: samples outside the support")
    if k == 1:
        return ChiSquareResult(0.0, 0, float("inf"), alpha)
    expected = total / k
    stat = float(((obs - expected) ** 2).sum() / expected)
    return ChiSquareResult(stat, k - 1, chi_square_critical(k - 1, alpha), alpha)


def support_counts(support: ArrangementSet, positions: np.ndarray) -> list[int]:
    """Tally sampled position rows against the members of ``support``.

    Raises ``ValueError`` on a sample outside the support.
    """
    index = support.index()
    counts = [0] * len(index)
    order = np.argsort(positions, axis=1)
    for row in map(tuple, order.tolist()):
        try:
            counts[index[row]] += 1
        except KeyError:
            raise ValueError(f"sampled arrangement {row} is not in the support") from None
    return counts
