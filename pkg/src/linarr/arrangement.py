"""Linear arrangements and the metrics defined on them.

Positions are 0-based internally (``position[u]`` in ``0..n-1``); lengths and
crossings do not depend on the offset.  The text form is a line of 1-based
vertex ids in position order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .tree import FreeTree, RootedTree


class ArrangementSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Arrangement:
    position: np.ndarray  # vertex -> position
    vertex_at: np.ndarray  # position -> vertex

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Arrangement":
        """Build from the vertices listed left to right."""
        vertex_at = np.asarray(order, dtype=np.int64)
        n = len(vertex_at)
        position = np.full(n, -1, dtype=np.int64)
        if n and (vertex_at.min() < 0 or vertex_at.max() >= n):
            raise ArrangementSizeError("vertex id out of range")
        position[vertex_at] = np.arange(n)
        if n and position.min() < 0:
            raise ArrangementSizeError("order is not a permutation")
        vertex_at.flags.writeable = False
        position.flags.writeable = False
        return cls(position, vertex_at)

    @classmethod
    def from_positions(cls, position: Sequence[int]) -> "Arrangement":
        position = np.asarray(position, dtype=np.int64)
        if len(position) and (position.min() < 0 or position.max() >= len(position)):
            raise ArrangementSizeError("position out of range")
        order = np.full_like(position, -1)
        order[position] = np.arange(len(position))
        return cls.from_order(order)

    @classmethod
    def identity(cls, n: int) -> "Arrangement":
        return cls.from_order(range(n))

    @property
    def n(self) -> int:
        return len(self.vertex_at)

    def key(self) -> tuple[int, ...]:
        return tuple(self.vertex_at.tolist())

    def reversed(self) -> "Arrangement":
        return Arrangement.from_order(self.vertex_at[::-1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Arrangement):
            return NotImplemented
        return np.array_equal(self.vertex_at, other.vertex_at)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Arrangement({self.key()})"

    def to_text(self) -> str:
        return " ".join(str(v + 1) for v in self.vertex_at.tolist())

    @classmethod
    def from_text(cls, line: str) -> "Arrangement":
        return cls.from_order([int(x) - 1 for x in line.split()])


def _check(tree: FreeTree, arr: Arrangement) -> None:
    if tree.n != arr.n:
        raise ArrangementSizeError(f"arrangement of {arr.n} vertices for a tree of {tree.n}")


def _base(tree: FreeTree | RootedTree) -> FreeTree:
    return tree.base if isinstance(tree, RootedTree) else tree


def edge_lengths(tree: FreeTree, arr: Arrangement) -> np.ndarray:
    tree = _base(tree)
    _check(tree, arr)
    p = arr.position
    return np.abs(p[tree.edges[:, 0]] - p[tree.edges[:, 1]])


def sum_edge_lengths(tree: FreeTree, arr: Arrangement) -> int:
    """D: the sum over edges of ``|pos(u) - pos(v)|``."""
    return int(edge_lengths(tree, arr).sum())


def _spans(tree: FreeTree, arr: Arrangement) -> list[tuple[int, int]]:
    p = arr.position.tolist()
    out = []
    for u, v in tree.edges.tolist():
        a, b = p[u], p[v]
        out.append((a, b) if a < b else (b, a))
    return out


def count_crossings(tree: FreeTree, arr: Arrangement) -> int:
    """Number of interleaved edge pairs; plain pairwise test."""
    tree = _base(tree)
    _check(tree, arr)
    spans = _spans(tree, arr)
    c = 0
    for i, (s, t) in enumerate(spans):
        for u, v in spans[i + 1 :]:
            if s < u < t < v or u < s < v < t:
                c += 1
    return c


def is_planar(tree: FreeTree, arr: Arrangement) -> bool:
    tree = _base(tree)
    _check(tree, arr)
    spans = sorted(_spans(tree, arr))
    # any crossing shows up between some pair; stop at the first one
    for i, (s, t) in enumerate(spans):
        for u, v in spans[i + 1 :]:
            if u >= t:
                break
            if u > s and t < v:
                return False
    return True


def root_is_covered(rooted: RootedTree, arr: Arrangement) -> bool:
    _check(rooted.base, arr)
    pr = int(arr.position[rooted.root])
    return any(a < pr < b for a, b in _spans(rooted.base, arr))


def is_projective(rooted: RootedTree, arr: Arrangement) -> bool:
    return is_planar(rooted.base, arr) and not root_is_covered(rooted, arr)


def mean_dependency_distance(tree: FreeTree, arr: Arrangement) -> Fraction:
    """``D / (n - 1)`` as an exact fraction."""
    tree = _base(tree)
    if tree.n < 2:
        raise ValueError("mean dependency distance is undefined for a single vertex")
    return Fraction(sum_edge_lengths(tree, arr), tree.n - 1)
