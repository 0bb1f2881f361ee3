"""Random projective and planar arrangements, plus the Gildea–Temperley sampler.

Every vertex ``u`` owns a group of segments: ``u`` itself plus the subtree of
each child.  A projective arrangement is one ordering per group; a planar
arrangement picks a uniform first vertex, roots the tree there, and orders
only the root's children (the root sits at position 0).  Within-group
orderings are turned into positions by an exclusive prefix sum of segment
sizes, and segment start positions are pushed down the tree level by level.
No recursion is involved, so arbitrarily deep trees are fine.

The batch functions (``sample_*``) return a ``(count, n)`` array whose row
``i`` holds ``position[v]`` for sample ``i``.  The single-draw functions
return ``sample_*(..., count=1)[0]`` wrapped in an :class:`Arrangement`.

Seed to arrangement mapping (``SAMPLER_VERSION = 1``): the RNG is a numpy
``Generator`` (``numpy.random.default_rng(seed)``, PCG64).  Group orderings
come from one ``Generator.permuted`` call per chunk of rows and are decoded
by sorting; the planar sampler draws all first vertices up front with
``Generator.integers`` and then samples roots in increasing vertex order.
Changing any of this must bump ``SAMPLER_VERSION`` and the golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrangement import Arrangement
from .tree import FreeTree, RootedTree, root_at

SAMPLER_VERSION = 1

# rows x items handled per vectorized chunk
_CHUNK_CELLS = 1 << 22


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class _Layout:
    """Item layout of one rooting, indexed by BFS rank rather than vertex id.

    Items are grouped by owner, owners in BFS order, each group being the
    owner itself (absent for a fixed root) followed by its children.
    """

    rooted: RootedTree
    fixed_root: bool
    weight: np.ndarray  # per item: 1 for the owner itself, subtree size for a child
    group_start: np.ndarray  # per item: index of the first item of its group
    is_child: np.ndarray  # per item
    child_item: np.ndarray  # item of BFS rank j >= 1 inside its parent's group
    self_item: np.ndarray  # item of each BFS rank in its own group

    @property
    def m(self) -> int:
        return len(self.weight)


def _layout(rooted: RootedTree, fixed_root: bool) -> _Layout:
    n = rooted.n
    order = rooted.order
    k = rooted.out_degree[order]
    first = rooted.first_child[order]
    has_self = np.ones(n, dtype=np.int64)
    if fixed_root:
        has_self[0] = 0
    bsize = k + has_self
    bstart = np.cumsum(bsize) - bsize
    m = int(bstart[-1] + bsize[-1])

    pr = rooted.parent_rank
    child_item = bstart[pr] + has_self[pr] + np.arange(1, n) - first[pr]
    self_item = bstart.copy()

    weight = np.ones(m, dtype=np.int64)
    weight[child_item] = rooted.subtree_size[order[1:]]
    is_child = np.zeros(m, dtype=bool)
    is_child[child_item] = True
    group_start = np.repeat(bstart, bsize)
    return _Layout(rooted, fixed_root, weight, group_start, is_child, child_item, self_item)


def _positions(lay: _Layout, sortkey: np.ndarray) -> np.ndarray:
    """Decode per-row item sort keys into a (rows, n) position array."""
    rooted = lay.rooted
    rows, n = sortkey.shape[0], rooted.n
    # keys are distinct within a row, so any sort algorithm decodes the same
    perm = np.argsort(sortkey, axis=1)
    w = lay.weight[perm]
    excl = np.cumsum(w, axis=1) - w
    off = np.empty_like(excl)
    np.put_along_axis(off, perm, excl - excl[:, lay.group_start], axis=1)

    start = np.empty((rows, n), dtype=np.int64)  # by BFS rank
    start[:, 0] = 1 if lay.fixed_root else 0
    start[:, 1:] = off[:, lay.child_item]
    start = rooted.accumulate_down(start)
    if lay.fixed_root:
        start[:, 1:] += off[:, lay.self_item[1:]]
        start[:, 0] = 0
    else:
        start += off[:, lay.self_item]
    pos = np.empty_like(start)
    pos[:, rooted.order] = start
    return pos


def _uniform_keys(lay: _Layout, rng: np.random.Generator, rows: int) -> np.ndarray:
    m = lay.m
    rank = rng.permuted(np.broadcast_to(np.arange(m, dtype=np.int64), (rows, m)), axis=1)
    return lay.group_start[None, :] * m + rank


def _gt_keys(lay: _Layout, rng: np.random.Generator, rows: int) -> np.ndarray:
    # class 0 = left of the head, 1 = the head itself, 2 = right of the head
    m = lay.m
    side = rng.integers(0, 2, size=(rows, m), dtype=np.int64) * 2
    cls = np.where(lay.is_child[None, :], side, 1)
    rank = rng.permuted(np.broadcast_to(np.arange(m, dtype=np.int64), (rows, m)), axis=1)
    return lay.group_start[None, :] * (3 * m) + cls * m + rank


def _run(lay: _Layout, rng: np.random.Generator, count: int, keys) -> np.ndarray:
    n = lay.rooted.n
    out = np.empty((count, n), dtype=np.int64)
    if lay.m == 0:
        out[:] = 0
        return out
    step = max(1, _CHUNK_CELLS // max(lay.m, 1))
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        out[lo:hi] = _positions(lay, keys(lay, rng, hi - lo))
    return out


def sample_projective(rooted: RootedTree, rng: np.random.Generator, count: int) -> np.ndarray:
    return _run(_layout(rooted, False), rng, count, _uniform_keys)


def sample_projective_gildea_temperley(
    rooted: RootedTree, rng: np.random.Generator, count: int
) -> np.ndarray:
    return _run(_layout(rooted, False), rng, count, _gt_keys)


def sample_planar(tree: FreeTree, rng: np.random.Generator, count: int) -> np.ndarray:
    n = tree.n
    out = np.empty((count, n), dtype=np.int64)
    firsts = rng.integers(0, n, size=count)
    for u in np.unique(firsts).tolist():
        rows = np.flatnonzero(firsts == u)
        out[rows] = _run(_layout(root_at(tree, u), True), rng, len(rows), _uniform_keys)
    return out


def sample_unconstrained(n: int, rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.permuted(np.broadcast_to(np.arange(n, dtype=np.int64), (count, n)), axis=1)


def random_projective(rooted: RootedTree, rng: np.random.Generator) -> Arrangement:
    """Uniformly random projective arrangement of ``rooted``."""
    return Arrangement.from_positions(sample_projective(rooted, rng, 1)[0])


def random_planar(tree: FreeTree, rng: np.random.Generator) -> Arrangement:
    """Uniformly random planar arrangement of ``tree``."""
    return Arrangement.from_positions(sample_planar(tree, rng, 1)[0])


def random_projective_gildea_temperley(rooted: RootedTree, rng: np.random.Generator) -> Arrangement:
    """Projective but *not* uniform: a fair coin puts each dependent left or
    right of its head, and dependents on the same side are shuffled.

    Kept only as a comparison baseline; on a star rooted at its hub the root
    position is ``1 + Binomial(n - 1, 1/2)`` instead of uniform.
    """
    return Arrangement.from_positions(sample_projective_gildea_temperley(rooted, rng, 1)[0])


def random_unconstrained(n: int, rng: np.random.Generator) -> Arrangement:
    return Arrangement.from_positions(sample_unconstrained(n, rng, 1)[0])
