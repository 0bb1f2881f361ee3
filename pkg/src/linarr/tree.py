"""Free and rooted trees, directional subtree sizes and random labeled trees.

Vertices are ``0..n-1`` internally.  Everything that reads or writes text
(edge lists, head vectors) uses 1-based ids; conversion happens here and in
the CLI, nowhere else.

Adjacency is stored in CSR form (``offsets``, ``neighbors``) so that the
linear-time routines can be written with numpy instead of per-vertex Python
loops.  The neighbours of a vertex appear in the order in which its edges were
given, and the children of a rooted vertex inherit that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components
from scipy.sparse.linalg import spsolve_triangular

# Values are pushed along the tree one BFS level per numpy call while the
# tree is shallow; past this many levels a sparse triangular solve is cheaper.
_LOOP_LEVELS = 256


class TreeError(ValueError):
    """Base class for malformed tree input."""


class VertexRangeError(TreeError):
    pass


class EdgeCountError(TreeError):
    pass


class CycleError(TreeError):
    pass


class DisconnectedError(TreeError):
    pass


class RootError(TreeError):
    """A head vector without exactly one root."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FreeTree:
    """An undirected tree on ``n`` vertices.

    Build it with :func:`from_edge_list` (validating) rather than directly.
    """

    n: int
    edges: np.ndarray  # (n-1, 2), 0-based, input order
    offsets: np.ndarray  # (n+1,)
    neighbors: np.ndarray  # (2(n-1),)

    @classmethod
    def _from_valid_edges(cls, n: int, edges: np.ndarray) -> "FreeTree":
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        # edge index as secondary key keeps each neighbour list in input order
        eid = np.concatenate([np.arange(len(edges)), np.arange(len(edges))])
        order = np.lexsort((eid, src))
        deg = np.bincount(src, minlength=n)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=offsets[1:])
        return cls(n, _frozen(edges.copy()), _frozen(offsets), _frozen(dst[order]))

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.offsets))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nb = self.neighbors.tolist()
        off = self.offsets.tolist()
        return tuple(tuple(nb[off[u] : off[u + 1]]) for u in range(self.n))

    def degree(self, u: int) -> int:
        return int(self.offsets[u + 1] - self.offsets[u])

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            return False
        return bool(np.any(self.neighbors[self.offsets[u] : self.offsets[u + 1]] == v))

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as 1-based pairs, in input order."""
        return [(u + 1, v + 1) for u, v in self.edges.tolist()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeTree):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"FreeTree(n={self.n}, edges={self.edge_list()})"


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A :class:`FreeTree` with edges oriented away from ``root``.

    Alongside parent/children this keeps the breadth-first order and level
    boundaries, and the subtree sizes ``s_root(u)``.  Values indexed by BFS
    rank are propagated with :meth:`accumulate_down` / :meth:`accumulate_up`.
    """

    base: FreeTree
    root: int
    parent: np.ndarray  # -1 at the root
    order: np.ndarray  # BFS order; children of a vertex are contiguous
    level_bounds: np.ndarray  # order[level_bounds[d]:level_bounds[d+1]] has depth d
    first_child: np.ndarray  # index into ``order`` of each vertex's first child
    subtree_size: np.ndarray

    @property
    def n(self) -> int:
        return self.base.n

    @cached_property
    def out_degree(self) -> np.ndarray:
        k = self.base.degrees - 1
        k[self.root] += 1
        return _frozen(k)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        order = self.order.tolist()
        fc = self.first_child.tolist()
        k = self.out_degree.tolist()
        return tuple(tuple(order[fc[u] : fc[u] + k[u]]) for u in range(self.n))

    @cached_property
    def rank(self) -> np.ndarray:
        """BFS rank of every vertex (inverse of ``order``)."""
        r = np.empty(self.n, dtype=np.int64)
        r[self.order] = np.arange(self.n)
        return _frozen(r)

    @cached_property
    def parent_rank(self) -> np.ndarray:
        """BFS rank of the parent of each BFS rank ``1..n-1``."""
        return _frozen(self.rank[self.parent[self.order[1:]]])

    def accumulate_down(self, x: np.ndarray) -> np.ndarray:
        """``y[..., j] = x[..., j] + y[..., parent(j)]`` over BFS ranks ``j``."""
        return _accumulate(x, self.parent_rank, self.level_bounds, down=True)

    def accumulate_up(self, x: np.ndarray) -> np.ndarray:
        """``y[..., j] = x[..., j] + sum of y over the children of j``."""
        return _accumulate(x, self.parent_rank, self.level_bounds, down=False)

    def levels(self) -> Iterator[np.ndarray]:
        b = self.level_bounds
        for d in range(len(b) - 1):
            yield self.order[b[d] : b[d + 1]]

    def parent_of(self, u: int) -> int | None:
        p = int(self.parent[u])
        return None if p < 0 else p

    def __repr__(self) -> str:
        return f"RootedTree(root={self.root}, {self.base!r})"


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> FreeTree:
    """Validate 1-based ``edges`` on vertices ``1..n`` and build a tree."""
    if n < 1:
        raise VertexRangeError(f"a tree needs at least one vertex, got n={n}")
    e = np.array([tuple(map(int, uv)) for uv in edges], dtype=np.int64).reshape(-1, 2)
    if e.size and (e.min() < 1 or e.max() > n):
        bad = e[(e < 1) | (e > n)][0]
        raise VertexRangeError(f"vertex id {bad} outside 1..{n}")
    e -= 1
    if len(e) > n - 1:
        raise EdgeCountError(f"{len(e)} edges given, a tree on {n} vertices has {n - 1}")
    loops = np.flatnonzero(e[:, 0] == e[:, 1])
    if loops.size:
        raise CycleError(f"self-loop at vertex {e[loops[0], 0] + 1}")
    canon = np.sort(e, axis=1)
    if len(np.unique(canon, axis=0)) < len(canon):
        raise CycleError("duplicate edge")
    if len(e):
        g = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        ncomp = connected_components(g, directed=False)[0]
    else:
        ncomp = n
    # a forest with m edges has exactly n - m components
    if ncomp > n - len(e):
        raise CycleError("edges contain a cycle")
    if ncomp > 1:
        raise DisconnectedError(f"graph has {ncomp} connected components")
    return FreeTree._from_valid_edges(n, e)


def from_head_vector(heads: Sequence[int]) -> RootedTree:
    """Head vector (1-based heads, 0 for the root) to a rooted tree."""
    heads = [int(h) for h in heads]
    n = len(heads)
    roots = [i for i, h in enumerate(heads) if h == 0]
    if len(roots) != 1:
        raise RootError(f"head vector has {len(roots)} roots, expected 1")
    edges = [(h, i + 1) for i, h in enumerate(heads) if h != 0]
    for h, d in edges:
        if h == d:
            raise CycleError(f"token {d} is its own head")
    return root_at(from_edge_list(n, edges), roots[0])


def head_vector(rooted: RootedTree) -> list[int]:
    return [0 if p < 0 else p + 1 for p in rooted.parent.tolist()]


def _shallow(n: int, levels: int) -> bool:
    return levels <= max(_LOOP_LEVELS, n // 64)


def _accumulate(x: np.ndarray, pr: np.ndarray, bounds: np.ndarray, down: bool) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    n = x.shape[-1]
    if n <= 1:
        return x.copy()
    # the solve runs in float64; every partial sum is bounded by sum |x|
    exact = float(np.abs(x).sum(axis=-1).max()) < 2.0**52
    if _shallow(n, len(bounds) - 1) or not exact:
        return _accumulate_levels(x, pr, bounds, down)
    return _accumulate_solve(x, pr, down)


def _accumulate_solve(x: np.ndarray, pr: np.ndarray, down: bool) -> np.ndarray:
    """Solve ``(I - P) y = x`` (or its transpose), ``P`` the parent matrix in
    BFS-rank order, which is unit lower triangular."""
    n = x.shape[-1]
    j = np.arange(1, n)
    diag = np.arange(n)
    m = csr_matrix(
        (np.concatenate([np.ones(n), -np.ones(n - 1)]), (np.concatenate([diag, j]), np.concatenate([diag, pr]))),
        shape=(n, n),
    )
    if not down:
        m = m.T.tocsr()
    b = x.reshape(-1, n).T.astype(np.float64)
    y = spsolve_triangular(m, b, lower=down, unit_diagonal=True)
    return np.rint(y).astype(np.int64).T.reshape(x.shape)


def _accumulate_levels(x: np.ndarray, pr: np.ndarray, bounds: np.ndarray, down: bool) -> np.ndarray:
    y = x.copy()
    b = bounds.tolist()
    spans = list(zip(b[1:-1], b[2:]))
    if down:
        for lo, hi in spans:
            y[..., lo:hi] += y[..., pr[lo - 1 : hi - 1]]
        return y
    rows = [y] if y.ndim == 1 else list(y.reshape(-1, y.shape[-1]))
    for row in rows:
        for lo, hi in reversed(spans):
            # a source aliasing the target sends np.add.at down a slow buffered path
            np.add.at(row, pr[lo - 1 : hi - 1], row[lo:hi].copy())
    return y


def _bfs(tree: FreeTree, root: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Level-synchronous BFS: (order, parent, level_bounds).

    Deep trees are handed to scipy's BFS instead; both visit the neighbours
    of a vertex in adjacency order, so the result is the same.
    """
    n = tree.n
    deg, off, nbr = tree.degrees, tree.offsets, tree.neighbors
    parent = np.full(n, -1, dtype=np.int64)
    frontier = np.array([root], dtype=np.int64)
    levels = [frontier]
    cap = max(_LOOP_LEVELS, n // 64)
    while True:
        c = deg[frontier]
        total = int(c.sum())
        if total == 0:
            break
        excl = np.cumsum(c) - c
        idx = np.repeat(off[frontier] - excl, c) + np.arange(total)
        nb = nbr[idx]
        src = np.repeat(frontier, c)
        keep = nb != parent[src]
        nxt = nb[keep]
        if nxt.size == 0:
            break
        if len(levels) >= cap:
            return _bfs_deep(tree, root)
        parent[nxt] = src[keep]
        levels.append(nxt)
        frontier = nxt
    order = np.concatenate(levels)
    bounds = np.zeros(len(levels) + 1, dtype=np.int64)
    np.cumsum([len(lv) for lv in levels], out=bounds[1:])
    return order, parent, bounds


def _bfs_deep(tree: FreeTree, root: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = tree.n
    # float data: converting any other dtype makes scipy sort the indices,
    # which would lose the adjacency order of children
    g = csr_matrix((np.ones(len(tree.neighbors)), tree.neighbors, tree.offsets), shape=(n, n))
    order, pred = breadth_first_order(g, root, directed=True, return_predecessors=True)
    order = order.astype(np.int64)
    parent = np.where(pred < 0, -1, pred).astype(np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    pr = rank[parent[order[1:]]]
    ones = np.ones(n, dtype=np.int64)
    ones[0] = 0
    depth = _accumulate_solve(ones, pr, down=True)
    counts = np.bincount(depth)
    bounds = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=bounds[1:])
    return order, parent, bounds


def _subtree_sizes(order: np.ndarray, parent: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    n = len(order)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    pr = rank[parent[order[1:]]]
    size_by_rank = _accumulate(np.ones(n, dtype=np.int64), pr, bounds, down=False)
    return size_by_rank[rank]


def root_at(tree: FreeTree, r: int) -> RootedTree:
    """Orient ``tree`` away from vertex ``r`` (0-based)."""
    if not 0 <= r < tree.n:
        raise VertexRangeError(f"root {r} outside 0..{tree.n - 1}")
    order, parent, bounds = _bfs(tree, r)
    size = _subtree_sizes(order, parent, bounds)
    outdeg = tree.degrees - 1
    outdeg[r] += 1
    first = np.empty(tree.n, dtype=np.int64)
    k = outdeg[order]
    first[order] = 1 + np.cumsum(k) - k
    return RootedTree(
        tree, r, _frozen(parent), _frozen(order), _frozen(bounds), _frozen(first), _frozen(size)
    )


@dataclass(frozen=True)
class DirectionalSizes:
    """``s_u(v)`` for every directed edge, aligned with ``tree.neighbors``.

    ``values[k]`` is ``s_u(v)`` where ``v = tree.neighbors[k]`` and ``k`` lies in
    ``tree.offsets[u]:tree.offsets[u+1]``.
    """

    tree: FreeTree
    values: np.ndarray = field(repr=False)

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        lo, hi = self.tree.offsets[u], self.tree.offsets[u + 1]
        hit = np.flatnonzero(self.tree.neighbors[lo:hi] == v)
        if hit.size == 0:
            raise KeyError(uv)
        return int(self.values[lo + hit[0]])

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple[int, int, int]]:
        src = np.repeat(np.arange(self.tree.n), self.tree.degrees)
        yield from zip(src.tolist(), self.tree.neighbors.tolist(), self.values.tolist())

    def sum_of_squares(self) -> np.ndarray:
        """Per vertex ``u``: sum over neighbours ``v`` of ``s_u(v)**2``."""
        if self.tree.n < 2:
            return np.zeros(self.tree.n, dtype=np.int64)
        # per-vertex sums stay below n**2; a global prefix sum would not
        return np.add.reduceat(self.values * self.values, self.tree.offsets[:-1])


def compute_directional_sizes(tree: FreeTree) -> DirectionalSizes:
    """All ``2(n-1)`` directional sizes from a single traversal."""
    rooted = root_at(tree, 0)
    size = rooted.subtree_size
    src = np.repeat(np.arange(tree.n), tree.degrees)
    dst = tree.neighbors
    toward_child = rooted.parent[dst] == src
    vals = np.where(toward_child, size[dst], tree.n - size[src])
    return DirectionalSizes(tree, _frozen(vals))


# -- labeled trees ---------------------------------------------------------


def prufer_decode(seq: Sequence[int], n: int | None = None) -> FreeTree:
    """Linear-time decoding of a 0-based Prüfer sequence of length ``n - 2``."""
    seq = list(seq)
    if n is None:
        n = len(seq) + 2
    if n <= 2:
        return FreeTree._from_valid_edges(n, np.array([[0, 1]] if n == 2 else [], dtype=np.int64))
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    ptr = deg.index(1)
    leaf = ptr
    for x in seq:
        edges.append((leaf, x))
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return FreeTree._from_valid_edges(n, np.array(edges, dtype=np.int64))


def prufer_encode(tree: FreeTree) -> list[int]:
    n = tree.n
    if n <= 2:
        return []
    adj = [set(a) for a in tree.adjacency]
    deg = [len(a) for a in adj]
    removed = [False] * n
    seq = []
    ptr = deg.index(1)
    leaf = ptr
    for _ in range(n - 2):
        (nxt,) = (w for w in adj[leaf] if not removed[w])
        seq.append(nxt)
        removed[leaf] = True
        deg[nxt] -= 1
        if deg[nxt] == 1 and nxt < ptr:
            leaf = nxt
        else:
            ptr += 1
            while deg[ptr] != 1 or removed[ptr]:
                ptr += 1
            leaf = ptr
    return seq


def all_labeled_trees(n: int) -> Iterator[FreeTree]:
    """Every labeled tree on ``n`` vertices (``n**(n-2)`` of them)."""
    if n <= 2:
        yield prufer_decode([], n)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def random_labeled_tree(n: int, rng: np.random.Generator) -> FreeTree:
    """Uniformly random labeled tree, via a uniform Prüfer sequence."""
    if n < 1:
        raise VertexRangeError(f"n must be positive, got {n}")
    seq = rng.integers(0, n, size=max(n - 2, 0)).tolist()
    return prufer_decode(seq, n)


# -- small named trees, handy in tests and docs ----------------------------


def path_tree(n: int) -> FreeTree:
    return FreeTree._from_valid_edges(n, np.array([(i, i + 1) for i in range(n - 1)], dtype=np.int64))


def star_tree(n: int) -> FreeTree:
    """``K_{1,n-1}`` with hub 0."""
    return FreeTree._from_valid_edges(n, np.array([(0, i) for i in range(1, n)], dtype=np.int64))


# -- text formats ----------------------------------------------------------


def parse_tree_text(text: str) -> FreeTree | RootedTree:
    """Parse an edge list (``n`` then ``n-1`` lines ``u v``) or a head vector.

    A single line holding several integers, or the single integer ``0``, is a
    head vector and yields a :class:`RootedTree`; anything else is an edge list.
    """
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise TreeError("empty tree input")
    try:
        rows = [[int(x) for x in ln] for ln in lines]
    except ValueError as exc:
        raise TreeError(f"non-integer token in tree input: {exc}") from None
    if len(rows) == 1 and (len(rows[0]) > 1 or rows[0] == [0]):
        return from_head_vector(rows[0])
    if len(rows[0]) != 1:
        raise TreeError("edge list must start with a line holding n")
    n = rows[0][0]
    if any(len(r) != 2 for r in rows[1:]):
        raise TreeError("edge lines must hold exactly two vertex ids")
    return from_edge_list(n, rows[1:])


def format_edge_list(tree: FreeTree) -> str:
    return "\n".join([str(tree.n)] + [f"{u} {v}" for u, v in tree.edge_list()]) + "\n"
