"""Exact expectations of D and of single edge lengths.

All results are :class:`fractions.Fraction`.  Three independent routes to the
planar expectation are provided:

* :func:`expected_D_planar` -- closed form over directional sizes, O(n);
* :func:`expected_D_planar_naive` -- average of the root-first projective
  expectation over every choice of first vertex, O(n^2);
* :func:`expected_D_planar_bfs` -- all-roots projective expectations obtained
  by one BFS with incremental updates, plus a constant correction, O(n).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import counting
from .tree import FreeTree, RootedTree, compute_directional_sizes, root_at


class UndefinedExpectationError(ValueError):
    pass


class NotRootChildError(ValueError):
    pass


class EdgeNotFoundError(ValueError):
    pass


def _exact_dot(a: np.ndarray, b: np.ndarray) -> int:
    """Exact integer dot product; falls back to Python ints near int64 limits."""
    if len(a) == 0:
        return 0
    bound = int(np.abs(a).max()) * int(np.abs(b).max()) * len(a)
    if bound < 2**62:
        return int(np.dot(a, b))
    return sum(x * y for x, y in zip(a.tolist(), b.tolist()))


def expected_D_unconstrained(n: int) -> Fraction:
    return Fraction(n * n - 1, 3)


def _six_E_projective(rooted: RootedTree) -> int:
    k = rooted.out_degree
    return _exact_dot(rooted.subtree_size, 2 * k + 1) - 1


def expected_D_projective(rooted: RootedTree) -> Fraction:
    """``(sum_u s(u) (2 k_u + 1) - 1) / 6`` with subtree sizes ``s`` and
    out-degrees ``k`` of the rooted tree."""
    return Fraction(_six_E_projective(rooted), 6)


def _root_child_size(rooted: RootedTree, v: int) -> int:
    if not 0 <= v < rooted.n or rooted.parent[v] != rooted.root:
        raise NotRootChildError(f"vertex {v} is not a child of the root {rooted.root}")
    return int(rooted.subtree_size[v])


def expected_anchor(rooted: RootedTree, v: int) -> Fraction:
    return Fraction(_root_child_size(rooted, v) + 1, 2)


def expected_coanchor(rooted: RootedTree, v: int) -> Fraction:
    return Fraction(rooted.n - _root_child_size(rooted, v) - 1, 3)


def expected_coanchor_root_fixed(rooted: RootedTree, v: int) -> Fraction:
    """Coanchor expectation when the root is pinned to the first position:
    the root child's segment is uniform among ``deg(root)`` slots instead of
    ``deg(root) + 1``, which scales the unpinned value by 3/2."""
    return Fraction(rooted.n - _root_child_size(rooted, v) - 1, 2)


def expected_D_projective_root_fixed(rooted: RootedTree) -> Fraction:
    """E[D] over projective arrangements that put the root first."""
    n = rooted.n
    kids = rooted.order[1 : 1 + int(rooted.out_degree[rooted.root])]
    coanchors = Fraction(int((n - 1 - rooted.subtree_size[kids]).sum()), 3)
    return expected_D_projective(rooted) + coanchors / 2


def expected_D_planar_naive(tree: FreeTree) -> Fraction:
    """Mean over all vertices ``u`` of the root-first projective expectation
    of the tree rooted at ``u``.  Quadratic; a cross-check for the fast paths."""
    n = tree.n
    return sum((expected_D_projective_root_fixed(root_at(tree, u)) for u in range(n)), Fraction(0)) / n


def _planar_numerator(tree: FreeTree) -> int:
    n = tree.n
    sq = compute_directional_sizes(tree).sum_of_squares()
    return (n - 1) * (3 * n * n + 2 * n - 2) - _exact_dot(2 * tree.degrees - 1, sq)


def expected_D_planar(tree: FreeTree) -> Fraction:
    """Linear-time planar expectation:

    ``[(n-1)(3n^2+2n-2) - sum_v (2 deg(v) - 1) sum_{u in N(v)} s_v(u)^2] / 6n``.
    """
    return Fraction(_planar_numerator(tree), 6 * tree.n)


def _six_E_projective_all_roots(tree: FreeTree) -> np.ndarray:
    n = tree.n
    rooted = root_at(tree, 0)
    six = np.empty(n, dtype=np.int64)
    six[0] = _six_E_projective(rooted)
    if n == 1:
        return six
    order, parent, size = rooted.order, rooted.parent, rooted.subtree_size
    deg = tree.degrees
    # moving the root across u -> v (v child of u):
    # 6 (E_u - E_v) = s_u(v)(2 deg v - 1) + 2n(deg u - deg v) - s_v(u)(2 deg u - 1)
    v = order[1:]
    u = parent[v]
    s_uv = size[v]
    s_vu = n - s_uv
    delta6 = s_uv * (2 * deg[v] - 1) + 2 * n * (deg[u] - deg[v]) - s_vu * (2 * deg[u] - 1)
    step = np.empty(n, dtype=np.int64)  # by BFS rank
    step[0] = six[0]
    step[1:] = -delta6
    six[order] = rooted.accumulate_down(step)
    return six


def expected_D_projective_all_roots(tree: FreeTree) -> dict[int, Fraction]:
    """Projective expectation for every choice of root, via one BFS."""
    return {u: Fraction(x, 6) for u, x in enumerate(_six_E_projective_all_roots(tree).tolist())}


def expected_D_planar_bfs(tree: FreeTree) -> Fraction:
    """``(n-1)(n-2)/6n`` plus the mean projective expectation over roots."""
    n = tree.n
    total = sum(_six_E_projective_all_roots(tree).tolist())
    return Fraction((n - 1) * (n - 2), 6 * n) + Fraction(total, 6 * n)


def expected_edge_length_planar(tree: FreeTree, u: int, v: int) -> Fraction:
    """Expected ``|pos(u) - pos(v)|`` of edge ``uv`` in a uniform planar arrangement.

    A first vertex ``r`` at either endpoint contributes ``n/2``.  Otherwise,
    with ``c`` the endpoint nearer ``r`` and ``f`` the other one, it contributes
    ``(2 s_r(c) + s_r(f) + 1) / 6``.  Vertices ``r`` are grouped by the
    neighbour ``w`` of ``c`` through which they reach the edge, since then
    ``s_r(c) = n - s_c(w)`` and ``s_r(f) = s_c(f)``.
    """
    if not tree.has_edge(u, v):
        raise EdgeNotFoundError(f"({u}, {v}) is not an edge")
    n = tree.n
    sizes = compute_directional_sizes(tree)
    six_total = 0
    for c, f in ((u, v), (v, u)):
        s_cf = sizes[c, f]
        for w in tree.adjacency[c]:
            if w != f:
                s_cw = sizes[c, w]
                six_total += s_cw * (2 * (n - s_cw) + s_cf + 1)
    return 1 + Fraction(six_total, 6 * n)


def expected_edge_lengths_planar(tree: FreeTree) -> list[Fraction]:
    """:func:`expected_edge_length_planar` for every edge, in edge order."""
    n = tree.n
    sizes = compute_directional_sizes(tree)
    adj = tree.adjacency
    vals = sizes.values.tolist()
    off = tree.offsets.tolist()
    # per vertex c: sum_w s_c(w) (2(n - s_c(w)) + 1) and sum_w s_c(w)
    a = [0] * n
    b = [0] * n
    for c in range(n):
        for s in vals[off[c] : off[c + 1]]:
            a[c] += s * (2 * (n - s) + 1)
            b[c] += s
    out = []
    for u, v in tree.edges.tolist():
        six_total = 0
        for c, f in ((u, v), (v, u)):
            s_cf = vals[off[c] + adj[c].index(f)]
            # drop the term for w = f, then add s_c(f) weighted by the group sizes
            six_total += a[c] - s_cf * (2 * (n - s_cf) + 1) + s_cf * (b[c] - s_cf)
        out.append(1 + Fraction(six_total, 6 * n))
    return out


def expected_D_crossing(tree: FreeTree) -> Fraction:
    """E[D] conditioned on at least one crossing, by total expectation."""
    n_pl = counting.count_planar(tree)
    n_all = counting.count_unconstrained(tree.n)
    if n_pl == n_all:
        raise UndefinedExpectationError("every arrangement of this tree is planar")
    p0 = Fraction(n_pl, n_all)
    return (expected_D_unconstrained(tree.n) - expected_D_planar(tree) * p0) / (1 - p0)
