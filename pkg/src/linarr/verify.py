"""Oracle-equivalence checks shared by the ``verify`` command and the tests.

Library functions are looked up through their modules at call time, so a
patched (deliberately broken) formula is seen by the checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import counting
from . import expectations as ex
from . import oracle, sampling
from .tree import FreeTree, all_labeled_trees, path_tree, root_at, star_tree


@dataclass
class Report:
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, cond: bool, what: str) -> None:
        self.checks += 1
        if not cond:
            self.failures.append(what)

    def equal(self, got, want, what: str) -> None:
        self.expect(got == want, f"{what}: got {got}, expected {want}")


def _label(tree: FreeTree) -> str:
    return f"tree n={tree.n} edges={tree.edge_list()}"


def check_counts(tree: FreeTree, report: Report, pos: np.ndarray | None = None) -> None:
    """Counts against filtering all ``n!`` permutations."""
    n = tree.n
    pos = oracle.all_positions(n) if pos is None else pos
    planar = oracle.crossing_free_mask(tree, pos)
    covered = oracle.root_covered_mask(tree, pos)
    name = _label(tree)
    report.equal(counting.count_planar(tree), int(planar.sum()), f"count_planar {name}")
    for r in range(n):
        got = counting.count_projective(root_at(tree, r))
        report.equal(got, int((planar & ~covered[:, r]).sum()), f"count_projective root={r + 1} {name}")

    # enumeration agrees with filtering as a set
    filtered = {tuple(np.argsort(row).tolist()) for row in pos[planar]}
    report.expect(set(oracle.planar_orders(tree)) == filtered, f"enumerate_planar != filtered set {name}")


def check_expectations(tree: FreeTree, report: Report) -> None:
    """All expectation routes against brute means over the enumerated classes."""
    n = tree.n
    name = _label(tree)
    planar = list(oracle.planar_orders(tree))
    report.equal(len(planar), counting.count_planar(tree), f"|enumerate_planar| {name}")
    e_pl = oracle.mean_D_of_orders(tree, planar)
    report.equal(ex.expected_D_planar(tree), e_pl, f"expected_D_planar {name}")
    report.equal(ex.expected_D_planar_naive(tree), e_pl, f"expected_D_planar_naive {name}")
    report.equal(ex.expected_D_planar_bfs(tree), e_pl, f"expected_D_planar_bfs {name}")

    lengths = ex.expected_edge_lengths_planar(tree)
    report.equal(sum(lengths, Fraction(0)), ex.expected_D_planar(tree), f"sum of edge expectations {name}")
    for (u, v), want in zip(tree.edges.tolist(), lengths):
        report.equal(ex.expected_edge_length_planar(tree, u, v), want, f"edge ({u + 1},{v + 1}) {name}")

    all_roots = ex.expected_D_projective_all_roots(tree)
    for r in range(n):
        rooted = root_at(tree, r)
        orders = oracle.projective_orders(rooted)
        report.equal(len(orders), counting.count_projective(rooted), f"|enumerate_projective| root={r + 1} {name}")
        e_pr = oracle.mean_D_of_orders(tree, orders)
        report.equal(ex.expected_D_projective(rooted), e_pr, f"expected_D_projective root={r + 1} {name}")
        report.equal(all_roots[r], e_pr, f"expected_D_projective_all_roots[{r + 1}] {name}")
        first = [o for o in orders if o[0] == r]
        report.equal(
            ex.expected_D_projective_root_fixed(rooted),
            oracle.mean_D_of_orders(tree, first),
            f"expected_D_projective_root_fixed root={r + 1} {name}",
        )
        for v in rooted.children[r]:
            report.equal(
                ex.expected_coanchor_root_fixed(rooted, v),
                ex.expected_coanchor(rooted, v) * Fraction(3, 2),
                f"coanchor scaling root={r + 1} child={v + 1} {name}",
            )

    check_total_expectation(tree, report)


def check_total_expectation(tree: FreeTree, report: Report) -> None:
    n = tree.n
    name = _label(tree)
    n_pl, n_all = counting.count_planar(tree), counting.count_unconstrained(n)
    try:
        e_cross = ex.expected_D_crossing(tree)
    except ex.UndefinedExpectationError:
        report.expect(n_pl == n_all, f"expected_D_crossing undefined although crossings exist {name}")
        return
    report.expect(n_pl < n_all, f"expected_D_crossing defined although no crossing is possible {name}")
    p0 = Fraction(n_pl, n_all)
    total = ex.expected_D_planar(tree) * p0 + e_cross * (1 - p0)
    report.equal(total, ex.expected_D_unconstrained(n), f"total expectation identity {name}")


def check_unconstrained(n: int, report: Report, pos: np.ndarray) -> None:
    tree = path_tree(n)
    e = tree.edges
    d = np.abs(pos[:, e[:, 0]] - pos[:, e[:, 1]]).sum(axis=1)
    report.equal(ex.expected_D_unconstrained(n), Fraction(int(d.sum()), len(pos)), f"expected_D_unconstrained n={n}")


def check_samplers(report: Report, seed: int = 12345, per_cell: int = 300, alpha: float = 1e-3) -> None:
    """Small seeded chi-square checks on P4 and the 4-vertex star."""
    rng = np.random.default_rng(seed)
    for tree in (path_tree(4), star_tree(4)):
        name = _label(tree)
        support = oracle.enumerate_planar(tree)
        counts = _tally(report, support, sampling.sample_planar(tree, rng, per_cell * len(support)), f"planar {name}")
        if counts is not None:
            res = oracle.chi_square_uniformity(counts, alpha=alpha)
            report.expect(res.passed, f"planar sampler not uniform on {name}: chi2={res.statistic:.2f} > {res.critical:.2f}")
        for r in range(tree.n):
            rooted = root_at(tree, r)
            support = oracle.enumerate_projective(rooted)
            draws = sampling.sample_projective(rooted, rng, per_cell * len(support))
            counts = _tally(report, support, draws, f"projective root={r + 1} {name}")
            if counts is not None:
                res = oracle.chi_square_uniformity(counts, alpha=alpha)
                report.expect(
                    res.passed,
                    f"projective sampler not uniform, root={r + 1} {name}: chi2={res.statistic:.2f} > {res.critical:.2f}",
                )


def _tally(report: Report, support, draws, what: str) -> list[int] | None:
    try:
        counts = oracle.support_counts(support, draws)
    except ValueError as exc:
        report.expect(False, f"{what}: {exc}")
        return None
    report.checks += 1
    return counts


def run_verification(max_n: int = 6, samplers: bool = True, seed: int = 12345) -> Report:
    """Every labeled tree with ``n <= max_n`` plus (for ``max_n >= 4``) sampler checks."""
    report = Report()
    for n in range(1, max_n + 1):
        pos = oracle.all_positions(n)
        check_unconstrained(n, report, pos)
        for tree in all_labeled_trees(n):
            check_counts(tree, report, pos)
            check_expectations(tree, report)
    if samplers and max_n >= 4:
        check_samplers(report, seed)
    return report
