"""Command line entry point: ``linarr {expectations,sample,verify,analyze}``.

Vertex ids on the command line and in all output are 1-based.
Exit codes: 0 ok, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import counting
from . import expectations as ex
from . import sampling, treebank, verify
from .tree import FreeTree, RootedTree, TreeError, from_head_vector, parse_tree_text, root_at

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    command: str
    tree_path: str | None = None
    heads: str | None = None
    roots: str | None = None
    constraint: str = "planar"
    gt: bool = False
    seed: int | None = None
    count: int = 1
    max_n: int = 6
    samplers: bool = True
    out: str | None = None
    inputs: tuple[str, ...] = field(default_factory=tuple)
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.command == "sample" and self.seed is None:
            raise InputError("sample needs --seed")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise InputError("--seed must be an unsigned 64-bit integer")
        if self.count < 0:
            raise InputError("--count must be nonnegative")


def _fraction(x: Fraction | int) -> str:
    x = Fraction(x)
    num = str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return f"{num}\t{treebank.format_decimal(x)}"


def load_tree(cfg: Config) -> FreeTree | RootedTree:
    try:
        if cfg.heads is not None:
            heads = [int(h) for h in cfg.heads.replace(",", " ").split()]
            return from_head_vector(heads)
        if cfg.tree_path is None:
            raise InputError("give --tree or --heads")
        text = sys.stdin.read() if cfg.tree_path == "-" else Path(cfg.tree_path).read_text(encoding="utf-8")
        return parse_tree_text(text)
    except (TreeError, ValueError) as exc:
        raise InputError(f"bad tree: {exc}") from None
    except OSError as exc:
        raise InputError(f"cannot read tree: {exc}") from None


def _rootings(tree: FreeTree | RootedTree, roots: str | None) -> list[RootedTree]:
    """Requested rootings: ``--root`` (ids, comma separated, or ``all``), else
    the annotated root of a head vector, else vertex 1."""
    base = tree.base if isinstance(tree, RootedTree) else tree
    if roots is None:
        return [tree if isinstance(tree, RootedTree) else root_at(base, 0)]
    if roots.strip() == "all":
        return [root_at(base, r) for r in range(base.n)]
    out = []
    for tok in roots.split(","):
        try:
            r = int(tok) - 1
        except ValueError:
            raise InputError(f"bad root id {tok!r}") from None
        if not 0 <= r < base.n:
            raise InputError(f"root {r + 1} outside 1..{base.n}")
        out.append(root_at(base, r))
    return out


def cmd_expectations(cfg: Config, out: TextIO) -> int:
    tree = load_tree(cfg)
    base = tree.base if isinstance(tree, RootedTree) else tree
    n = base.n
    lines = [
        f"n\t{n}",
        f"N_unc\t{counting.count_unconstrained(n)}",
        f"N_pl\t{counting.count_planar(base)}",
        f"E_unc\t{_fraction(ex.expected_D_unconstrained(n))}",
        f"E_pl\t{_fraction(ex.expected_D_planar(base))}",
    ]
    try:
        lines.append(f"E_C>=1\t{_fraction(ex.expected_D_crossing(base))}")
    except ex.UndefinedExpectationError:
        lines.append("E_C>=1\tundefined")
    for rooted in _rootings(tree, cfg.roots):
        r = rooted.root + 1
        lines.append(f"root {r}\tN_pr\t{counting.count_projective(rooted)}")
        lines.append(f"root {r}\tE_pr\t{_fraction(ex.expected_D_projective(rooted))}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sample(cfg: Config, out: TextIO) -> int:
    tree = load_tree(cfg)
    base = tree.base if isinstance(tree, RootedTree) else tree
    rng = sampling.make_rng(cfg.seed)
    if cfg.gt and cfg.constraint != "projective":
        raise InputError("--gt applies to --constraint projective only")
    if cfg.constraint == "none":
        pos = sampling.sample_unconstrained(base.n, rng, cfg.count)
    elif cfg.constraint == "planar":
        pos = sampling.sample_planar(base, rng, cfg.count)
    else:
        rootings = _rootings(tree, cfg.roots)
        if len(rootings) != 1:
            raise InputError("projective sampling needs exactly one root")
        fn = sampling.sample_projective_gildea_temperley if cfg.gt else sampling.sample_projective
        pos = fn(rootings[0], rng, cfg.count)
    order = np.argsort(pos, axis=1) + 1
    for row in order.tolist():
        out.write(" ".join(map(str, row)) + "\n")
    return EXIT_OK


def cmd_verify(cfg: Config, out: TextIO) -> int:
    report = verify.run_verification(cfg.max_n, samplers=cfg.samplers)
    if report.ok:
        out.write(f"verify: {report.checks} checks passed (max-n={cfg.max_n})\n")
        return EXIT_OK
    out.write(f"verify: {len(report.failures)} of {report.checks} checks FAILED (max-n={cfg.max_n})\n")
    for f in report.failures[:50]:
        out.write(f"  FAIL {f}\n")
    if len(report.failures) > 50:
        out.write(f"  ... and {len(report.failures) - 50} more\n")
    return EXIT_VERIFY


def cmd_analyze(cfg: Config, out: TextIO) -> int:
    if cfg.out is None:
        raise InputError("analyze needs --out")
    try:
        paths, diags = treebank.analyze_files(cfg.inputs, cfg.out, jobs=cfg.jobs)
    except treebank.ConlluError as exc:
        raise InputError(str(exc)) from None
    for path, d in diags:
        sys.stderr.write(f"{path}:{d.line}: sent_id={d.sent_id}: {d.message}\n")
    for key in sorted(paths):
        out.write(f"{key}\t{paths[key]}\n")
    return EXIT_OK


COMMANDS = {
    "expectations": cmd_expectations,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "analyze": cmd_analyze,
}


def _tree_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tree", dest="tree_path", help="edge list or head vector file ('-' for stdin)")
    g.add_argument("--heads", help="head vector, e.g. '2,0,2' or '2 0 2'")
    p.add_argument("--root", dest="roots", help="1-based root id(s), comma separated, or 'all'")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linarr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expectations", help="counts and exact expected D")
    _tree_args(p)

    p = sub.add_parser("sample", help="uniform random arrangements, one per line")
    _tree_args(p)
    p.add_argument("--constraint", choices=["none", "planar", "projective"], default="planar")
    p.add_argument("--gt", action="store_true", help="non-uniform left/right branching sampler (projective)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("verify", help="formulas and samplers against brute force")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--no-samplers", dest="samplers", action="store_false")

    p = sub.add_parser("analyze", help="CoNLL-U files to CSV tables")
    p.add_argument("inputs", nargs="*", help="CoNLL-U files, optionally as lang=path")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    return ap


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    kw = vars(ns)
    if "inputs" in kw:
        kw["inputs"] = tuple(kw["inputs"])
    try:
        cfg = Config(**kw)
        return COMMANDS[cfg.command](cfg, out)
    except InputError as exc:
        sys.stderr.write(f"linarr: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
