"""Wall time of the linear-time routines against n, for random and path trees.

    python3 scripts/timing.py --sizes 10000 100000 1000000
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from linarr import expectations as ex
from linarr import sampling
from linarr.tree import path_tree, random_labeled_tree


@dataclass(frozen=True)
class Config:
    sizes: tuple[int, ...] = (10_000, 100_000, 1_000_000)
    shapes: tuple[str, ...] = ("random", "path")
    repeats: int = 3
    seed: int = 0
    routines: tuple[str, ...] = ("expected_D_planar", "expected_D_planar_bfs", "random_planar")


def _best(fn, repeats: int) -> float:
    fn()
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(cfg: Config) -> list[tuple[str, int, str, float]]:
    rows = []
    for shape in cfg.shapes:
        for n in cfg.sizes:
            # tree generation is setup and is not timed
            t = random_labeled_tree(n, np.random.default_rng(cfg.seed)) if shape == "random" else path_tree(n)
            calls = {
                "expected_D_planar": lambda: ex.expected_D_planar(t),
                "expected_D_planar_bfs": lambda: ex.expected_D_planar_bfs(t),
                "random_planar": lambda: sampling.random_planar(t, np.random.default_rng(cfg.seed)),
            }
            for name in cfg.routines:
                rows.append((shape, n, name, _best(calls[name], cfg.repeats)))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    ap.add_argument("--shapes", nargs="+", default=list(Config.shapes), choices=["random", "path"])
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    ns = ap.parse_args()
    cfg = Config(sizes=tuple(ns.sizes), shapes=tuple(ns.shapes), repeats=ns.repeats)
    print("shape,n,routine,seconds")
    for shape, n, name, s in run(cfg):
        print(f"{shape},{n},{name},{s:.4f}")


if __name__ == "__main__":
    main()
