"""Root position on a star: uniform projective sampler vs left/right branching.

    python3 scripts/gt_counterexample.py --n 11 --samples 100000 --seed 0
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from linarr import sampling
from linarr.tree import root_at, star_tree


@dataclass(frozen=True)
class Config:
    n: int = 11
    samples: int = 100_000
    seed: int = 0


def run(cfg: Config) -> dict[str, tuple[float, float, float]]:
    star = root_at(star_tree(cfg.n), 0)
    rng = np.random.default_rng(cfg.seed)
    out = {}
    for name, fn, var in (
        ("uniform", sampling.sample_projective, (cfg.n**2 - 1) / 12),
        ("branching", sampling.sample_projective_gildea_temperley, (cfg.n - 1) / 4),
    ):
        pos = fn(star, rng, cfg.samples)[:, 0] + 1
        out[name] = (float(pos.mean()), float(pos.var()), var)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in Config.__dataclass_fields__.values():
        ap.add_argument(f"--{f.name}", type=int, default=f.default)
    cfg = Config(**vars(ap.parse_args()))
    print(f"star K_1,{cfg.n - 1}, {cfg.samples} samples, root position 1..{cfg.n}")
    print("sampler     mean      var   theory_var")
    for name, (m, v, tv) in run(cfg).items():
        print(f"{name:<10} {m:6.3f} {v:8.3f} {tv:10.3f}")


if __name__ == "__main__":
    main()
