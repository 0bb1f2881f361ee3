"""Projective/planar coverage of PUD-style corpora next to the published rows.

Expects one directory of ``<code>_<name>-*.conllu`` files per collection:

    python3 scripts/corpus_coverage.py --pud ~/ud/pud --psud ~/ud/psud --out results/
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from linarr import treebank

REFERENCE = Path(__file__).resolve().parent.parent / "tests" / "data"


@dataclass(frozen=True)
class Config:
    pud: Path | None = None
    psud: Path | None = None
    out: Path = Path("results")
    jobs: int = 1


def _reference(name: str) -> dict[str, tuple[str, float, float]]:
    with open(REFERENCE / f"coverage_{name}.csv", newline="") as fh:
        return {r["code"]: (r["language"], float(r["pct_projective"]), float(r["pct_planar"])) for r in csv.DictReader(fh)}


def run_collection(name: str, directory: Path, cfg: Config) -> list[tuple[str, str, float, float, float, float]]:
    files = sorted(directory.glob("*.conllu"))
    paths, diags = treebank.analyze_files(
        [f"{f.name.split('_')[0]}={f}" for f in files], cfg.out / name, jobs=cfg.jobs
    )
    print(f"{name}: {len(files)} files, {len(diags)} sentences dropped; tables in {cfg.out / name}")
    ref = _reference(name)
    rows = []
    with open(paths["coverage"], newline="") as fh:
        for r in csv.DictReader(fh):
            lang, ref_pr, ref_pl = ref.get(r["lang"], (r["lang"], float("nan"), float("nan")))
            rows.append((r["lang"], lang, float(r["pct_projective"]), ref_pr, float(r["pct_planar"]), ref_pl))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pud", type=Path)
    ap.add_argument("--psud", type=Path)
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--jobs", type=int, default=1)
    cfg = Config(**vars(ap.parse_args()))
    for name in ("pud", "psud"):
        directory = getattr(cfg, name)
        if directory is None:
            continue
        print("code,language,projective,published,planar,published")
        for code, lang, pr, rpr, pl, rpl in run_collection(name, directory, cfg):
            print(f"{code},{lang},{pr:.1f},{rpr:.1f},{pl:.1f},{rpl:.1f}")


if __name__ == "__main__":
    main()
