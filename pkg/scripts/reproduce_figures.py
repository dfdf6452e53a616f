"""Write sweep CSVs for every figure preset into an output directory.

    python3 scripts/reproduce_figures.py --out results --realizations 2000 --workers 4
"""
import argparse
from pathlib import Path

from d2d_access.cli import FIGURES, main


def run(out: Path, realizations: int, seed: int, workers: int) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(FIGURES):
        path = out / f"{name}.csv"
        argv = ["reproduce", name, "--seed", str(seed), "--realizations", str(realizations),
                "--workers", str(workers), "--out", str(path)]
        code = main(argv)
        print(f"{name}: exit {code} -> {path}", flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--realizations", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    run(a.out, a.realizations, a.seed, a.workers)
