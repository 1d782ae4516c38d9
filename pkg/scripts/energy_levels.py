"""Reduced energy in the ratio plane ``v = v2/v1`` with its critical points and collision loci."""

import argparse
import os
from dataclasses import asdict, dataclass

import numpy as np

from vortex4.cli import metadata_line
from vortex4.reduced_dynamics import energy_grid


@dataclass
class LevelRun:
    mu: float = 0.5
    extent: float = 1.5
    resolution: int = 301


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--resolution", type=int, default=301)
    args = ap.parse_args()
    run = LevelRun(resolution=args.resolution)
    os.makedirs(args.out, exist_ok=True)
    e = run.extent
    grid = energy_grid(run.mu, (-e, e, -e, e), run.resolution)
    path = os.path.join(args.out, "levels.csv")
    with open(path, "w") as fh:
        fh.write(grid.to_csv(metadata_line("levels", asdict(run))))
    for v, kind in sorted(grid.critical_points(), key=lambda c: (c[1], np.angle(c[0]))):
        print(f"{kind:6s} v = {v.real:+.10f} {v.imag:+.10f}i  |v| = {abs(v):.10f}")
    print(f"collision loci: {grid.collision_clusters()}  -> {path}")


if __name__ == "__main__":
    main()
