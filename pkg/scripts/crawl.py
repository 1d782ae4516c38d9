"""Drift of the perturbed equilateral configuration against the emergent-mass prediction."""

import argparse
import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from vortex4.cli import metadata_line
from vortex4.poincare import crawl_experiment


@dataclass
class CrawlRun:
    alpha_e: float = 1.0
    periods: int = 20
    eps_values: tuple = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)

    @property
    def gamma(self) -> float:
        return 3 * math.pi * self.alpha_e**2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--alpha", type=float, default=1.0)
    args = ap.parse_args()
    run = CrawlRun(alpha_e=args.alpha)
    os.makedirs(args.out, exist_ok=True)
    t_end = run.periods * 2 * math.pi * 3 * math.pi * run.alpha_e**2 / run.gamma
    lines = [metadata_line("crawl", asdict(run) | {"gamma": run.gamma}), "eps,drift_re,drift_im,predicted,rel_error,angle_deg"]
    for eps in run.eps_values:
        drift, pred = crawl_experiment(run.alpha_e, run.gamma, eps, t_end)
        rel = abs(drift - pred) / abs(pred)
        ang = math.degrees(np.angle(drift / pred))
        lines.append(",".join(repr(float(x)) for x in (eps, drift.real, drift.imag, pred.real, rel, ang)))
        print(f"eps={eps:.0e}: drift {drift:.5e}  p/m_e {pred.real:.5e}  rel {rel:.2e}  angle {ang:+.3f} deg")
    path = os.path.join(args.out, f"crawl_a{run.alpha_e:g}.csv")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"-> {path}")


if __name__ == "__main__":
    main()
