"""Write every figure grid and print where each one peaks."""

import argparse
import time
from pathlib import Path

import numpy as np

from qdeform.figures import FIGURE_NAMES, figure_presets
from qdeform.grid import analytic_bound, evaluate_slice, find_peak
from qdeform.verification import write_figures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--count", type=int, default=301)
    ap.add_argument("--q", type=float, default=0.001)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    start = time.perf_counter()
    write_figures(args.out, count=args.count, workers=args.workers, q=args.q)
    print(f"wrote {len(FIGURE_NAMES)} grids to {args.out} in {time.perf_counter() - start:.1f} s")

    figs = figure_presets(q=args.q, count=args.count)
    print(f"{'figure':8} {'axes':8} {'peak_1':>10} {'peak_2':>10} {'W':>12} {'max|W|/bound':>13}  description")
    for name in FIGURE_NAMES:
        fig = figs[name]
        grid = evaluate_slice(fig.target, fig.slice, workers=args.workers)
        c1, c2, w = find_peak(grid)
        ratio = np.max(np.abs(grid.values)) / analytic_bound(fig.target)
        axes = f"{grid.axis1.label},{grid.axis2.label}"
        print(f"{name:8} {axes:8} {c1:10.4f} {c2:10.4f} {w:12.5e} {ratio:13.4f}  {fig.description}")


if __name__ == "__main__":
    main()
