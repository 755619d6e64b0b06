"""Coverage of [0,1]^2 by A_alpha, alpha = (-sqrt2, -sqrt3), against the budget.

Prints one row per budget for both index conventions (every index capped,
or only s capped) so the growth of the hit fraction can be read off.

    python3 scripts/coverage_sweep.py --budgets 50,100,200,400,800,1600
"""

import argparse
import time

from hyperlab.constructions import make_alpha, sample_A_alpha
from hyperlab.density import Window, coverage


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--budgets", default="50,100,200,400,800,1600")
    ap.add_argument("--eps", type=float, default=0.1)
    args = ap.parse_args()
    alpha = make_alpha(2, [2, 3])
    W = Window.cube(2, 0.0, 1.0)
    print(f"{'S':>6} {'all':>8} {'s only':>8} {'seconds':>8}")
    for S in (int(x) for x in args.budgets.split(",")):
        t0 = time.perf_counter()
        row = [coverage(sample_A_alpha(alpha, S, W, index_bound=ib), W, args.eps).coverage for ib in ("all", "s")]
        print(f"{S:>6} {row[0]:>8.4f} {row[1]:>8.4f} {time.perf_counter() - t0:>8.2f}")


if __name__ == "__main__":
    main()
