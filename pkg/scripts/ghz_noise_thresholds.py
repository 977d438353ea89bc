"""White-noise robustness thresholds for the uniform two-branch family.

For each qubit count n the target p * |ghz_n><ghz_n| + (1 - p) * I/D is
scanned over the mixing weight, and the detection threshold p* is bisected
to the requested resolution.  For n = 2 the k = 2 threshold of this probe
family is 1/sqrt(5) ~ 0.4472, a useful sanity anchor.

Usage:
    python3 scripts/ghz_noise_thresholds.py
    python3 scripts/ghz_noise_thresholds.py --n 2 3 4 --all-k --resolution 2e-3
"""

from __future__ import annotations

import argparse
import time

from ksep import ghz
from ksep.search import SearchConfig, scan_noise


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--all-k", action="store_true", help="scan every k in 2..n, not just k=2")
    parser.add_argument("--resolution", type=float, default=5e-3)
    parser.add_argument("--restarts", type=int, default=2)
    parser.add_argument("--max-iters", type=int, default=40)
    parser.add_argument("--seed", type=int, default=3)
    args = parser.parse_args(argv)

    cfg = SearchConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    print(f"# resolution={args.resolution:g} restarts={cfg.restarts} "
          f"max_iters={cfg.max_iters} seed={cfg.seed}")
    print(f"{'n':>3} {'k':>3} {'p*':>10} {'bracket':>24} {'evals':>6} {'fallback':>8} {'secs':>7}")
    for n in args.n:
        target = ghz(n).to_density()
        ks = range(2, n + 1) if args.all_k else [2]
        for k in ks:
            started = time.perf_counter()
            result = scan_noise(target, k, args.resolution, cfg)
            secs = time.perf_counter() - started
            lo, hi = result.bracket
            print(f"{n:>3} {k:>3} {result.p_star:>10.6f} "
                  f"{f'[{lo:.6f}, {hi:.6f}]':>24} {len(result.trace):>6} "
                  f"{str(result.grid_fallback):>8} {secs:>7.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
