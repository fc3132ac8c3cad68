"""Ensemble error rate versus block length on BSC(0.05), below and above capacity.

    python scripts/achievability_trend.py --trials 10000 --seed 7
"""

import argparse
import json
import time
from fractions import Fraction

from groupcap.channel import bsc
from groupcap.ensemble.code import EnsembleConfig
from groupcap.ensemble.montecarlo import monte_carlo_error


def run(p: float, rates, ns, trials: int, seed: int, workers: int = 1) -> list[dict]:
    channel = bsc(p)
    rows = []
    for rate in rates:
        for n in ns:
            k = max(1, round(rate * n))
            cfg = EnsembleConfig(channel.group, (Fraction(1),), k, n)
            stats = monte_carlo_error(channel, cfg, trials, seed, workers)
            rows.append({"target_rate": rate, "n": n, "k": k, "rate": cfg.rate, **stats.to_dict()})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--rates", default="0.5,0.9")
    ap.add_argument("--n", default="8,16,32,64")
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    start = time.perf_counter()
    rows = run(
        args.p,
        [float(r) for r in args.rates.split(",")],
        [int(n) for n in args.n.split(",")],
        args.trials,
        args.seed,
        args.workers,
    )
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'R':>5}{'n':>5}{'k':>5}{'error_rate':>12}{'95% CI':>22}")
        for r in rows:
            print(f"{r['target_rate']:>5}{r['n']:>5}{r['k']:>5}{r['error_rate']:>12.4f}   [{r['ci_low']:.4f}, {r['ci_high']:.4f}]")
    print(f"# {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
