"""Lower/upper bounds against Shannon capacity on random channels.

Counts how often the upper bound exceeds the Shannon capacity and whether
G itself was a maximal subgroup in those cases.
"""

import argparse

import numpy as np

from groupcap.bounds import full_report
from groupcap.channel import make_channel
from groupcap.group import make_group

GROUPS = ([(2, 1)], [(3, 1)], [(2, 2)], [(2, 1), (3, 1)], [(2, 3)])


def random_channel(rng, spec, max_outputs: int = 6, alpha: float = 1.0):
    group = make_group(spec)
    ny = int(rng.integers(2, max_outputs + 1))
    return make_channel(group, ny, rng.dirichlet(np.full(ny, alpha), size=group.order))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--channels", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, default=1.0, help="Dirichlet concentration of the rows")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    stats = {"upper>shannon": 0, "G not maximal": 0, "upper>shannon with G maximal": 0, "lower>upper": 0}
    worst = 0.0
    for c in range(args.channels):
        ch = random_channel(rng, GROUPS[c % len(GROUPS)], alpha=args.alpha)
        rep = full_report(ch)
        g_max = next(d.maximal for d in rep.diagnostics if not any(d.theta))
        over = rep.upper - rep.shannon
        stats["G not maximal"] += not g_max
        stats["lower>upper"] += rep.lower > rep.upper + 1e-9
        if over > 1e-6:
            stats["upper>shannon"] += 1
            stats["upper>shannon with G maximal"] += g_max
            worst = max(worst, over)
    for key, val in stats.items():
        print(f"{key:<32}{val:>6} / {args.channels}")
    print(f"{'largest upper - shannon':<32}{worst:>10.4f}")


if __name__ == "__main__":
    main()
