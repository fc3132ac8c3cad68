"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import math
import time
from fractions import Fraction

import numpy as np

from groupcap.bounds import all_diagnostics, full_report, symmetric_capacity
from groupcap.channel import additive_noise_channel, bsc, entropy, make_channel
from groupcap.ensemble.code import EnsembleConfig
from groupcap.ensemble.montecarlo import monte_carlo_error
from groupcap.group import make_group, permute_rings
from groupcap.maxmin import RatioConstraint, grid_cross_check, maximize_min_ratio
from groupcap.verify import (
    DEFAULT_GROUPS,
    coset_typical_suite,
    config_grid,
    collision_suite,
    theta_class_suite,
    uniformity_suite,
)

RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def h2(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_criterion_1_linear_code_tightness():
    start = time.perf_counter()
    rep = full_report(bsc(0.1))
    elapsed = time.perf_counter() - start
    target = 1 - h2(0.1)
    errs = [abs(v - target) for v in (rep.lower, rep.upper, rep.shannon)]
    ok = max(errs) <= 1e-6 and abs(target - 0.53100) <= 1e-5 and elapsed < 1.0
    record(1, ok, f"lower={rep.lower:.8f} upper={rep.upper:.8f} shannon={rep.shannon:.8f} "
                  f"target={target:.8f} max_err={max(errs):.1e} time={elapsed:.3f}s")


def test_criterion_2_symmetric_tightness():
    z4 = make_group([(2, 2)])
    start = time.perf_counter()
    ch = additive_noise_channel(z4, [0.7, 0.1, 0.1, 0.1])
    rep = full_report(ch)
    sym = symmetric_capacity(ch)
    t1 = time.perf_counter() - start
    # direct entropy evaluation: whole group, and the coset {0, 2} scaled by 1/w_H = 2
    full = 2 - entropy([0.7, 0.1, 0.1, 0.1])
    pair = 2 * (entropy([0.4, 0.1, 0.4, 0.1]) - entropy([0.7, 0.1, 0.1, 0.1]))
    target = min(full, pair)
    ok1 = (
        max(abs(v - target) for v in (rep.lower, rep.upper, sym)) <= 1e-5
        and abs(target - 0.64322) <= 1e-5
        and abs(pair - 0.73029) <= 1e-5
        and t1 < 1.0
    )

    start = time.perf_counter()
    ch2 = additive_noise_channel(z4, [0.45, 0.05, 0.45, 0.05])
    rep2 = full_report(ch2)
    t2 = time.perf_counter() - start
    ok2 = (
        abs(rep2.lower) <= 1e-9
        and abs(rep2.upper) <= 1e-9
        and abs(rep2.shannon - 0.53100) <= 1e-5
        and t2 < 1.0
    )
    record(2, ok1 and ok2,
           f"(0.7,0.1,0.1,0.1): lower={rep.lower:.6f} upper={rep.upper:.6f} sym={sym:.6f} "
           f"target=min({full:.5f},{pair:.5f}) time={t1:.3f}s; "
           f"(0.45,0.05,0.45,0.05): lower={rep2.lower:.1e} upper={rep2.upper:.1e} "
           f"shannon={rep2.shannon:.6f} time={t2:.3f}s")


def grid():
    return list(config_grid(DEFAULT_GROUPS, (1, 2), (1, 2)))


def test_criterion_3_collision_formula_exact():
    start = time.perf_counter()
    res = collision_suite(grid())
    elapsed = time.perf_counter() - start
    ok = res.passed and res.cases > 0 and elapsed < 30
    record(3, ok, f"cases={res.cases} mismatches={res.failures} (exact rationals) time={elapsed:.1f}s")


def test_criterion_4_theta_class_sizes():
    res = theta_class_suite(grid())
    record(4, res.passed and res.cases > 0,
           f"checks={res.cases} (class sizes, bounds and partition sums) failures={res.failures}")


def test_criterion_5_marginal_uniformity():
    res = uniformity_suite(samples=200, seed=0)
    record(5, res.passed, f"codebooks=200 positions={res.cases} non-uniform={res.failures}")


MAXMIN_GROUPS = (
    [(2, 1)], [(3, 2)], [(2, 1), (3, 1)], [(2, 2), (2, 1)], [(2, 1), (2, 1)],
    [(2, 1), (3, 1), (5, 1)], [(2, 1), (2, 1), (3, 1)], [(3, 1), (3, 1), (2, 1)],
)


def channel_instance(rng, spec):
    channel = make_channel(make_group(spec), 3, rng.dirichlet(np.ones(3), size=make_group(spec).order))
    diags = all_diagnostics(channel)
    use_best = bool(rng.integers(2))
    cons = [RatioConstraint(d.theta, d.best if use_best else d.averaged, d.coeffs) for d in diags]
    return cons, channel.group.I


def test_criterion_6_maxmin_solver():
    rng = np.random.default_rng(6)
    worst = 0.0
    for c in range(100):
        cons, dim = channel_instance(rng, MAXMIN_GROUPS[c % len(MAXMIN_GROUPS)])
        sol = maximize_min_ratio(cons, dim)
        worst = max(worst, abs(sol.value - grid_cross_check(cons, dim, 2000)))

    L6, L3 = math.log2(6), math.log2(3)
    z6 = [
        RatioConstraint("G", L6, (1, 1)),
        RatioConstraint("0+Z3", L3, (0, 1)),
        RatioConstraint("Z2+0", 1.0, (1, 0)),
    ]
    sol = maximize_min_ratio(z6, 2)
    w_err = max(abs(a - b) for a, b in zip(sol.weights, (1 / L6, L3 / L6)))
    ok = worst <= 2e-3 and abs(sol.value - L6) <= 1e-9 and w_err <= 1e-6
    record(6, ok, f"random instances=100 max|solver-grid|={worst:.2e}; "
                  f"Z6 value err={abs(sol.value - L6):.1e} weight err={w_err:.1e}")


def test_criterion_7_achievability_trend():
    start = time.perf_counter()
    channel = bsc(0.05)
    curves = {}
    for rate in (0.5, 0.9):
        curves[rate] = []
        for n in (8, 16, 32, 64):
            cfg = EnsembleConfig(channel.group, (Fraction(1),), round(rate * n), n)
            curves[rate].append(monte_carlo_error(channel, cfg, 10000, seed=7).error_rate)
    elapsed = time.perf_counter() - start
    below, above = curves[0.5], curves[0.9]
    decreasing = all(a > b for a, b in zip(below, below[1:]))
    nondecreasing = all(a <= b for a, b in zip(above, above[1:]))
    ok = decreasing and (nondecreasing or above[-1] >= 0.4) and elapsed < 300
    record(7, ok, f"rate 0.5: {[round(v, 4) for v in below]}; rate 0.9: {[round(v, 4) for v in above]}; "
                  f"time={elapsed:.0f}s")


BRACKET_GROUPS = ([(2, 1)], [(3, 1)], [(2, 2)], [(2, 1), (3, 1)], [(2, 3)])


def permuted_channel(channel, perm):
    g2 = permute_rings(channel.group, perm)
    rows = [channel.row(tuple(x[perm.index(j)] for j in range(len(perm)))) for x in g2.elements]
    return make_channel(g2, channel.output_size, rows)


def test_criterion_8_bracket_sanity():
    rng = np.random.default_rng(8)
    order_viol = shannon_viol = perm_viol = 0
    worst_excess = 0.0
    for c in range(50):
        group = make_group(BRACKET_GROUPS[c % len(BRACKET_GROUPS)])
        ny = int(rng.integers(1, 7))
        ch = make_channel(group, ny, rng.dirichlet(np.ones(ny), size=group.order))
        rep = full_report(ch)
        if not (0 <= rep.lower <= rep.upper):
            order_viol += 1
        if rep.upper > rep.shannon + 1e-6:
            shannon_viol += 1
            worst_excess = max(worst_excess, rep.upper - rep.shannon)
        perm = tuple(reversed(range(group.I)))
        other = full_report(permuted_channel(ch, perm))
        if abs(other.lower - rep.lower) > 1e-12 or abs(other.upper - rep.upper) > 1e-12:
            perm_viol += 1
    ok = order_viol == 0 and shannon_viol == 0 and perm_viol == 0
    record(8, ok, f"channels=50 lower>upper or lower<0: {order_viol}; upper>shannon+1e-6: {shannon_viol} "
                  f"(worst excess {worst_excess:.3f} bits); permutation mismatches: {perm_viol}")


def test_criterion_9_coset_typical_counts():
    res = coset_typical_suite(samples=50, seed=0)
    record(9, res.passed and res.cases == 50, f"instances={res.cases} violations={res.failures}")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
