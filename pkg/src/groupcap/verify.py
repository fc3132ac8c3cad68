"""Oracle suites comparing closed forms with exhaustive enumeration."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .channel import make_channel
from .ensemble import lemmas
from .ensemble.code import EnsembleConfig, codebook, sample_encoder
from .group import Group, make_group, theta_subgroups

DEFAULT_GROUPS = ([(2, 1)], [(2, 2)], [(2, 1), (2, 1)], [(2, 1), (3, 1)])
MAX_DUMP = 5


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, detail: dict) -> None:
        self.failures += 1
        if len(self.counterexamples) < MAX_DUMP:
            self.counterexamples.append(detail)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def weight_grid(I: int, k: int):
    """Every weight vector with w_i k integral."""
    if k == 0:
        yield tuple(Fraction(1 if i == 0 else 0) for i in range(I))
        return
    for c in itertools.product(range(k + 1), repeat=I):
        if sum(c) == k:
            yield tuple(Fraction(x, k) for x in c)


def config_grid(groups, ks, ns, generator_mode: str = "ring"):
    for spec in groups:
        group = make_group(spec)
        for k in ks:
            for w in weight_grid(group.I, k):
                for n in ns:
                    yield EnsembleConfig(group, w, k, n, generator_mode=generator_mode)


def _describe(cfg: EnsembleConfig) -> dict:
    return {
        "group": [list(r) for r in cfg.group.rings],
        "weights": [str(w) for w in cfg.weights],
        "k": cfg.k,
        "n": cfg.n,
        "generator_mode": cfg.generator_mode,
    }


def collision_suite(configs, fault: bool = False) -> SuiteResult:
    """Collision probability formula against the (generator, dither) enumeration."""
    res = SuiteResult("collision_probability")
    for cfg in configs:
        seqs = lemmas._all_sequences(cfg.group, cfg.n)
        for a in lemmas.nonzero_differences(cfg):
            joint, marginal = lemmas.collision_table(cfg, a)
            for i0, x in enumerate(seqs):
                for i1, xt in enumerate(seqs):
                    res.cases += 1
                    brute = Fraction(int(joint[i0, i1]), int(marginal[i0]))
                    formula = lemmas.collision_prob_formula(cfg, a, x, xt)
                    if fault and i0 == 0 and i1 == 0:
                        formula *= 2
                    if brute != formula:
                        res.fail({
                            **_describe(cfg),
                            "a": [list(b) for b in a],
                            "x": x.tolist(),
                            "x_tilde": xt.tolist(),
                            "formula": str(formula),
                            "enumerated": str(brute),
                        })
    return res


def theta_class_suite(configs, fault: bool = False) -> SuiteResult:
    """Class sizes against enumeration, the stated bound, and the partition sum."""
    res = SuiteResult("theta_class_sizes")
    for cfg in configs:
        total = 0
        for theta in lemmas.extended_thetas(cfg):
            res.cases += 1
            count = lemmas.count_theta_class(cfg, theta)
            formula = lemmas.theta_class_size_formula(cfg, theta) + (1 if fault else 0)
            bound = lemmas.theta_class_size_bound(cfg, theta)
            total += count
            if count != formula or count > bound:
                res.fail({**_describe(cfg), "theta": list(theta), "count": count, "formula": formula, "bound": bound})
        res.cases += 1
        if total != cfg.M - 1:
            res.fail({**_describe(cfg), "partition_sum": total, "expected": cfg.M - 1})
    return res


def random_config(rng: np.random.Generator, max_messages: int = 256, max_n: int = 8) -> EnsembleConfig:
    groups = ([(2, 1)], [(3, 1)], [(2, 2)], [(2, 3)], [(2, 1), (2, 1)], [(2, 1), (3, 1)], [(2, 2), (2, 1)])
    while True:
        group = make_group(groups[int(rng.integers(len(groups)))])
        k = int(rng.integers(0, 5))
        ws = list(weight_grid(group.I, k))
        cfg = EnsembleConfig(group, ws[int(rng.integers(len(ws)))], k, int(rng.integers(1, max_n + 1)))
        if cfg.M <= max_messages:
            return cfg


def uniformity_suite(samples: int = 200, seed: int = 0, fault: bool = False) -> SuiteResult:
    """Every position of a sampled shifted codebook is uniform on a coset."""
    res = SuiteResult("marginal_uniformity")
    rng = np.random.default_rng(seed)
    for s in range(samples):
        cfg = random_config(rng)
        enc = sample_encoder(cfg, rng)
        book = codebook(enc)
        if fault:
            book = book.copy()
            book[0, 0, 0] = (book[0, 0, 0] + 1) % cfg.group.moduli[0]
        for N, pos in enumerate(lemmas.marginal_uniformity_check(book, cfg.group)):
            res.cases += 1
            if not pos.uniform:
                res.fail({**_describe(cfg), "sample": s, "position": N, "support": sorted(map(list, pos.support))})
    return res


def random_typical_instance(rng: np.random.Generator, max_n: int = 8):
    """(channel, x, y, theta, eps) with x jointly typical with y."""
    groups = ([(2, 1)], [(3, 1)], [(2, 2)], [(2, 1), (3, 1)], [(2, 1), (2, 1)])
    group = make_group(groups[int(rng.integers(len(groups)))])
    ny = int(rng.integers(2, 5))
    W = rng.dirichlet(np.full(ny, 0.7), size=group.order)
    channel = make_channel(group, ny, W)
    n = int(rng.integers(4, max_n + 1))
    while group.order**n > lemmas.SEQUENCE_CAP:
        n -= 1
    x = rng.integers(group.order, size=n)
    y = np.array([rng.choice(ny, p=W[i]) for i in x])
    thetas = [tuple(0 for _ in group.rings)] + theta_subgroups(group)
    theta = thetas[int(rng.integers(len(thetas)))]
    eps = lemmas.min_typical_eps(channel, x, y) * float(rng.uniform(1.0, 2.0))
    return channel, x, y, theta, eps


def coset_typical_suite(samples: int = 50, seed: int = 0, fault: bool = False) -> SuiteResult:
    """Coset-typical counts against the exponential bound with explicit slack."""
    res = SuiteResult("coset_typical_count")
    rng = np.random.default_rng(seed)
    for s in range(samples):
        channel, x, y, theta, eps = random_typical_instance(rng)
        rep = lemmas.coset_typical_count_check(channel, x, y, theta, eps)
        res.cases += 1
        bound = 0.5 if fault else rep.bound
        if rep.count > bound:
            res.fail({
                "group": [list(r) for r in channel.group.rings],
                "sample": s,
                "theta": list(theta),
                "eps": eps,
                "count": rep.count,
                "bound": bound,
                "slack": rep.slack,
            })
    return res


def default_suites(fault: bool = False) -> list[SuiteResult]:
    grid = list(config_grid(DEFAULT_GROUPS, (1, 2), (1, 2)))
    return [
        collision_suite(grid, fault),
        theta_class_suite(grid, fault),
        uniformity_suite(fault=fault),
        coset_typical_suite(fault=fault),
    ]


def group_suites(group: Group, k: int, n: int, generator_mode: str = "ring", fault: bool = False) -> list[SuiteResult]:
    configs = list(config_grid([group.rings], (k,), (n,), generator_mode))
    return [collision_suite(configs, fault), theta_class_suite(configs, fault)]
