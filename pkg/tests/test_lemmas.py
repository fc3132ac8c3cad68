from fractions import Fraction

import numpy as np
import pytest

from groupcap.channel import make_channel
from groupcap.ensemble import lemmas
from groupcap.ensemble.code import EnsembleConfig, Encoder, codebook, sample_encoder
from groupcap.group import EnumerationCapError, make_group
from groupcap.verify import coset_typical_suite, random_config

Z2 = make_group([(2, 1)])
Z4 = make_group([(2, 2)])
Z2Z2 = make_group([(2, 1), (2, 1)])
Z2Z3 = make_group([(2, 1), (3, 1)])


def arr(*coords):
    return np.array([[c] if isinstance(c, int) else list(c) for c in coords])


def test_theta_of_difference():
    cfg = EnsembleConfig(Z4, (1,), 2, 1)
    assert lemmas.theta_of_difference(cfg, ((2, 0),)) == (1,)
    assert lemmas.theta_of_difference(cfg, ((2, 1),)) == (0,)
    mixed = EnsembleConfig(Z2Z3, (1, 0), 1, 1)
    assert lemmas.theta_of_difference(mixed, ((1,), ())) == (0, 1)


def test_collision_examples():
    cfg = EnsembleConfig(Z2, (1,), 1, 1)
    for xt in (0, 1):
        assert lemmas.collision_prob_formula(cfg, ((1,),), arr(0), arr(xt)) == Fraction(1, 2)
        assert lemmas.collision_prob_bruteforce(cfg, ((1,),), arr(0), arr(xt)) == Fraction(1, 2)
    z4 = EnsembleConfig(Z4, (1,), 1, 1)
    for x in range(4):
        for xt in range(4):
            expected = Fraction(1, 2) if (xt - x) % 2 == 0 else Fraction(0)
            assert lemmas.collision_prob_formula(z4, ((2,),), arr(x), arr(xt)) == expected
            assert lemmas.collision_prob_bruteforce(z4, ((2,),), arr(x), arr(xt)) == expected
    with pytest.raises(ValueError):
        lemmas.collision_prob_formula(z4, ((0,),), arr(0), arr(0))


def test_collision_z4_all_differences():
    cfg = EnsembleConfig(Z4, (1,), 1, 1)
    for a in lemmas.nonzero_differences(cfg):
        for x in range(4):
            for xt in range(4):
                assert lemmas.collision_prob_formula(cfg, a, arr(x), arr(xt)) == lemmas.collision_prob_bruteforce(cfg, a, arr(x), arr(xt))


def test_collision_z2z3_and_other_message():
    cfg = EnsembleConfig(Z2Z3, (Fraction(1, 2), Fraction(1, 2)), 2, 1)
    seqs = lemmas._all_sequences(Z2Z3, 1)
    for a in lemmas.nonzero_differences(cfg):
        joint, marginal = lemmas.collision_table(cfg, a, m=5)
        for i0, x in enumerate(seqs):
            for i1, xt in enumerate(seqs):
                assert Fraction(int(joint[i0, i1]), int(marginal[i0])) == lemmas.collision_prob_formula(cfg, a, x, xt)


def test_annihilator_mode_breaks_formula_on_repeated_prime():
    # with generators from the whole annihilator, a Z2+0 digit spreads over all of G
    cfg = EnsembleConfig(Z2Z2, (1, 0), 1, 1, generator_mode="annihilator")
    a = ((1,), ())
    x = arr((0, 0))
    assert lemmas.collision_prob_bruteforce(cfg, a, x, arr((0, 1))) == Fraction(1, 4)
    assert lemmas.collision_prob_formula(cfg, a, x, arr((0, 1))) == Fraction(0)


def test_bruteforce_cap():
    cfg = EnsembleConfig(Z4, (1,), 4, 4)
    with pytest.raises(EnumerationCapError):
        lemmas.collision_table(cfg, ((1, 0, 0, 0),))


def test_theta_class_examples():
    cfg = EnsembleConfig(Z4, (1,), 2, 1)
    assert lemmas.count_theta_class(cfg, (0,)) == 12 == lemmas.theta_class_size_formula(cfg, (0,))
    assert lemmas.count_theta_class(cfg, (1,)) == 3 == lemmas.theta_class_size_formula(cfg, (1,))
    assert lemmas.count_theta_class(cfg, (0,), m=9) == 12
    assert lemmas.count_theta_class(EnsembleConfig(Z2, (1,), 1, 1), (0,)) == 1
    with pytest.raises(ValueError):
        lemmas.count_theta_class(cfg, (3,))


def test_partition_sum():
    rng = np.random.default_rng(3)
    for _ in range(30):
        cfg = random_config(rng)
        counts = [lemmas.count_theta_class(cfg, t) for t in lemmas.extended_thetas(cfg)]
        assert sum(counts) == cfg.M - 1
        for t, c in zip(lemmas.extended_thetas(cfg), counts):
            assert c == lemmas.theta_class_size_formula(cfg, t) <= lemmas.theta_class_size_bound(cfg, t)


def test_marginal_uniformity_examples():
    rng = np.random.default_rng(0)
    for _ in range(30):
        cfg = random_config(rng)
        enc = sample_encoder(cfg, rng)
        assert all(p.uniform for p in lemmas.marginal_uniformity_check(codebook(enc), cfg.group))
        no_dither = Encoder(cfg, enc.generators, np.zeros_like(enc.dither))
        for pos in lemmas.marginal_uniformity_check(codebook(no_dither), cfg.group):
            assert pos.uniform and tuple(0 for _ in cfg.group.rings) in pos.support
    k0 = EnsembleConfig(Z4, (1,), 0, 3)
    single = lemmas.marginal_uniformity_check(codebook(sample_encoder(k0, rng)), Z4)
    assert all(len(p.support) == 1 and p.uniform for p in single)
    skewed = np.array([[[0]], [[0]], [[1]]])
    assert not lemmas.marginal_uniformity_check(skewed, Z2)[0].uniform
    not_coset = np.array([[[0]], [[1]], [[2]]])  # {0,1,2} in Z4
    assert not lemmas.marginal_uniformity_check(np.concatenate([not_coset, not_coset[:1]]), Z4)[0].uniform


def test_coset_typical_whole_space():
    ch = make_channel(Z2, 2, [[0.8, 0.2], [0.3, 0.7]])
    x = np.array([0, 1, 0, 1, 1])
    y = np.array([0, 1, 1, 1, 0])
    rep = lemmas.coset_typical_count_check(ch, x, y, (0,), eps=100.0)
    assert rep.count == 2**5
    assert rep.count <= rep.bound


def test_coset_typical_deterministic_channel():
    ch = make_channel(Z4, 4, np.eye(4))
    x = np.array([0, 1, 2, 3, 3, 2, 1, 0])
    rep = lemmas.coset_typical_count_check(ch, x, x.copy(), (0,), eps=0.5)
    assert rep.count == 1
    assert rep.count <= rep.bound
    with pytest.raises(ValueError):
        lemmas.coset_typical_count_check(ch, x, (x + 1) % 4, (0,), eps=0.5)


def test_coset_typical_random_instances():
    res = coset_typical_suite(samples=50, seed=1)
    assert res.cases == 50 and res.failures == 0


def test_unconditioned_exponent_can_fall_below_count():
    # noiseless Z4, theta = (1): the literal exponent H(X|Y) - H([X]) is negative
    ch = make_channel(Z4, 4, np.eye(4))
    x = np.array([0, 1, 2, 3])
    rep = lemmas.coset_typical_count_check(ch, x, x.copy(), (1,), eps=0.1)
    assert rep.count == 1
    assert rep.unconditioned_exponent < 0
    assert 2 ** (len(x) * rep.unconditioned_exponent) < rep.count <= rep.bound
