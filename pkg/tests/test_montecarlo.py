from fractions import Fraction

import numpy as np
import pytest

from groupcap.channel import bsc, make_channel
from groupcap.ensemble import montecarlo
from groupcap.ensemble.code import EnsembleConfig
from groupcap.ensemble.montecarlo import monte_carlo_error, transmit, wilson_interval
from groupcap.group import make_group

Z2 = make_group([(2, 1)])
Z4 = make_group([(2, 2)])


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.03 < hi < 0.04
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4) and hi == pytest.approx(0.5962, abs=1e-4)
    assert wilson_interval(10, 10)[1] == 1.0


def test_noiseless_has_no_errors():
    ch = make_channel(Z4, 4, np.eye(4))
    # n much larger than k keeps codewords distinct with overwhelming probability
    cfg = EnsembleConfig(Z4, (1,), 1, 12)
    st = monte_carlo_error(ch, cfg, 300, seed=1)
    assert st.errors == 0 and st.error_rate == 0.0 and st.ci_low == 0.0


def test_useless_channel_is_blind_guessing():
    cfg = EnsembleConfig(Z2, (1,), 4, 4)
    st = monte_carlo_error(bsc(0.5), cfg, 3000, seed=2)
    assert st.ci_low <= 1 - 1 / 16 <= st.ci_high


def test_far_above_capacity():
    cfg = EnsembleConfig(Z2, (1,), 14, 16)
    st = monte_carlo_error(bsc(0.4), cfg, 300, seed=3)
    assert st.error_rate > 0.9


def test_determinism_and_worker_independence():
    cfg = EnsembleConfig(Z2, (1,), 4, 10)
    a = monte_carlo_error(bsc(0.1), cfg, 400, seed=7)
    b = monte_carlo_error(bsc(0.1), cfg, 400, seed=7)
    c = monte_carlo_error(bsc(0.1), cfg, 400, seed=7, workers=2)
    assert a == b == c
    assert a.ci_low <= a.error_rate <= a.ci_high


def test_fast_path_agrees_with_codebook_decoder(monkeypatch):
    cfg = EnsembleConfig(Z2, (1,), 4, 10)
    fast = monte_carlo_error(bsc(0.1), cfg, 500, seed=11)
    monkeypatch.setattr(montecarlo, "is_bsc", lambda channel: None)
    slow = monte_carlo_error(bsc(0.1), cfg, 500, seed=11)
    assert fast.errors == slow.errors


def test_fixed_code_mode():
    cfg = EnsembleConfig(Z2, (1,), 3, 8)
    a = monte_carlo_error(bsc(0.1), cfg, 200, seed=5, fixed_code=True)
    assert a == monte_carlo_error(bsc(0.1), cfg, 200, seed=5, fixed_code=True)


def test_ml_beats_typicality_on_average():
    ch = bsc(0.1)
    ml = typ = 0
    for seed in range(10):
        base = dict(group=Z2, weights=(Fraction(1),), k=2, n=10)
        ml += monte_carlo_error(ch, EnsembleConfig(**base), 100, seed).errors
        typ += monte_carlo_error(ch, EnsembleConfig(**base, decoder="typicality", eps=0.5), 100, seed).errors
    assert ml <= typ


def test_typicality_trend():
    ch = bsc(0.05)
    rates = []
    for n in (32, 64):
        cfg = EnsembleConfig(Z2, (1,), n // 8, n, decoder="typicality", eps=0.4)
        rates.append(monte_carlo_error(ch, cfg, 200, seed=4).error_rate)
    assert rates[1] <= rates[0]


def test_transmit_statistics():
    rng = np.random.default_rng(0)
    y = transmit(bsc(0.2), np.zeros(20000, dtype=int), rng)
    assert abs(y.mean() - 0.2) < 0.01


def test_group_mismatch():
    with pytest.raises(ValueError):
        monte_carlo_error(bsc(0.1), EnsembleConfig(Z4, (1,), 1, 2), 1, 0)
    with pytest.raises(ValueError):
        monte_carlo_error(bsc(0.1), EnsembleConfig(Z2, (1,), 1, 2), 0, 0)
