"""Monte Carlo estimates of the ensemble-average block error probability."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..channel import Channel
from .code import (
    EnsembleConfig,
    Encoder,
    codebook,
    encode,
    message_index,
    sample_encoder,
    split_digits,
    symbol_indices,
)
from .decode import ml_decode, typicality_decode
from .fastml import binary_ml_error, is_bsc

MAX_CODEBOOK = 1 << 16


@dataclass(frozen=True)
class TrialStats:
    trials: int
    errors: int
    error_rate: float
    ci_low: float
    ci_high: float
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = errors / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(centre - half, phat)), min(1.0, max(centre + half, phat))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 0, index]))


def transmit(channel: Channel, symbols: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(channel.matrix[symbols], axis=1)
    u = rng.random(len(symbols))
    out = (u[:, None] >= cdf).sum(axis=1)
    return np.minimum(out, channel.output_size - 1)


def _sample_word(config: EnsembleConfig, rng):
    digits = [int(rng.integers(r)) for r in config.radices]
    return split_digits(config, digits)


def run_trial(channel: Channel, config: EnsembleConfig, rng, encoder: Encoder | None = None) -> bool:
    """One transmission; True when the decoded message differs from the sent one."""
    if encoder is None:
        encoder = sample_encoder(config, rng)
    word = _sample_word(config, rng)
    m0 = message_index(config, word)
    x = symbol_indices(config.group, encode(encoder, word))
    y = transmit(channel, x, rng)

    if config.decoder == "ml" and is_bsc(channel) is not None and config.n <= 64:
        rows = [int(sum(int(b) << N for N, b in enumerate(g[:, 0]))) for g in encoder.generators]
        e = int(sum(int(b) << N for N, b in enumerate(x ^ y)))
        return binary_ml_error(rows, config.n, e, m0)

    cb = symbol_indices(config.group, codebook(encoder, MAX_CODEBOOK))
    if config.decoder == "ml":
        return ml_decode(channel, cb, y) != m0
    return typicality_decode(channel, cb, y, config.eps) != m0


def _count_errors(args) -> int:
    channel, config, seed, indices, fixed_code = args
    enc = sample_encoder(config, np.random.default_rng(np.random.SeedSequence([seed, 1]))) if fixed_code else None
    return sum(run_trial(channel, config, trial_rng(seed, t), enc) for t in indices)


def monte_carlo_error(
    channel: Channel,
    config: EnsembleConfig,
    trials: int,
    seed: int,
    workers: int = 1,
    fixed_code: bool = False,
) -> TrialStats:
    """Error rate over ``trials`` independent (encoder, message, noise) draws.

    Trial t uses a substream seeded by ``(seed, t)``, so the result does not
    depend on ``workers``.  ``fixed_code`` draws a single encoder for all trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if channel.group != config.group:
        raise ValueError("channel and ensemble use different groups")
    if workers <= 1:
        errors = _count_errors((channel, config, seed, range(trials), fixed_code))
    else:
        chunks = [range(s, trials, workers) for s in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(_count_errors, [(channel, config, seed, c, fixed_code) for c in chunks]))
    lo, hi = wilson_interval(errors, trials)
    return TrialStats(trials, errors, errors / trials, lo, hi, seed)
