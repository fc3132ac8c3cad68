"""Random shifted-homomorphism code ensemble.

Messages live in ``R_1^{w_1 k} + ... + R_I^{w_I k}`` and are encoded as
``e(m) = phi(u(m)) + v`` where position N of ``phi(a)`` is
``sum_{i,K} a_{iK} g_{iK}^N`` and ``v`` is a uniform dither in ``G^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..group import Group, annihilator_subgroup, ring_embedding

GENERATOR_MODES = ("ring", "annihilator")


@dataclass(frozen=True)
class EnsembleConfig:
    """Ensemble parameters.

    ``generator_mode="ring"`` draws the generators of ring i uniformly from
    ``R_i`` embedded in coordinate i; ``"annihilator"`` draws them from
    ``{g : p_i^{r_i} g = 0}``, i.e. from every homomorphism ``R_i -> G``.
    The two coincide unless a prime repeats in the decomposition.
    """

    group: Group
    weights: tuple[Fraction, ...]
    k: int
    n: int
    decoder: str = "ml"
    eps: float | None = None
    generator_mode: str = "ring"
    blocks: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.group.I:
            raise ValueError(f"need {self.group.I} weights, got {len(w)}")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ValueError(f"weights {w} must be nonnegative and sum to 1")
        if self.k < 0 or self.n < 1:
            raise ValueError("k must be >= 0 and n >= 1")
        blocks = []
        for x in w:
            b = x * self.k
            if b.denominator != 1:
                raise ValueError(f"w_i k = {b} is not an integer")
            blocks.append(int(b))
        object.__setattr__(self, "blocks", tuple(blocks))
        if self.decoder not in ("ml", "typicality"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.decoder == "typicality" and (self.eps is None or self.eps < 0):
            raise ValueError("typicality decoding needs eps >= 0")
        if self.generator_mode not in GENERATOR_MODES:
            raise ValueError(f"generator_mode must be one of {GENERATOR_MODES}")

    @property
    def radices(self) -> tuple[int, ...]:
        """Modulus of every message digit, ring by ring."""
        return tuple(m for m, b in zip(self.group.moduli, self.blocks) for _ in range(b))

    @property
    def block_ring(self) -> tuple[int, ...]:
        """0-based ring index of every message digit."""
        return tuple(i for i, b in enumerate(self.blocks) for _ in range(b))

    @property
    def M(self) -> int:
        return math.prod(self.radices)

    @property
    def rate(self) -> float:
        return self.k / self.n * sum(float(w) * r * math.log2(p) for w, (p, r) in zip(self.weights, self.group.rings))


MessageWord = tuple[tuple[int, ...], ...]


def _check_word(config: EnsembleConfig, word) -> MessageWord:
    word = tuple(tuple(int(d) for d in blk) for blk in word)
    if tuple(len(b) for b in word) != config.blocks:
        raise ValueError(f"word block lengths {[len(b) for b in word]} do not match {config.blocks}")
    for blk, m in zip(word, config.group.moduli):
        if any(not 0 <= d < m for d in blk):
            raise ValueError(f"digit out of range for Z_{m}")
    return word


def message_embedding(config: EnsembleConfig, m: int) -> MessageWord:
    """Mixed-radix expansion of m, least significant digit first."""
    if not 0 <= m < config.M:
        raise ValueError(f"message {m} outside 0..{config.M - 1}")
    digits = []
    for radix in config.radices:
        m, d = divmod(m, radix)
        digits.append(d)
    return split_digits(config, digits)


def split_digits(config: EnsembleConfig, digits) -> MessageWord:
    out, pos = [], 0
    for b in config.blocks:
        out.append(tuple(int(d) for d in digits[pos : pos + b]))
        pos += b
    return tuple(out)


def flat_digits(word: MessageWord) -> tuple[int, ...]:
    return tuple(d for blk in word for d in blk)


def message_index(config: EnsembleConfig, word) -> int:
    word = _check_word(config, word)
    m, scale = 0, 1
    for d, radix in zip(flat_digits(word), config.radices):
        m += d * scale
        scale *= radix
    return m


def word_sub(config: EnsembleConfig, a, b) -> MessageWord:
    return tuple(
        tuple((x - y) % mod for x, y in zip(ba, bb))
        for ba, bb, mod in zip(a, b, config.group.moduli)
    )


@dataclass(frozen=True, eq=False)
class Encoder:
    """``generators[d, N]`` is the image of message digit d at position N."""

    config: EnsembleConfig
    generators: np.ndarray  # (digits, n, I)
    dither: np.ndarray  # (n, I)


def generator_choices(config: EnsembleConfig, i: int) -> tuple[tuple[int, ...], ...]:
    """Allowed generator images for 0-based ring i, sorted."""
    if config.generator_mode == "ring":
        return ring_embedding(config.group, i + 1)
    return tuple(sorted(annihilator_subgroup(config.group, i + 1)))


def sample_encoder(config: EnsembleConfig, rng: np.random.Generator) -> Encoder:
    g = config.group
    choices = [np.array(generator_choices(config, i), dtype=np.int64) for i in range(g.I)]
    gens = np.zeros((len(config.radices), config.n, g.I), dtype=np.int64)
    for d, i in enumerate(config.block_ring):
        gens[d] = choices[i][rng.integers(len(choices[i]), size=config.n)]
    dither = np.column_stack([rng.integers(m, size=config.n) for m in g.moduli]).astype(np.int64)
    return Encoder(config, gens, dither)


def encode(encoder: Encoder, word) -> np.ndarray:
    """Codeword as an ``(n, I)`` coordinate array."""
    config = encoder.config
    digits = np.array(flat_digits(_check_word(config, word)), dtype=np.int64)
    mod = np.array(config.group.moduli, dtype=np.int64)
    if digits.size:
        phi = np.einsum("d,dni->ni", digits, encoder.generators)
    else:
        phi = np.zeros_like(encoder.dither)
    return (phi + encoder.dither) % mod


def all_words_digits(config: EnsembleConfig) -> np.ndarray:
    """Digit matrix of every message, row m = flat digits of message m."""
    M = config.M
    out = np.zeros((M, len(config.radices)), dtype=np.int64)
    m = np.arange(M, dtype=np.int64)
    for d, radix in enumerate(config.radices):
        m, out[:, d] = np.divmod(m, radix)
    return out


def codebook(encoder: Encoder, max_messages: int = 1 << 16) -> np.ndarray:
    """All codewords, ``(M, n, I)``, indexed by message number."""
    config = encoder.config
    if config.M > max_messages:
        raise ValueError(f"codebook of {config.M} messages exceeds cap {max_messages}")
    D = all_words_digits(config)
    mod = np.array(config.group.moduli, dtype=np.int64)
    phi = np.einsum("md,dni->mni", D, encoder.generators) if D.shape[1] else 0
    return (phi + encoder.dither[None]) % mod


def symbol_indices(group: Group, coords: np.ndarray) -> np.ndarray:
    """Lexicographic element index of coordinate tuples along the last axis."""
    idx = np.zeros(coords.shape[:-1], dtype=np.int64)
    for j, m in enumerate(group.moduli):
        idx = idx * m + coords[..., j]
    return idx
