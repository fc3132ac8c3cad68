"""Exhaustive checks of the ensemble's combinatorial properties at tiny sizes.

Each closed-form quantity has an enumeration counterpart that only uses the
encoder definition, so the two can be compared exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..channel import Channel
from ..group import EnumerationCapError, Group, Theta, check_theta
from .code import (
    EnsembleConfig,
    all_words_digits,
    flat_digits,
    generator_choices,
    message_embedding,
    split_digits,
    symbol_indices,
    word_sub,
)
from .decode import _joint_counts, _typical_mask, joint_distribution

BRUTE_FORCE_CAP = 10**7
SEQUENCE_CAP = 1 << 21


def _valuation(a: int, p: int, r: int) -> int:
    """Largest t <= r with p^t | a (a taken mod p^r)."""
    a %= p**r
    if a == 0:
        return r
    t = 0
    while a % p == 0:
        a //= p
        t += 1
    return t


def theta_of_difference(config: EnsembleConfig, a) -> Theta:
    """Per ring, the smallest theta_i with some digit in p^theta R_i outside p^(theta+1) R_i.

    An all-zero block gives theta_i = r_i.
    """
    out = []
    for blk, (p, r) in zip(a, config.group.rings):
        out.append(min((_valuation(d, p, r) for d in blk), default=r))
    return tuple(out)


def _is_zero_word(a) -> bool:
    return all(d == 0 for blk in a for d in blk)


def _in_theta_power(group: Group, theta: Theta, diff: np.ndarray) -> bool:
    """diff is (n, I); membership of every position in the theta-subgroup."""
    steps = np.array([p**t for (p, _), t in zip(group.rings, theta)])
    return bool(np.all(diff % steps == 0))


def collision_prob_formula(config: EnsembleConfig, a, x, x_tilde) -> Fraction:
    """P(e(m + a) = x~ | e(m) = x) as a product over rings.

    ``x`` and ``x_tilde`` are ``(n, I)`` coordinate arrays.
    """
    if _is_zero_word(a):
        raise ValueError("difference a must be nonzero")
    group = config.group
    theta = theta_of_difference(config, a)
    diff = (np.asarray(x_tilde) - np.asarray(x)) % np.array(group.moduli)
    if not _in_theta_power(group, theta, diff):
        return Fraction(0)
    prob = Fraction(1)
    for (p, r), t in zip(group.rings, theta):
        prob /= Fraction(p) ** (config.n * (r - t))
    return prob


def _generator_tables(config: EnsembleConfig):
    """Every generator assignment as an array ``(T, digits, n, I)``."""
    per_digit = [np.array(generator_choices(config, i), dtype=np.int64) for i in config.block_ring]
    slots = [c for c in per_digit for _ in range(config.n)]
    if not slots:
        return np.zeros((1, 0, config.n, config.group.I), dtype=np.int64)
    idx = np.array(list(itertools.product(*[range(len(c)) for c in slots])), dtype=np.int64)
    cols = [slots[s][idx[:, s]] for s in range(len(slots))]
    gens = np.stack(cols, axis=1)
    return gens.reshape(len(idx), len(config.radices), config.n, config.group.I)


def _all_sequences(group: Group, n: int) -> np.ndarray:
    """Every element of G^n as ``(|G|^n, n, I)``, in lexicographic order."""
    els = np.array(group.elements, dtype=np.int64)
    idx = np.array(list(itertools.product(range(group.order), repeat=n)), dtype=np.int64)
    return els[idx]


def brute_force_size(config: EnsembleConfig) -> int:
    gens = math.prod(len(generator_choices(config, i)) ** config.n for i in config.block_ring)
    return gens * config.group.order**config.n


def collision_table(config: EnsembleConfig, a, m: int = 0):
    """Joint counts of ``(e(m), e(m + a))`` over every (generators, dither) pair.

    Returns ``(joint, marginal)``, where ``joint[x, x~]`` counts pairs with
    ``e(m) = x`` and ``e(m + a) = x~`` (sequences indexed lexicographically in
    G^n) and ``marginal[x]`` counts pairs with ``e(m) = x``.
    """
    size = brute_force_size(config)
    if size > BRUTE_FORCE_CAP:
        raise EnumerationCapError(f"enumeration of {size} (generator, dither) pairs exceeds {BRUTE_FORCE_CAP}")
    group = config.group
    mod = np.array(group.moduli, dtype=np.int64)
    u = np.array(flat_digits(message_embedding(config, m)), dtype=np.int64)
    ut = np.array(flat_digits(_word_add(config, message_embedding(config, m), a)), dtype=np.int64)
    gens = _generator_tables(config)
    dithers = _all_sequences(group, config.n)
    G_n = group.order**config.n
    joint = np.zeros((G_n, G_n), dtype=np.int64)
    for g in gens:
        phi = np.einsum("d,dni->ni", u, g) if u.size else np.zeros((config.n, group.I), dtype=np.int64)
        phit = np.einsum("d,dni->ni", ut, g) if ut.size else np.zeros((config.n, group.I), dtype=np.int64)
        e0 = _seq_index(group, (phi[None] + dithers) % mod)
        e1 = _seq_index(group, (phit[None] + dithers) % mod)
        np.add.at(joint, (e0, e1), 1)
    return joint, joint.sum(axis=1)


def _word_add(config: EnsembleConfig, a, b):
    return tuple(
        tuple((x + y) % mod for x, y in zip(ba, bb))
        for ba, bb, mod in zip(a, b, config.group.moduli)
    )


def _seq_index(group: Group, seqs: np.ndarray) -> np.ndarray:
    sym = symbol_indices(group, seqs)
    out = np.zeros(sym.shape[:-1], dtype=np.int64)
    for N in range(sym.shape[-1]):
        out = out * group.order + sym[..., N]
    return out


def collision_prob_bruteforce(config: EnsembleConfig, a, x, x_tilde, m: int = 0) -> Fraction:
    """Exact conditional probability by enumerating generators and dither."""
    if _is_zero_word(a):
        raise ValueError("difference a must be nonzero")
    joint, marginal = collision_table(config, a, m)
    group = config.group
    i0 = int(_seq_index(group, np.asarray(x)[None])[0])
    i1 = int(_seq_index(group, np.asarray(x_tilde)[None])[0])
    if marginal[i0] == 0:
        raise ValueError("e(m) = x has probability zero")
    return Fraction(int(joint[i0, i1]), int(marginal[i0]))


def nonzero_differences(config: EnsembleConfig):
    """Every nonzero message difference, in message-index order."""
    for m in range(1, config.M):
        yield message_embedding(config, m)


def extended_thetas(config: EnsembleConfig) -> list[Theta]:
    """All theta with 0 <= theta_i <= r_i except the all-r_i vector."""
    ranges = [range(r + 1) for _, r in config.group.rings]
    top = tuple(r for _, r in config.group.rings)
    return [t for t in itertools.product(*ranges) if t != top]


def count_theta_class(config: EnsembleConfig, theta: Theta, m: int = 0) -> int:
    """|{m~ != m : theta(m~ - m) = theta}| by enumeration over all messages.

    ``theta_i = r_i`` is allowed and means the block of ring i is unchanged.
    """
    group = config.group
    theta = tuple(int(t) for t in theta)
    if len(theta) != group.I or any(not 0 <= t <= r for t, (_, r) in zip(theta, group.rings)):
        raise ValueError(f"invalid theta {theta}")
    if config.M > SEQUENCE_CAP:
        raise EnumerationCapError(f"{config.M} messages exceed cap {SEQUENCE_CAP}")
    base = message_embedding(config, m)
    count = 0
    for mt in range(config.M):
        if mt == m:
            continue
        if theta_of_difference(config, word_sub(config, message_embedding(config, mt), base)) == theta:
            count += 1
    return count


def theta_class_size_formula(config: EnsembleConfig, theta: Theta) -> int:
    """prod_i (p_i^(r_i - theta_i))^(w_i k) (1 - p_i^(-w_i k)); factor 1 when theta_i = r_i."""
    total = Fraction(1)
    for (p, r), t, b in zip(config.group.rings, theta, config.blocks):
        if t == r:
            continue
        total *= Fraction(p ** (r - t)) ** b * (1 - Fraction(1, p**b))
    if total.denominator != 1:
        raise ArithmeticError("class size is not an integer")
    return int(total)


def theta_class_size_bound(config: EnsembleConfig, theta: Theta) -> int:
    return math.prod(p ** ((r - t) * b) for (p, r), t, b in zip(config.group.rings, theta, config.blocks))


# -- coset-typical counting -------------------------------------------------


@dataclass(frozen=True)
class CosetCountReport:
    count: int
    bound: float
    log2_bound: float
    slack: float
    joint_exponent: float
    per_ring_exponent: float
    unconditioned_exponent: float

    @property
    def margin(self) -> float:
        """log2(bound) - log2(count); nonnegative when the bound holds."""
        return self.log2_bound - math.log2(self.count) if self.count else math.inf


def _cond_entropy(pxy: np.ndarray) -> float:
    """H(X | Y) for a joint table with X on axis 0."""
    py = pxy.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(pxy > 0, pxy * np.log2(py[None, :] / pxy), 0.0)
    return float(terms.sum())


def _lumped(group: Group, theta: Theta, pxy: np.ndarray, rings=None) -> np.ndarray:
    """Joint of (label, Y) where the label keeps coordinates ``rings`` reduced mod p^theta."""
    rings = range(group.I) if rings is None else rings
    labels = {}
    lab = []
    for g in group.elements:
        key = tuple(g[i] % group.rings[i][0] ** theta[i] for i in rings)
        lab.append(labels.setdefault(key, len(labels)))
    out = np.zeros((len(labels), pxy.shape[1]))
    np.add.at(out, np.array(lab), pxy)
    return out


def _abs_log_sum(pxy: np.ndarray) -> float:
    """sum over p(a,b) > 0 of |log2 p(a|b)|."""
    py = pxy.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(pxy > 0, np.abs(np.log2(pxy / py[None, :])), 0.0)
    return float(terms.sum())


def _self_entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def coset_typical_count_check(channel: Channel, x, y, theta: Theta, eps: float, cap: int = SEQUENCE_CAP) -> CosetCountReport:
    """Count ``(x + H^n)`` members jointly eps-typical with ``y``; compare to the exponential bound.

    ``x`` and ``y`` are index sequences.  The bound is
    ``2^(n [sum_i (H(X_i|Y) - H([X_i]_theta|Y)) + slack])`` with
    ``slack = d (sum |log2 p(a|b)| + |H| sum |log2 p(c|b)|)`` and
    ``d = eps / (|G||Y|)``, the explicit constant of the counting argument
    (sums run over pairs of positive probability, ``c`` over cosets of H).
    ``unconditioned_exponent`` uses ``H([X_i]_theta)`` without conditioning.
    """
    group = channel.group
    theta = check_theta(group, theta)
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d index sequences")
    n = x.size
    joint = joint_distribution(channel)
    nx, ny = joint.shape

    if not _typical_mask(_joint_counts(x, y, nx, ny)[None], n, joint, eps)[0]:
        raise ValueError("x is not jointly typical with y")

    els = np.array(group.elements, dtype=np.int64)
    step = np.array([p**t for (p, _), t in zip(group.rings, theta)])
    h_size = int(np.prod(np.array(group.moduli) // step))
    if h_size**n > cap:
        raise EnumerationCapError(f"coset of H^n has {h_size ** n} members, cap {cap}")
    sub = np.array(
        list(itertools.product(*[range(0, m, s) for m, s in zip(group.moduli, step)])), dtype=np.int64
    )
    mod = np.array(group.moduli)
    # members of the coset at each position, as element indices
    per_pos = [symbol_indices(group, (els[x[N]][None] + sub) % mod) for N in range(n)]
    combos = np.array(list(itertools.product(range(h_size), repeat=n)), dtype=np.int64)
    seqs = np.stack([per_pos[N][combos[:, N]] for N in range(n)], axis=1)
    count = 0
    for start in range(0, len(seqs), 1 << 16):
        chunk = seqs[start : start + (1 << 16)]
        yy = np.broadcast_to(y, chunk.shape)
        count += int(_typical_mask(_joint_counts(chunk, yy, nx, ny), n, joint, eps).sum())

    d = eps / (nx * ny) + 1e-15
    coset_joint = _lumped(group, theta, joint)
    slack = d * (_abs_log_sum(joint) + h_size * _abs_log_sum(coset_joint))
    joint_exp = _cond_entropy(joint) - _cond_entropy(coset_joint)
    per_ring = 0.0
    uncond = 0.0
    for i in range(group.I):
        full_i = _lumped(group, tuple(r for _, r in group.rings), joint, rings=[i])
        coset_i = _lumped(group, theta, joint, rings=[i])
        per_ring += _cond_entropy(full_i) - _cond_entropy(coset_i)
        uncond += _cond_entropy(full_i) - _self_entropy(coset_i.sum(axis=1))
    log2_bound = n * (per_ring + slack)
    return CosetCountReport(
        count=count,
        bound=2.0**log2_bound,
        log2_bound=log2_bound,
        slack=slack,
        joint_exponent=joint_exp,
        per_ring_exponent=per_ring,
        unconditioned_exponent=uncond,
    )


def min_typical_eps(channel: Channel, x, y) -> float:
    """Smallest eps making (x, y) jointly typical (inf if a zero pair occurs)."""
    joint = joint_distribution(channel)
    nx, ny = joint.shape
    counts = _joint_counts(np.asarray(x), np.asarray(y), nx, ny)
    if np.any((counts > 0) & (joint == 0)):
        return math.inf
    return float(np.abs(counts / len(x) - joint).max() * nx * ny)


# -- marginal uniformity ----------------------------------------------------


@dataclass(frozen=True)
class PositionMarginal:
    support: frozenset
    uniform: bool


def _is_coset(group: Group, support: set) -> bool:
    s0 = next(iter(support))
    mod = group.moduli
    shifted = {tuple((a - b) % m for a, b, m in zip(s, s0, mod)) for s in support}
    # a nonempty finite subset closed under addition is a subgroup
    return all(tuple((a + b) % m for a, b, m in zip(g, h, mod)) in shifted for g in shifted for h in shifted)


def marginal_uniformity_check(codebook: np.ndarray, group: Group) -> list[PositionMarginal]:
    """Per position: the symbol support and whether it is a uniformly hit coset."""
    codebook = np.asarray(codebook)
    M = codebook.shape[0]
    out = []
    for N in range(codebook.shape[1]):
        symbols = [tuple(int(v) for v in s) for s in codebook[:, N]]
        counts: dict = {}
        for s in symbols:
            counts[s] = counts.get(s, 0) + 1
        support = frozenset(counts)
        even = M % len(support) == 0 and all(c == M // len(support) for c in counts.values())
        out.append(PositionMarginal(support, bool(even and _is_coset(group, set(support)))))
    return out


def message_words(config: EnsembleConfig):
    """All messages as words, in index order."""
    for row in all_words_digits(config):
        yield split_digits(config, row)

