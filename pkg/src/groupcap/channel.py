"""Discrete memoryless channels with a group-structured input alphabet.

All information quantities are in bits with ``0 log 0 = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .group import Coset, Group, Theta, cosets, theta_subgroups

ROW_TOL = 1e-12
TIE_TOL = 1e-12


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Channel:
    """Transition matrix ``W[x, y]`` with rows in lexicographic element order."""

    group: Group
    output_size: int
    matrix: np.ndarray
    name: str | None = None

    def row(self, g) -> np.ndarray:
        return self.matrix[self.group.index(g)]


@dataclass(frozen=True)
class CosetCapacity:
    coset: Coset
    value: float


def make_channel(group: Group, output_size: int, matrix, name: str | None = None) -> Channel:
    W = np.array(matrix, dtype=float)
    if W.ndim != 2 or W.shape != (group.order, output_size):
        raise ValueError(f"matrix shape {W.shape} does not match |G| x |Y| = {(group.order, output_size)}")
    if np.any(W < 0):
        bad = int(np.argwhere(W < 0)[0][0])
        raise ValueError(f"row {bad} has a negative entry")
    sums = W.sum(axis=1)
    for i, s in enumerate(sums):
        if abs(s - 1.0) > ROW_TOL:
            raise ValueError(f"row {i} sums to {float(s)!r}, not 1")
    W.setflags(write=False)
    return Channel(group, int(output_size), W, name)


def entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _check_dist(channel: Channel, dist) -> np.ndarray:
    p = np.asarray(dist, dtype=float)
    if p.shape != (channel.group.order,):
        raise ValueError("distribution length must equal the group order")
    if np.any(p < 0) or abs(p.sum() - 1.0) > ROW_TOL:
        raise ValueError("input distribution must be nonnegative and sum to 1")
    return p


def mutual_information(channel: Channel, dist) -> float:
    """I(X;Y) = H(Y) - H(Y|X)."""
    p = _check_dist(channel, dist)
    W = channel.matrix
    q = p @ W
    q /= q.sum()
    h_y_given_x = sum(p[x] * entropy(W[x]) for x in np.flatnonzero(p))
    return max(0.0, entropy(q) - h_y_given_x)


def uniform_on(channel: Channel, members) -> np.ndarray:
    p = np.zeros(channel.group.order)
    idx = [channel.group.index(g) for g in members]
    p[idx] = 1.0 / len(idx)
    return p


def coset_capacity(channel: Channel, coset: Coset) -> CosetCapacity:
    """Mutual information with the input uniform over the coset members."""
    return CosetCapacity(coset, mutual_information(channel, uniform_on(channel, coset.members)))


def optimal_coset(channel: Channel, theta: Theta, tie_tol: float = TIE_TOL) -> CosetCapacity:
    """Coset of largest capacity; values within ``tie_tol`` of the best count as ties.

    cosets() is sorted by representative, so ties go to the smallest one.
    """
    values = [coset_capacity(channel, c) for c in cosets(channel.group, theta)]
    return first_best(values, tie_tol)


def first_best(values: list[CosetCapacity], tie_tol: float = TIE_TOL) -> CosetCapacity:
    best = max(v.value for v in values)
    return next(v for v in values if v.value >= best - tie_tol)


def is_coset_symmetric(channel: Channel, tol: float = 1e-9) -> bool:
    for theta in theta_subgroups(channel.group, include_trivial=False):
        vals = [coset_capacity(channel, c).value for c in cosets(channel.group, theta)]
        if max(vals) - min(vals) > tol:
            return False
    return True


def _divergences(W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """D(W(.|x) || q) in bits for every row x."""
    q = q / q.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(W > 0, W * np.log2(W / q), 0.0)
    return terms.sum(axis=1)


def _mi_from(p: np.ndarray, W: np.ndarray) -> float:
    return float(p @ _divergences(W, p @ W))


def _newton_face(W: np.ndarray, p: np.ndarray, S: np.ndarray, iters: int = 40) -> np.ndarray:
    """Newton ascent of I(p) restricted to inputs S, starting from p on S."""
    p = np.where(np.isin(np.arange(len(p)), S), p, 0.0)
    if p.sum() <= 0:
        p[S] = 1.0
    p /= p.sum()
    for _ in range(iters):
        WS = W[S]
        q = p @ W
        with np.errstate(divide="ignore", invalid="ignore"):
            inv_q = np.where(q > 0, 1.0 / q, 0.0)
        g = _divergences(WS, q)
        H = -(WS * inv_q) @ WS.T / np.log(2.0)
        k = len(S)
        K = np.zeros((k + 1, k + 1))
        K[:k, :k] = H
        K[:k, k] = K[k, :k] = 1.0
        rhs = np.concatenate([-(g - g.mean()), [0.0]])
        step = np.linalg.lstsq(K, rhs, rcond=None)[0][:k]
        base = _mi_from(p, W)
        t = 1.0
        while t > 1e-12:
            cand = np.zeros_like(p)
            cand[S] = np.clip(p[S] + t * step, 0.0, None)
            cand /= cand.sum()
            if _mi_from(cand, W) >= base:
                break
            t *= 0.5
        else:
            return p
        done = np.abs(cand - p).max() < 1e-15
        p = cand
        if done:
            break
    return p


def _active_set_search(W: np.ndarray, p: np.ndarray, tol: float, window: float = 1e-3, max_cands: int = 8):
    """Try Newton on small supports among the inputs of near-maximal divergence.

    Returns a distribution whose capacity gap is within ``tol``, or None.
    """
    d = _divergences(W, p @ W)
    order = np.argsort(-d, kind="stable")
    cands = [int(x) for x in order[:max_cands] if d[x] >= d.max() - window]
    apparent = np.flatnonzero(p > 1e-9 * p.max())
    trials = [apparent]
    for size in range(1, min(len(cands), W.shape[1]) + 1):
        trials.extend(np.array(c) for c in itertools.combinations(cands, size))
    for S in trials:
        cand = _newton_face(W, p, S)
        lo, up = _gap(W, cand)
        if up - lo <= tol:
            return cand
    return None


def _gap(W: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    d = _divergences(W, p @ W)
    return float(p @ d), float(d.max())


def shannon_capacity(channel: Channel, tol: float = 1e-9, max_iter: int = 10000) -> float:
    """max_p I(X;Y) by Blahut-Arimoto iteration, stopped on the capacity gap.

    ``I(p) <= C <= max_x D(W(.|x) || pW)`` at every iterate.  The multiplicative
    update uses an exponent ``mu >= 1`` grown while it keeps I(p) increasing;
    ``mu = 1`` is the classical update.  If the gap closes slowly, Newton steps
    on candidate supports are tried; a candidate is accepted only through its
    own gap, so the returned value keeps the same guarantee.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    W = channel.matrix
    p = np.full(W.shape[0], 1.0 / W.shape[0])
    mu = 1.0
    for it in range(max_iter):
        d = _divergences(W, p @ W)
        lower = float(p @ d)
        upper = float(d.max())
        if upper - lower <= tol:
            return max(0.0, lower)
        if it in (200, 2000):
            found = _active_set_search(W, p, tol)
            if found is not None:
                return max(0.0, _gap(W, found)[0])
        best = None
        for m in (2.0 * mu, mu, 1.0):
            cand = p * np.exp2(m * (d - upper))
            cand /= cand.sum()
            val = _mi_from(cand, W)
            if best is None or val > best[0]:
                best = (val, cand, m)
            if m > mu and val >= lower:
                break
        _, p, mu = best
    raise ConvergenceError(f"Blahut-Arimoto did not reach gap {tol} in {max_iter} iterations")


def additive_noise_channel(group: Group, noise, name: str | None = None) -> Channel:
    """Channel on |Y| = |G| with ``W(y|x) = noise[y - x]`` (noise indexed by element order)."""
    from .group import sub

    noise = np.asarray(noise, dtype=float)
    els = group.elements
    W = np.empty((group.order, group.order))
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            W[i, j] = noise[group.index(sub(group, y, x))]
    return make_channel(group, group.order, W, name)


def bsc(p: float) -> Channel:
    from .group import make_group

    return make_channel(make_group([(2, 1)]), 2, [[1 - p, p], [p, 1 - p]], name=f"BSC({p})")


def compose(channel: Channel, stochastic) -> Channel:
    """Degraded channel: output passed through a further row-stochastic map."""
    V = np.asarray(stochastic, dtype=float)
    return make_channel(channel.group, V.shape[1], channel.matrix @ V)
