"""Decoders over an explicit codebook of symbol-index codewords."""

from __future__ import annotations

import numpy as np

from ..channel import Channel

TIE_RTOL = 1e-9


def ml_decode(channel: Channel, codebook: np.ndarray, y: np.ndarray) -> int:
    """argmax_m prod_N W(y_N | x_N(m)); ties go to the smallest message index.

    ``codebook`` is ``(M, n)`` element indices, ``y`` is ``(n,)`` output indices.
    """
    codebook = np.asarray(codebook)
    if codebook.shape[0] == 0:
        raise ValueError("empty codebook")
    with np.errstate(divide="ignore"):
        logW = np.log2(channel.matrix)
    ll = logW[codebook, np.asarray(y)[None, :]].sum(axis=1)
    best = ll.max()
    if not np.isfinite(best):
        return int(np.argmax(ll))
    return int(np.flatnonzero(ll >= best - TIE_RTOL * (1.0 + abs(best)))[0])


def joint_distribution(channel: Channel) -> np.ndarray:
    """p(x, y) with x uniform on G."""
    return channel.matrix / channel.group.order


def _joint_counts(x: np.ndarray, y: np.ndarray, nx: int, ny: int) -> np.ndarray:
    flat = np.asarray(x) * ny + np.asarray(y)
    if flat.ndim == 1:
        return np.bincount(flat, minlength=nx * ny).reshape(nx, ny)
    rows = np.arange(flat.shape[0])[:, None] * (nx * ny) + flat
    return np.bincount(rows.ravel(), minlength=flat.shape[0] * nx * ny).reshape(-1, nx, ny)


def is_jointly_typical(x, y, joint: np.ndarray, eps: float) -> bool:
    """Frequency condition ``|N(a,b)/n - p(a,b)| <= eps/(|X||Y|)`` plus zero-pair exclusion."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise ValueError("sequence lengths differ")
    nx, ny = joint.shape
    counts = _joint_counts(x, y, nx, ny)
    return bool(_typical_mask(counts[None], x.size, joint, eps)[0])


def _typical_mask(counts: np.ndarray, n: int, joint: np.ndarray, eps: float) -> np.ndarray:
    nx, ny = joint.shape
    freq_ok = np.all(np.abs(counts / n - joint[None]) <= eps / (nx * ny) + 1e-15, axis=(1, 2))
    zero_ok = ~np.any((counts > 0) & (joint[None] == 0), axis=(1, 2))
    return freq_ok & zero_ok


def typicality_decode(channel: Channel, codebook: np.ndarray, y: np.ndarray, eps: float):
    """The unique m with (x(m), y) jointly eps-typical, else None."""
    codebook = np.asarray(codebook)
    joint = joint_distribution(channel)
    nx, ny = joint.shape
    yy = np.broadcast_to(np.asarray(y), codebook.shape)
    counts = _joint_counts(codebook, yy, nx, ny)
    hits = np.flatnonzero(_typical_mask(counts, codebook.shape[1], joint, eps))
    if len(hits) == 1:
        return int(hits[0])
    return None
