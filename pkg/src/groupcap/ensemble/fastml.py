"""Exact ML error events for binary group codes on a BSC without listing the codebook.

For a code ``{aG + v}`` over Z_2 and a BSC with crossover < 1/2, ML decoding
is minimum Hamming distance decoding.  With error pattern ``e`` the transmitted
message loses iff some codeword ``u = aG`` has ``wt(e + u) <= wt(e)`` with the
tie rule going against it.  Every such ``z = e + u`` is found by enumerating
low-weight patterns on an information set: if two disjoint information sets
exist, one of them carries at most ``wt(e) // 2`` ones of ``z``.

Bit N of a row/error mask is position N; bit K of a message mask is digit K,
so a message mask equals its message index.
"""

from __future__ import annotations

import random

import numpy as np


def eliminate(rows: list[int], col_order) -> tuple[list[tuple[int, int, int]], list[int]]:
    """GF(2) row reduction of the generator rows.

    Returns the basis ``[(pivot_col, vector, message_mask)]`` (reduced on the
    pivot columns) and message masks spanning the kernel of ``a -> aG``.
    """
    k = len(rows)
    vecs = list(rows)
    alphas = [1 << K for K in range(k)]
    used = [False] * k
    pivots = []
    for c in col_order:
        bit = 1 << c
        p = next((i for i in range(k) if not used[i] and vecs[i] & bit), None)
        if p is None:
            continue
        used[p] = True
        vp, ap = vecs[p], alphas[p]
        for i in range(k):
            if i != p and vecs[i] & bit:
                vecs[i] ^= vp
                alphas[i] ^= ap
        pivots.append((c, p))
        if len(pivots) == k:
            break
    basis = [(c, vecs[i], alphas[i]) for c, i in pivots]
    kernel = [alphas[i] for i in range(k) if not used[i]]
    return basis, kernel


def _info_sets(rows: list[int], n: int, tries: int = 8):
    """One or two disjoint information sets (as reduced bases) plus the kernel."""
    shuffler = random.Random(0)
    order = list(range(n))
    first = None
    for attempt in range(tries):
        basis1, kernel = eliminate(rows, order)
        first = first or (basis1, kernel)
        piv = {c for c, _, _ in basis1}
        rest = [c for c in range(n) if c not in piv]
        basis2, _ = eliminate(rows, rest + sorted(piv))
        if all(c not in piv for c, _, _ in basis2):
            return [basis1, basis2], kernel
        if len(rest) < len(basis1):
            break
        shuffler.shuffle(order)
    return [first[0]], first[1]


def _xor_basis(vectors):
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def _affine_min(x: int, basis) -> int:
    for b in basis:
        x = min(x, x ^ b)
    return x


def _search(e: int, basis, depth: int, w: int, ties: set[int]) -> bool:
    """Scan ``z`` with at most ``depth`` ones on the information set.

    Returns True as soon as some ``z`` is strictly lighter than ``w``; the
    message masks of codewords with ``wt(z) == w`` are added to ``ties``.
    """
    base, abase = e, 0
    for c, b, al in basis:
        if e >> c & 1:
            base ^= b
            abase ^= al
    B = np.array([b for _, b, _ in basis], dtype=np.uint64)
    A = np.array([al for _, _, al in basis], dtype=np.uint64)
    vals = np.array([base], dtype=np.uint64)
    als = np.array([abase], dtype=np.uint64)
    last = np.array([-1], dtype=np.int64)
    for level in range(depth + 1):
        wts = np.bitwise_count(vals)
        if np.any(wts < w):
            return True
        ties.update(int(a) for a in als[wts == w])
        if level == depth:
            break
        nv, na, nl = [], [], []
        for j in range(len(basis)):
            sel = last < j
            if not sel.any():
                continue
            nv.append(vals[sel] ^ B[j])
            na.append(als[sel] ^ A[j])
            nl.append(np.full(int(sel.sum()), j, dtype=np.int64))
        if not nv:
            break
        vals, als, last = np.concatenate(nv), np.concatenate(na), np.concatenate(nl)
    return False


def binary_ml_error(rows: list[int], n: int, e: int, m0: int) -> bool:
    """True iff min-distance decoding (smallest index on ties) does not return m0.

    ``rows[K]`` is the n-bit generator of message digit K, ``e`` the n-bit
    error pattern, ``m0`` the transmitted message mask.
    """
    if n > 64:
        raise ValueError("bit-packed search supports n <= 64")
    w = bin(e).count("1")
    sets, kernel = _info_sets(rows, n)
    depth = w // 2 if len(sets) == 2 else w
    ties = {0}
    for basis in sets:
        if _search(e, basis, depth, w, ties):
            return True
    kb = _xor_basis(kernel)
    decoded = min(_affine_min(m0 ^ a, kb) for a in ties)
    return decoded != m0


def is_bsc(channel) -> float | None:
    """Crossover probability if the channel is a BSC over Z_2 with p < 1/2."""
    g = channel.group
    if g.rings != ((2, 1),) or channel.output_size != 2:
        return None
    W = channel.matrix
    p = W[0, 1]
    if abs(W[1, 0] - p) > 1e-15 or p >= 0.5:
        return None
    return float(p)
