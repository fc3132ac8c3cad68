import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcap.channel import bsc, make_channel
from groupcap.ensemble.decode import ml_decode
from groupcap.ensemble.fastml import binary_ml_error, eliminate, is_bsc
from groupcap.group import make_group


def exhaustive(rows, n, e, m0):
    k = len(rows)
    cw = []
    for m in range(1 << k):
        u = 0
        for K in range(k):
            if m >> K & 1:
                u ^= rows[K]
        cw.append(u)
    x0 = cw[m0]
    y = x0 ^ e
    dists = [bin(c ^ y).count("1") for c in cw]
    return dists.index(min(dists)) != m0


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_matches_exhaustive_min_distance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 15))
    k = int(rng.integers(0, min(n, 10) + 1))
    rows = [int(rng.integers(0, 1 << n)) for _ in range(k)]
    if k and rng.random() < 0.3:
        rows[-1] = rows[0]  # rank deficiency
    e = int(rng.integers(0, 1 << n)) if rng.random() < 0.5 else sum(1 << int(i) for i in rng.choice(n, size=min(n, 2), replace=False))
    m0 = int(rng.integers(0, 1 << k))
    assert binary_ml_error(rows, n, e, m0) == exhaustive(rows, n, e, m0)


def test_matches_likelihood_decoder():
    rng = np.random.default_rng(0)
    ch = bsc(0.1)
    for _ in range(200):
        n, k = 7, 3
        rows = [int(rng.integers(0, 1 << n)) for _ in range(k)]
        dither = int(rng.integers(0, 1 << n))
        book = []
        for m in range(1 << k):
            u = dither
            for K in range(k):
                if m >> K & 1:
                    u ^= rows[K]
            book.append([u >> N & 1 for N in range(n)])
        book = np.array(book)
        m0 = int(rng.integers(0, 1 << k))
        e = int(rng.integers(0, 1 << n)) & int(rng.integers(0, 1 << n))
        y = book[m0] ^ np.array([e >> N & 1 for N in range(n)])
        assert binary_ml_error(rows, n, e, m0) == (ml_decode(ch, book, y) != m0)


def test_eliminate_kernel():
    basis, kernel = eliminate([0b011, 0b110, 0b101], range(3))
    assert len(basis) == 2 and len(kernel) == 1
    # the kernel mask combines rows to zero
    combo = 0
    for K in range(3):
        if kernel[0] >> K & 1:
            combo ^= [0b011, 0b110, 0b101][K]
    assert combo == 0


def test_is_bsc():
    assert is_bsc(bsc(0.1)) == 0.1
    assert is_bsc(bsc(0.5)) is None
    assert is_bsc(make_channel(make_group([(2, 1)]), 2, [[1, 0], [0.3, 0.7]])) is None
    assert is_bsc(make_channel(make_group([(3, 1)]), 3, np.eye(3))) is None
