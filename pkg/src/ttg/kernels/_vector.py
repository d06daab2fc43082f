"""Vectorized numpy kernels with the same signatures as ``_loops``.

Order relations become boolean matrix products; subset enumeration is done in
one shot as a (2**k, n) boolean matrix.
"""
import numpy as np


def _bmm(a, b):
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def transitive_closure(rel):
    out = rel | np.eye(rel.shape[0], dtype=bool)
    while True:
        nxt = _bmm(out, out)
        if np.array_equal(nxt, out):
            return out
        out = nxt


def _onehot(assign, n_y):
    a = np.zeros((assign.shape[0], n_y), dtype=bool)
    a[np.arange(assign.shape[0]), assign] = True
    return a


def pushforward_order(leq_x, assign, n_y):
    a = _onehot(assign, n_y)
    return transitive_closure(_bmm(_bmm(a.T, leq_x), a))


def corestricted_quotient(leq_x, leq_y, assign, keep):
    keep = np.asarray(keep, dtype=bool)
    xs = keep[assign]
    ys = np.flatnonzero(keep)
    if not np.isin(ys, assign[xs]).all():
        return False
    remap = np.full(leq_y.shape[0], -1, dtype=np.int64)
    remap[ys] = np.arange(ys.size)
    sub_x = leq_x[np.ix_(xs, xs)]
    order = pushforward_order(sub_x, remap[assign[xs]], ys.size)
    return bool(np.array_equal(order, leq_y[np.ix_(ys, ys)]))


def _subsets(bits):
    k = bits.size
    codes = np.arange(1 << k, dtype=np.int64)
    return ((codes[:, None] >> np.arange(k)) & 1).astype(bool)


def _mask_bits(mask, n):
    return np.array([i for i in range(n) if (mask >> i) & 1], dtype=np.int64)


def weak_quotient_on(leq_x, leq_y, assign, keep_mask):
    n_y = leq_y.shape[0]
    keep = np.zeros(n_y, dtype=bool)
    bits = _mask_bits(int(keep_mask), n_y)
    keep[bits] = True
    sub = np.zeros(((1 << bits.size), n_y), dtype=bool)
    sub[:, bits] = _subsets(bits)
    upc = _bmm(sub, leq_y)
    downc = _bmm(sub, leq_y.T)
    convex = ((upc & downc) == sub).all(axis=1)
    is_up = ~(upc & keep & ~sub).any(axis=1)
    pre = sub[:, assign]
    pre_keep = keep[assign]
    pre_upc = _bmm(pre, leq_x & pre_keep[None, :])
    pre_is_up = ~(pre_upc & ~pre).any(axis=1)
    return not bool((convex & ~is_up & pre_is_up).any())


def surjective_on(assign, n_y, keep_mask):
    hit = 0
    for y in np.unique(assign):
        hit |= 1 << int(y)
    return (hit & int(keep_mask)) == int(keep_mask)


def heritable_weak(leq_x, leq_y, assign):
    n_y = leq_y.shape[0]
    full = (1 << n_y) - 1
    if not surjective_on(assign, n_y, full):
        return False
    allsets = _subsets(np.arange(n_y))
    downc = _bmm(allsets, leq_y.T)
    closed = (downc == allsets).all(axis=1)
    for code in np.flatnonzero(closed):
        if code and not weak_quotient_on(leq_x, leq_y, assign, int(code)):
            return False
    return True


def weak_lifting_matrix(leq_x, assign, n_y):
    a = _onehot(assign, n_y)
    same_fiber = _bmm(a, a.T)
    step = _bmm(same_fiber, leq_x)
    reach = transitive_closure(step)
    return _bmm(_bmm(a.T, reach), a)


def immediate_lifting(leq_x, leq_y, assign):
    n_y = leq_y.shape[0]
    lt = leq_y & ~np.eye(n_y, dtype=bool)
    covers = lt & ~_bmm(lt, lt)
    a = _onehot(assign, n_y)
    lifted = _bmm(_bmm(a.T, leq_x), a)
    return not bool((covers & ~lifted).any())
