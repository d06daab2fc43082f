"""Loop-style kernels over boolean order matrices.

Written in the numba nopython subset; ``ttg.kernels`` jit-compiles them when the
numba backend is active.  Y-side subsets are int64 bitmasks, so the codomain of
the enumeration kernels is limited to 62 points.
"""
import numpy as np


def transitive_closure(rel):
    n = rel.shape[0]
    out = rel.copy()
    for i in range(n):
        out[i, i] = True
    for k in range(n):
        for i in range(n):
            if out[i, k]:
                for j in range(n):
                    if out[k, j]:
                        out[i, j] = True
    return out


def pushforward_order(leq_x, assign, n_y):
    rel = np.zeros((n_y, n_y), dtype=np.bool_)
    n_x = leq_x.shape[0]
    for a in range(n_x):
        for b in range(n_x):
            if leq_x[a, b]:
                rel[assign[a], assign[b]] = True
    return transitive_closure(rel)


def corestricted_quotient(leq_x, leq_y, assign, keep):
    # keep must be a down-set of Y
    n_x = leq_x.shape[0]
    n_y = leq_y.shape[0]
    hit = np.zeros(n_y, dtype=np.bool_)
    rel = np.zeros((n_y, n_y), dtype=np.bool_)
    for a in range(n_x):
        ya = assign[a]
        if not keep[ya]:
            continue
        hit[ya] = True
        for b in range(n_x):
            if leq_x[a, b] and keep[assign[b]]:
                rel[ya, assign[b]] = True
    for y in range(n_y):
        if keep[y] and not hit[y]:
            return False
    clo = transitive_closure(rel)
    for i in range(n_y):
        if not keep[i]:
            continue
        for j in range(n_y):
            if keep[j] and clo[i, j] != leq_y[i, j]:
                return False
    return True


def _masks(leq):
    n = leq.shape[0]
    up = np.zeros(n, dtype=np.int64)
    down = np.zeros(n, dtype=np.int64)
    one = np.int64(1)
    for i in range(n):
        for j in range(n):
            if leq[i, j]:
                up[i] |= one << j
                down[j] |= one << i
    return up, down


def weak_quotient_on(leq_x, leq_y, assign, keep_mask):
    """Weak-quotient test for the corestriction over the down-set ``keep_mask``.

    Surjectivity onto the kept points is checked separately.
    """
    n_x = leq_x.shape[0]
    n_y = leq_y.shape[0]
    up_y, down_y = _masks(leq_y)
    one = np.int64(1)
    b = keep_mask
    while b != 0:
        upc = np.int64(0)
        downc = np.int64(0)
        for i in range(n_y):
            if (b >> i) & one:
                upc |= up_y[i]
                downc |= down_y[i]
        if (upc & downc) == b and (upc & keep_mask) != b:
            # b is convex but not an up-set of the kept subspace
            pre_up = True
            for x in range(n_x):
                if not ((b >> assign[x]) & one):
                    continue
                for z in range(n_x):
                    if leq_x[x, z]:
                        yz = assign[z]
                        if ((keep_mask >> yz) & one) and not ((b >> yz) & one):
                            pre_up = False
                            break
                if not pre_up:
                    break
            if pre_up:
                return False
        b = (b - one) & keep_mask
    return True


def surjective_on(assign, n_y, keep_mask):
    hit = np.int64(0)
    one = np.int64(1)
    for x in range(assign.shape[0]):
        hit |= one << assign[x]
    return (hit & keep_mask) == keep_mask


def heritable_weak(leq_x, leq_y, assign):
    n_y = leq_y.shape[0]
    one = np.int64(1)
    full = (one << n_y) - one
    if not surjective_on(assign, n_y, full):
        return False
    up_y, down_y = _masks(leq_y)
    u = full
    while u != 0:
        downc = np.int64(0)
        for i in range(n_y):
            if (u >> i) & one:
                downc |= down_y[i]
        if downc == u:
            if not weak_quotient_on(leq_x, leq_y, assign, u):
                return False
        u -= one
    return True


def weak_lifting_matrix(leq_x, assign, n_y):
    """out[y, y2] is True iff weak lifting from y2 to y holds.

    Breadth-first search on domain points with an edge s -> t whenever some w in
    the fiber of s satisfies w <= t, started from the fiber of y.
    """
    n_x = leq_x.shape[0]
    out = np.zeros((n_y, n_y), dtype=np.bool_)
    for y in range(n_y):
        seen = np.zeros(n_x, dtype=np.bool_)
        stack = np.empty(n_x, dtype=np.int64)
        top = 0
        for x in range(n_x):
            if assign[x] == y:
                seen[x] = True
                stack[top] = x
                top += 1
        while top > 0:
            top -= 1
            s = stack[top]
            ys = assign[s]
            for w in range(n_x):
                if assign[w] != ys:
                    continue
                for t in range(n_x):
                    if leq_x[w, t] and not seen[t]:
                        seen[t] = True
                        stack[top] = t
                        top += 1
        for x in range(n_x):
            if seen[x]:
                out[y, assign[x]] = True
    return out


def immediate_lifting(leq_x, leq_y, assign):
    n_x = leq_x.shape[0]
    n_y = leq_y.shape[0]
    for y in range(n_y):
        for y2 in range(n_y):
            if y == y2 or not leq_y[y, y2]:
                continue
            cover = True
            for z in range(n_y):
                if z != y and z != y2 and leq_y[y, z] and leq_y[z, y2]:
                    cover = False
                    break
            if not cover:
                continue
            lifted = False
            for a in range(n_x):
                if assign[a] != y:
                    continue
                for b in range(n_x):
                    if assign[b] == y2 and leq_x[a, b]:
                        lifted = True
                        break
                if lifted:
                    break
            if not lifted:
                return False
    return True
