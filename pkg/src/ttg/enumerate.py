"""Exhaustive corpora: posets up to isomorphism and monotone surjections."""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import TTGError
from .spaces import FiniteSpectralSpace, SpectralMap

MAX_POSET_SIZE = 6


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    return (np.int64(1) << np.arange(n * n - 1, -1, -1, dtype=np.int64)).astype(np.int64)


def canonical_form(leq: np.ndarray) -> tuple[int, np.ndarray]:
    """Lexicographically least row-major adjacency matrix over all orderings.

    Returns the packed code and the permutation achieving it (new position k
    holds old point ``perm[k]``).
    """
    n = leq.shape[0]
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    perms = _perms(n)
    mats = leq[perms[:, :, None], perms[:, None, :]].reshape(len(perms), n * n)
    codes = mats.astype(np.int64) @ _weights(n)
    k = int(np.argmin(codes))
    return int(codes[k]), perms[k]


def _from_code(code: int, n: int) -> np.ndarray:
    bits = [(code >> (n * n - 1 - k)) & 1 for k in range(n * n)]
    return np.array(bits, dtype=bool).reshape(n, n)


@lru_cache(maxsize=None)
def _poset_codes(n: int) -> tuple[int, ...]:
    if n == 0:
        return (0,)
    found = set()
    for code in _poset_codes(n - 1):
        base = _from_code(code, n - 1)
        space = FiniteSpectralSpace.from_leq(range(n - 1), base)
        # every n-poset is an (n-1)-poset plus one maximal point over a down-set
        for down in space.down_sets():
            leq = np.zeros((n, n), dtype=bool)
            leq[: n - 1, : n - 1] = base
            leq[n - 1, n - 1] = True
            for p in down:
                leq[int(p), n - 1] = True
            found.add(canonical_form(leq)[0])
    return tuple(sorted(found))


def enumerate_posets(n: int) -> list[FiniteSpectralSpace]:
    """All posets on n points up to isomorphism, points named "0".."n-1"."""
    if not 1 <= n <= MAX_POSET_SIZE:
        raise TTGError(f"poset size must be in 1..{MAX_POSET_SIZE}, got {n}")
    return [FiniteSpectralSpace.from_leq([str(i) for i in range(n)], _from_code(c, n))
            for c in _poset_codes(n)]


def are_isomorphic(a: FiniteSpectralSpace, b: FiniteSpectralSpace) -> bool:
    if len(a) != len(b):
        return False
    if len(a) > 8:
        raise TTGError("isomorphism test by canonical form is limited to 8 points")
    return canonical_form(a.leq)[0] == canonical_form(b.leq)[0]


def monotone_assignments(X: FiniteSpectralSpace, Y: FiniteSpectralSpace):
    """Yield every order-preserving index assignment X -> Y as an int64 array."""
    order = X.linear_extension()
    below = [[j for j in order[:k] if X.leq[j, i]] for k, i in enumerate(order)]
    assign = np.zeros(len(X), dtype=np.int64)
    n_y = len(Y)

    def rec(k):
        if k == len(order):
            yield assign.copy()
            return
        i = order[k]
        for y in range(n_y):
            if all(Y.leq[assign[j], y] for j in below[k]):
                assign[i] = y
                yield from rec(k + 1)

    yield from rec(0)


def enumerate_monotone_surjections(X: FiniteSpectralSpace, Y: FiniteSpectralSpace) -> list[SpectralMap]:
    out = []
    for a in monotone_assignments(X, Y):
        if len(np.unique(a)) == len(Y):
            out.append(SpectralMap.from_indices(X, Y, a, check=False))
    return out


def corpus(max_domain: int = 5, max_codomain: int = 4):
    """Every monotone surjection between posets |X| <= max_domain, |Y| <= max_codomain.

    Yields ``(instance_id, map)`` in a fixed order; ids look like ``X5.12->Y3.2#7``.
    """
    for nx in range(1, max_domain + 1):
        for ix, X in enumerate(enumerate_posets(nx)):
            for ny in range(1, min(nx, max_codomain) + 1):
                for iy, Y in enumerate(enumerate_posets(ny)):
                    for k, m in enumerate(enumerate_monotone_surjections(X, Y)):
                        yield f"X{nx}.{ix}->Y{ny}.{iy}#{k}", m
