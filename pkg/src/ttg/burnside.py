"""Tables of marks and the prime spectrum of the Burnside ring A(G).

A(G) is free abelian on the transitive G-sets G/L, one per conjugacy class of
subgroups.  Each class H gives a mark homomorphism m_H : A(G) -> Z, [X] -> |X^H|,
and every prime of A(G) is q(H,0) = ker(m_H) or q(H,p) = m_H^{-1}(pZ).  Primes of
characteristic p glue (Dress): q(H,p) = q(K,p) iff O^p(H) and O^p(K) are conjugate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TTGError
from .groups import (SubgroupLattice, _as_lattice, is_p_subnormal, is_prime, o_p,
                     primes_dividing)
from .spaces import FiniteSpectralSpace

DRESS_METHODS = ("op", "ag", "marks")


@dataclass(frozen=True)
class MarksTable:
    lattice: SubgroupLattice
    m: np.ndarray  # m[i, j] = |(G/K_j)^{H_i}| over class representatives

    @property
    def labels(self) -> list[str]:
        return self.lattice.class_labels

    def __len__(self):
        return self.m.shape[0]

    def row(self, label) -> np.ndarray:
        c = label if isinstance(label, (int, np.integer)) else self.lattice.class_of_label(label)
        return self.m[c]


def table_of_marks(g) -> MarksTable:
    lat = _as_lattice(g)
    G = lat.group
    # g fixes the coset xK under h iff x^-1 h x in K
    inv_conj = G.conj_table[G.inverse]
    r = lat.n_classes
    m = np.zeros((r, r), dtype=np.int64)
    for j in range(r):
        k = lat.rep(j)
        in_k = np.zeros(G.order, dtype=bool)
        in_k[lat.members[k]] = True
        for i in range(r):
            h = lat.rep(i)
            fixed = in_k[inv_conj[:, lat.members[h]]].all(axis=1)
            m[i, j] = int(fixed.sum()) // int(lat.orders[k])
    m.setflags(write=False)
    return MarksTable(lat, m)


@dataclass(frozen=True, order=True)
class BurnsidePoint:
    cls: int
    char: int

    def label(self, lat: SubgroupLattice) -> str:
        return f"q({lat.class_labels[self.cls]},{self.char})"


def integer_kernel_basis(row) -> list[list[int]]:
    """Basis of {x in Z^r : row . x = 0} by unimodular column operations (exact ints).

    Keeps a matrix U with row @ U reduced to (g, 0, ..., 0); the last r-1 columns
    of U then span the kernel lattice.
    """
    v = [int(a) for a in row]
    r = len(v)
    U = [[int(i == j) for j in range(r)] for i in range(r)]

    def colop(dst, src, q):  # col_dst -= q * col_src
        v[dst] -= q * v[src]
        for row_ in U:
            row_[dst] -= q * row_[src]

    def swap(a, b):
        v[a], v[b] = v[b], v[a]
        for row_ in U:
            row_[a], row_[b] = row_[b], row_[a]

    for j in range(1, r):
        # euclid on positions 0 and j until v[j] == 0
        while v[j] != 0:
            q = v[0] // v[j]
            colop(0, j, q)
            swap(0, j)
    if r and all(a == 0 for a in v):
        return [[U[i][j] for i in range(r)] for j in range(r)]
    return [[U[i][j] for i in range(r)] for j in range(1, r)]


class BurnsideRing:
    """Marks plus cached Dress data for one group."""

    def __init__(self, g):
        self.lattice = _as_lattice(g)
        self.marks = table_of_marks(self.lattice)
        self._kernels: dict[int, list[list[int]]] = {}
        self._dress: dict[tuple[int, str], list[list[int]]] = {}

    @property
    def labels(self) -> list[str]:
        return self.lattice.class_labels

    def kernel(self, h: int) -> list[list[int]]:
        if h not in self._kernels:
            self._kernels[h] = integer_kernel_basis(self.marks.m[h])
        return self._kernels[h]

    def mark_kernel_contained(self, h: int, k: int, p: int) -> bool:
        """ker(m_H) inside ker(A(G) -> Z/p via m_K)."""
        mk = [int(a) for a in self.marks.m[k]]
        return all(sum(a * b for a, b in zip(mk, x)) % p == 0 for x in self.kernel(h))

    def dress_equal(self, a: BurnsidePoint, b: BurnsidePoint, method: str = "op") -> bool:
        if a.char != b.char:
            return False
        if a.char == 0:
            return a.cls == b.cls
        p = a.char
        lat = self.lattice
        h, k = lat.rep(a.cls), lat.rep(b.cls)
        if method == "op":
            return lat.conj_class[o_p(lat, h, p)] == lat.conj_class[o_p(lat, k, p)]
        if method == "ag":
            # some conjugate K' of K with H n K' p-subnormal in both
            for k2 in lat.classes[b.cls]:
                i = lat.intersect(h, k2)
                if is_p_subnormal(lat, i, h, p) and is_p_subnormal(lat, i, k2, p):
                    return True
            return False
        if method == "marks":
            return self.mark_kernel_contained(a.cls, b.cls, p)
        raise TTGError(f"unknown method {method!r}; expected one of {DRESS_METHODS}")

    def dress_classes(self, p: int, method: str = "op") -> list[list[int]]:
        """Partition of the class ids at prime p, blocks ordered by least member."""
        if (p, method) in self._dress:
            return self._dress[(p, method)]
        out: list[list[int]] = []
        for c in range(self.lattice.n_classes):
            for block in out:
                if self.dress_equal(BurnsidePoint(block[0], p), BurnsidePoint(c, p), method):
                    block.append(c)
                    break
            else:
                out.append([c])
        self._dress[(p, method)] = out
        return out

    def agreement(self, p: int) -> list[tuple]:
        """Pairs (H, K) where the three Dress tests disagree, with each verdict."""
        bad = []
        r = self.lattice.n_classes
        for a in range(r):
            for b in range(r):
                pa, pb = BurnsidePoint(a, p), BurnsidePoint(b, p)
                v = {m: self.dress_equal(pa, pb, m) for m in DRESS_METHODS}
                if len(set(v.values())) != 1:
                    bad.append((self.labels[a], self.labels[b], v))
        return bad


def default_primes(g) -> list[int]:
    lat = _as_lattice(g)
    return primes_dividing(lat.group.order) or [2]


def check_primes(primes) -> list[int]:
    out = sorted({int(p) for p in primes})
    if not out:
        raise TTGError("prime set must be nonempty")
    for p in out:
        if not is_prime(p):
            raise TTGError(f"{p} is not prime")
    return out


def dress_equal(g, a: BurnsidePoint, b: BurnsidePoint, method: str = "op") -> bool:
    return _ring(g).dress_equal(a, b, method)


def mark_kernel_contained(g, h, k, p: int) -> bool:
    ring = _ring(g)
    lat = ring.lattice
    h = h if isinstance(h, (int, np.integer)) else lat.class_of_label(h)
    k = k if isinstance(k, (int, np.integer)) else lat.class_of_label(k)
    return ring.mark_kernel_contained(int(h), int(k), p)


def _ring(g) -> BurnsideRing:
    if isinstance(g, BurnsideRing):
        return g
    lat = _as_lattice(g)
    ring = getattr(lat, "_burnside", None)
    if ring is None:
        ring = BurnsideRing(lat)
        lat._burnside = ring
    return ring


def burnside_ring(g) -> BurnsideRing:
    return _ring(g)


def spec_burnside(g, primes=None) -> FiniteSpectralSpace:
    """Spec(A(G)) over char 0 and the chosen primes.

    Generic points q(H,0), one per class; a closed point per Dress class at each
    prime, named after its smallest member.  ``meta[label]["members"]`` lists
    the glued (class, char) pairs.
    """
    ring = _ring(g)
    lat = ring.lattice
    labels = lat.class_labels
    primes = check_primes(primes if primes is not None else default_primes(lat))
    points, meta, edges = [], {}, []
    for c in range(lat.n_classes):
        name = f"q({labels[c]},0)"
        points.append(name)
        meta[name] = {"members": [[labels[c], 0]]}
    for p in primes:
        for block in ring.dress_classes(p):
            name = f"q({labels[block[0]]},{p})"
            points.append(name)
            meta[name] = {"members": [[labels[c], p] for c in block]}
            edges += [(f"q({labels[c]},0)", name) for c in block]
    return FiniteSpectralSpace(points, edges, meta=meta)


def burnside_point_label(g, cls: int, char: int) -> str:
    """Label of the point of spec_burnside containing (cls, char)."""
    ring = _ring(g)
    labels = ring.lattice.class_labels
    if char == 0:
        return f"q({labels[cls]},0)"
    for block in ring.dress_classes(char):
        if cls in block:
            return f"q({labels[block[0]]},{char})"
    raise AssertionError("class missing from Dress partition")
