"""Finite permutation groups, materialized as multiplication tables, with their
full subgroup lattices.

Elements are indexed in lexicographic order of their one-line images, so the
identity is always index 0.  Subgroups are Python-int bitsets over element
indices.  Composition is ``(a * b)[i] = a[b[i]]``.
"""
from __future__ import annotations

import math
import re
from collections import Counter, deque
from functools import cached_property

import numpy as np

from .errors import CapExceeded, PreconditionError, TTGError

MAX_ORDER = 256


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def primes_dividing(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and primes_dividing(p) == [p]


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class PermGroup:
    """A permutation group given by generators, closed up to at most 256 elements."""

    def __init__(self, degree: int, generators, name: str | None = None):
        if degree < 1:
            raise TTGError("degree must be positive")
        gens = []
        for g in generators:
            g = tuple(int(v) for v in g)
            if sorted(g) != list(range(degree)):
                raise TTGError(f"generator {list(g)} is not a permutation of 0..{degree - 1}")
            gens.append(g)
        self.degree = degree
        self.generators = gens
        self.name = name
        ident = tuple(range(degree))
        seen = {ident}
        queue = deque([ident])
        while queue:
            a = queue.popleft()
            for g in gens:
                b = tuple(a[g[i]] for i in range(degree))
                if b not in seen:
                    seen.add(b)
                    if len(seen) > MAX_ORDER:
                        raise CapExceeded(f"group order exceeds {MAX_ORDER}")
                    queue.append(b)
        elems = sorted(seen)
        self.elements = np.array(elems, dtype=np.int64).reshape(len(elems), degree)
        where = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            prod = self.elements[i][self.elements]
            table[i] = [where[tuple(r)] for r in prod.tolist()]
        self.table = table
        self.inverse = np.argmax(table == 0, axis=1)
        self._lattice = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"PermGroup({self.name or '?'}, order {self.order})"

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            x, k = i, 1
            while x != 0:
                x = self.table[x, i]
                k += 1
            out[i] = k
        return out

    @cached_property
    def conj_table(self) -> np.ndarray:
        """conj_table[g, x] = g x g^-1."""
        gx = self.table
        return gx[gx, self.inverse[:, None]]

    def generate(self, gens) -> int:
        """Bitset of the subgroup generated by the element indices ``gens``."""
        gens = [int(g) for g in gens if g != 0]
        mask = 1
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def lattice(self) -> "SubgroupLattice":
        if self._lattice is None:
            self._lattice = SubgroupLattice(self)
        return self._lattice


def _as_lattice(g) -> "SubgroupLattice":
    return g if isinstance(g, SubgroupLattice) else g.lattice()


class SubgroupLattice:
    """Every subgroup of a group, with containment, normality, index and conjugacy data.

    Subgroups are ordered by (order, bitset); conjugacy classes are ordered by
    their first member, so class 0 is the trivial subgroup and the last class is
    the whole group.
    """

    def __init__(self, group: PermGroup):
        self.group = group
        G = group
        cyclic: dict[int, int] = {}
        for x in range(G.order):
            cyclic.setdefault(G.generate([x]), x)
        gens = {mask: [x] for mask, x in cyclic.items()}
        gens[1] = []
        queue = deque(gens)
        while queue:
            h = queue.popleft()
            for z, x in cyclic.items():
                if z & ~h:
                    j = G.generate(gens[h] + [x])
                    if j not in gens:
                        gens[j] = gens[h] + [x]
                        queue.append(j)
        subs = sorted(gens, key=lambda m: (m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1"), m))
        self.subgroups: list[int] = subs
        self.gens = [gens[m] for m in subs]
        self.id_of = {m: i for i, m in enumerate(subs)}
        self.members = [np.fromiter(_bits(m), dtype=np.int64) for m in subs]
        self.orders = np.array([len(m) for m in self.members], dtype=np.int64)
        S = len(subs)

        self.contains = np.zeros((S, S), dtype=bool)
        for i, a in enumerate(subs):
            for j, b in enumerate(subs):
                self.contains[i, j] = (a & ~b) == 0

        conj = G.conj_table
        self.conj_class = np.full(S, -1, dtype=np.int64)
        self.normalizers: list[int] = []
        classes = []
        for i, mem in enumerate(self.members):
            imgs = np.sort(conj[:, mem], axis=1)
            fixed = (imgs == mem[None, :]).all(axis=1)
            self.normalizers.append(sum(1 << int(g) for g in np.flatnonzero(fixed)))
            if self.conj_class[i] >= 0:
                continue
            cls = sorted({self.id_of[sum(1 << int(v) for v in row)] for row in np.unique(imgs, axis=0)})
            for j in cls:
                self.conj_class[j] = len(classes)
            classes.append(cls)
        self.classes: list[list[int]] = classes

        self.normal_in = np.zeros((S, S), dtype=bool)
        self.index = np.zeros((S, S), dtype=np.int64)
        for i in range(S):
            for j in range(S):
                if self.contains[i, j]:
                    self.index[i, j] = self.orders[j] // self.orders[i]
                    self.normal_in[i, j] = (subs[j] & ~self.normalizers[i]) == 0
        self._op: dict[tuple[int, int], int] = {}
        self._psn: dict[tuple[int, int, int], bool] = {}

    def __len__(self):
        return len(self.subgroups)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def rep(self, c: int) -> int:
        return self.classes[c][0]

    def whole(self) -> int:
        return len(self.subgroups) - 1

    def is_normal(self, h: int) -> bool:
        return len(self.classes[self.conj_class[h]]) == 1

    def intersect(self, h: int, k: int) -> int:
        return self.id_of[self.subgroups[h] & self.subgroups[k]]

    def conjugate(self, h: int, g: int) -> int:
        conj = self.group.conj_table
        return self.id_of[sum(1 << int(v) for v in conj[g, self.members[h]])]

    @cached_property
    def class_labels(self) -> list[str]:
        names = [_iso_name(self.group, self.members[self.rep(c)]) for c in range(self.n_classes)]
        counts = Counter(names)
        seen: Counter = Counter()
        out = []
        for nm in names:
            if counts[nm] > 1:
                seen[nm] += 1
                out.append(f"{nm}#{seen[nm]}")
            else:
                out.append(nm)
        return out

    def class_of_label(self, label: str) -> int:
        try:
            return self.class_labels.index(label)
        except ValueError:
            raise TTGError(f"no subgroup class labelled {label!r}; have {self.class_labels}") from None

    def label(self, h: int) -> str:
        return self.class_labels[self.conj_class[h]]

    def o_p(self, h: int, p: int) -> int:
        return o_p(self, h, p)


def _iso_name(G: PermGroup, mem: np.ndarray) -> str:
    n = len(mem)
    if n == 1:
        return "1"
    orders = G.element_orders[mem]
    if orders.max() == n:
        return f"C_{n}"
    sub = G.table[np.ix_(mem, mem)]
    if np.array_equal(sub, sub.T):
        return "x".join(f"C_{d}" for d in _invariant_factors(orders))
    invol = int((orders == 2).sum())
    for x in mem[orders == n // 2]:
        cyc = G.generate([x])
        outside = [y for y in mem if not (cyc >> int(y)) & 1]
        if all(G.element_orders[y] == 2 for y in outside):
            return "S_3" if n == 6 else f"D_{n // 2}"
    known = {(8, 1): "Q_8", (12, 3): "A_4", (12, 1): "Dic_3", (24, 9): "S_4",
             (20, 5): "F_20", (20, 1): "Dic_5", (60, 15): "A_5", (120, 25): "S_5"}
    return known.get((n, invol), f"G_{n}")


def _invariant_factors(orders: np.ndarray) -> list[int]:
    n = len(orders)
    parts = {}
    for p in primes_dividing(n):
        # c[k] = #{x : x^(p^k) = 1} = p^(sum_i min(lambda_i, k))
        c, k = [1], 1
        while True:
            ck = int(sum(1 for o in orders if (p ** k) % int(o) == 0))
            if ck == c[-1]:
                break
            c.append(ck)
            k += 1
        conj = [round(math.log(c[i + 1] // c[i], p)) for i in range(len(c) - 1)]
        conj = [v for v in conj if v > 0]
        lam = [sum(1 for v in conj if v > i) for i in range(conj[0])] if conj else []
        parts[p] = lam
    width = max(len(v) for v in parts.values())
    factors = []
    for j in range(width):
        d = 1
        for p, lam in parts.items():
            if j < len(lam):
                d *= p ** lam[j]
        factors.append(d)
    return sorted(factors)


def o_p(lat: SubgroupLattice, h: int, p: int) -> int:
    """O^p(h): generated by the p'-elements of h, equivalently the least normal
    subgroup of h with p-power index.  Both are computed and must agree."""
    key = (h, p)
    if key in lat._op:
        return lat._op[key]
    G = lat.group
    mem = lat.members[h]
    gen = [int(x) for x in mem if G.element_orders[x] % p != 0]
    by_elements = lat.id_of[G.generate(gen)]
    candidates = [
        n for n in range(len(lat)) if lat.contains[n, h] and lat.normal_in[n, h]
        and is_p_power(int(lat.index[n, h]), p)
    ]
    by_quotient = min(candidates, key=lambda n: lat.orders[n])
    if not all(lat.contains[by_quotient, n] for n in candidates):
        raise AssertionError(f"no least normal subgroup with p-power index in subgroup {h}")
    if by_elements != by_quotient:
        raise AssertionError(f"O^{p} disagrees for subgroup {h}: {by_elements} vs {by_quotient}")
    lat._op[key] = by_elements
    return by_elements


def is_p_subnormal(lat: SubgroupLattice, h: int, k: int, p: int) -> bool:
    """Is there a chain h = H0 <| H1 <| ... <| Hn = k with every step normal of index p?"""
    if not lat.contains[h, k]:
        raise PreconditionError(f"subgroup {h} is not contained in subgroup {k}")
    key = (h, k, p)
    if key in lat._psn:
        return lat._psn[key]
    seen = {h}
    queue = deque([h])
    found = False
    while queue:
        cur = queue.popleft()
        if cur == k:
            found = True
            break
        step = np.flatnonzero(lat.normal_in[cur] & (lat.index[cur] == p) & lat.contains[:, k])
        for j in step:
            j = int(j)
            if j not in seen:
                seen.add(j)
                queue.append(j)
    lat._psn[key] = found
    return found


def conj_p_subnormal_in(lat: SubgroupLattice, k: int, h: int, p: int) -> bool:
    """Is k G-conjugate to a p-subnormal subgroup of h?"""
    for k2 in lat.classes[lat.conj_class[k]]:
        if lat.contains[k2, h] and is_p_subnormal(lat, k2, h, p):
            return True
    return False


# ---------------------------------------------------------------- catalog

def _cyclic(n):
    return PermGroup(n, [[(i + 1) % n for i in range(n)]] if n > 1 else [], f"C_{n}")


def _dihedral(n):
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return PermGroup(n, [rot, ref], f"D_{n}")


def _symmetric(n):
    if n == 1:
        return PermGroup(1, [], "S_1")
    gens = [[1, 0] + list(range(2, n)), [(i + 1) % n for i in range(n)]]
    return PermGroup(n, gens, f"S_{n}")


def _alternating(n):
    gens = []
    for i in range(n - 2):
        g = list(range(n))
        g[i], g[i + 1], g[i + 2] = g[i + 1], g[i + 2], g[i]
        gens.append(g)
    return PermGroup(n, gens, f"A_{n}")


def _quaternion():
    # left multiplication on {±1, ±i, ±j, ±k}, indexed 0..7 as 1,i,j,k,-1,-i,-j,-k
    unit = {"1": 0, "i": 1, "j": 2, "k": 3}
    mult = {("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"), ("i", "1"): (1, "i"),
            ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"), ("j", "1"): (1, "j")}

    def left(a):
        perm = []
        for idx in range(8):
            sign = -1 if idx >= 4 else 1
            b = "1ijk"[idx % 4]
            s, c = mult[(a, b)]
            s *= sign
            perm.append(unit[c] + (0 if s > 0 else 4))
        return perm

    return PermGroup(8, [left("i"), left("j")], "Q_8")


def direct_product(*groups: PermGroup, name=None) -> PermGroup:
    degree = sum(g.degree for g in groups)
    gens, off = [], 0
    for g in groups:
        for s in g.generators:
            perm = list(range(degree))
            for i, v in enumerate(s):
                perm[off + i] = off + v
            gens.append(perm)
        off += g.degree
    return PermGroup(degree, gens, name or "x".join(g.name or "?" for g in groups))


_ATOM = re.compile(r"^(C|D|S|A)_(\d+)$")


def catalog(name: str) -> PermGroup:
    """Faithful permutation representation of a named group.

    Names: ``1``, ``C_n`` (n <= 30), ``D_n`` (order 2n, 3 <= n <= 12), ``S_n``
    (n <= 5), ``A_n`` (3 <= n <= 5), ``Q_8``, and direct products joined by ``x``
    or ``×`` such as ``C_2xC_4``.
    """
    raw = name.strip()
    parts = [s.strip() for s in re.split(r"[x×]", raw)]
    if len(parts) > 1:
        return direct_product(*(catalog(p) for p in parts), name=raw.replace("×", "x"))
    if raw in ("1", "trivial", "C_1"):
        return PermGroup(1, [], "1")
    if raw == "Q_8":
        return _quaternion()
    m = _ATOM.match(raw)
    if not m:
        raise TTGError(f"unknown group {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "C" and 1 <= n <= 30:
        return _cyclic(n)
    if kind == "D" and 3 <= n <= 12:
        return _dihedral(n)
    if kind == "S" and 1 <= n <= 5:
        return _symmetric(n)
    if kind == "A" and 3 <= n <= 5:
        return _alternating(n)
    raise TTGError(f"group {name!r} is outside the catalog range")


def from_json(obj) -> PermGroup:
    if "catalog" in obj:
        return catalog(obj["catalog"])
    return PermGroup(int(obj["degree"]), obj.get("generators", []), obj.get("name"))


ACCEPTANCE_GROUPS = tuple(
    [f"C_{n}" for n in range(2, 13)]
    + ["S_3", "S_4", "D_4", "D_5", "D_6", "Q_8", "A_4", "C_2xC_2", "C_3xC_3"]
)


def subgroup_lattice(g) -> SubgroupLattice:
    return _as_lattice(g)
