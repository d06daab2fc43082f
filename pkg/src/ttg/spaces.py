"""Finite spectral spaces as specialization posets, spectral maps between them,
and the quotient-type predicates.

Convention throughout: ``x <= y`` means x specializes to y (y lies in the
closure of x).  Closed sets are up-sets, quasi-compact opens are down-sets,
Thomason closed coincides with closed, and the basic constructible sets are
exactly the order-convex subsets.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import (
    CapExceeded,
    HypothesisFailed,
    NonT0Error,
    NotMonotoneError,
    PreconditionError,
    TTGError,
    UnknownPointError,
)

DEFAULT_MAX_POINTS = 15


def max_points() -> int:
    """Codomain cap for the exponential predicates (``TTG_MAX_POINTS`` overrides)."""
    raw = os.environ.get("TTG_MAX_POINTS")
    cap = int(raw) if raw else DEFAULT_MAX_POINTS
    return min(cap, 62)


class FiniteSpectralSpace:
    """A finite T0 space, stored as its specialization order.

    ``specializations`` are pairs ``(a, b)`` meaning a ~> b; the reflexive
    transitive closure is taken on construction and antisymmetry is enforced.
    ``meta`` is an optional per-point annotation carried through to JSON.
    """

    __slots__ = ("points", "leq", "_index", "meta")

    def __init__(self, points: Iterable, specializations: Iterable = (), *, meta=None):
        pts = tuple(str(p) for p in points)
        index = {p: i for i, p in enumerate(pts)}
        if len(index) != len(pts):
            dup = next(p for p in pts if pts.count(p) > 1)
            raise TTGError(f"duplicate point id {dup!r}")
        rel = np.zeros((len(pts), len(pts)), dtype=bool)
        for a, b in specializations:
            rel[_lookup(index, a), _lookup(index, b)] = True
        self._finish(pts, index, kernels.transitive_closure(rel), meta)

    @classmethod
    def from_leq(cls, points, leq, *, meta=None) -> "FiniteSpectralSpace":
        self = cls.__new__(cls)
        pts = tuple(str(p) for p in points)
        index = {p: i for i, p in enumerate(pts)}
        if len(index) != len(pts):
            raise TTGError("duplicate point ids")
        leq = np.ascontiguousarray(leq, dtype=bool)
        self._finish(pts, index, kernels.transitive_closure(leq), meta)
        return self

    def _finish(self, pts, index, leq, meta):
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise NonT0Error(pts[i], pts[j])
        leq = np.ascontiguousarray(leq)
        leq.setflags(write=False)
        self.points = pts
        self.leq = leq
        self._index = index
        self.meta = dict(meta) if meta else {}

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __contains__(self, p):
        return p in self._index

    def __eq__(self, other):
        if not isinstance(other, FiniteSpectralSpace):
            return NotImplemented
        if set(self.points) != set(other.points):
            return False
        perm = [other._index[p] for p in self.points]
        return bool(np.array_equal(self.leq, other.leq[np.ix_(perm, perm)]))

    __hash__ = None

    def __repr__(self):
        return f"FiniteSpectralSpace({len(self)} points, {len(self.covers())} covers)"

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, p) -> int:
        return _lookup(self._index, p)

    def indices(self, s: Iterable) -> list[int]:
        return [self.index(p) for p in s]

    def vec(self, s: Iterable) -> np.ndarray:
        v = np.zeros(self.n, dtype=bool)
        v[self.indices(s)] = True
        return v

    def ids(self, v) -> frozenset:
        return frozenset(self.points[i] for i in np.flatnonzero(v))

    def specializes(self, a, b) -> bool:
        return bool(self.leq[self.index(a), self.index(b)])

    def closure(self, s: Iterable) -> frozenset:
        v = self.vec(s)
        return self.ids(self.leq[v].any(axis=0))

    def generalization(self, s: Iterable) -> frozenset:
        v = self.vec(s)
        return self.ids(self.leq[:, v].any(axis=1))

    def is_closed(self, s: Iterable) -> bool:
        s = frozenset(s)
        return self.closure(s) == s

    def is_open(self, s: Iterable) -> bool:
        s = frozenset(s)
        return self.generalization(s) == s

    def is_convex(self, s: Iterable) -> bool:
        s = frozenset(s)
        return self.closure(s) & self.generalization(s) == s

    def closed_points(self) -> list[str]:
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        return [p for i, p in enumerate(self.points) if not strict[i].any()]

    def generic_points(self) -> list[str]:
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        return [p for i, p in enumerate(self.points) if not strict[:, i].any()]

    def cover_matrix(self) -> np.ndarray:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        return lt & ~((lt.astype(np.int64) @ lt.astype(np.int64)) > 0)

    def covers(self) -> list[tuple[str, str]]:
        """Hasse edges (a, b) with b an immediate specialization of a."""
        return [(self.points[i], self.points[j]) for i, j in np.argwhere(self.cover_matrix())]

    def subspace(self, s: Iterable) -> "FiniteSpectralSpace":
        keep = sorted(set(self.indices(s)))
        meta = {self.points[i]: self.meta[self.points[i]] for i in keep if self.points[i] in self.meta}
        return FiniteSpectralSpace.from_leq(
            [self.points[i] for i in keep], self.leq[np.ix_(keep, keep)], meta=meta
        )

    def linear_extension(self) -> list[int]:
        below = self.leq.sum(axis=0)
        return sorted(range(self.n), key=lambda i: (below[i], i))

    def down_sets(self) -> Iterator[frozenset]:
        """All generalization-closed subsets (quasi-compact opens), empty set included."""
        for v in _down_sets_idx(self.leq, self.linear_extension()):
            yield frozenset(self.points[i] for i in v)

    def up_sets(self) -> Iterator[frozenset]:
        dual = [i for i in reversed(self.linear_extension())]
        for v in _down_sets_idx(self.leq.T, dual):
            yield frozenset(self.points[i] for i in v)

    def relabel(self, names: Mapping[str, str]) -> "FiniteSpectralSpace":
        pts = [names.get(p, p) for p in self.points]
        meta = {names.get(p, p): v for p, v in self.meta.items()}
        return FiniteSpectralSpace.from_leq(pts, self.leq, meta=meta)


def _lookup(index, p):
    try:
        return index[p]
    except KeyError:
        raise UnknownPointError(f"unknown point id {p!r}") from None


def _down_sets_idx(leq, order):
    n = len(order)
    strict_below = [
        [j for j in range(leq.shape[0]) if j != i and leq[j, i]] for i in range(leq.shape[0])
    ]
    chosen = [False] * leq.shape[0]

    def rec(k):
        if k == n:
            yield [i for i in range(leq.shape[0]) if chosen[i]]
            return
        i = order[k]
        yield from rec(k + 1)
        if all(chosen[j] for j in strict_below[i]):
            chosen[i] = True
            yield from rec(k + 1)
            chosen[i] = False

    yield from rec(0)


def closure(space: FiniteSpectralSpace, s: Iterable) -> frozenset:
    """Specialization closure {y : x <= y for some x in s}."""
    return space.closure(s)


def connected_components(space: FiniteSpectralSpace, s: Iterable) -> list[frozenset]:
    """Components of the comparability graph of the order restricted to ``s``.

    Returned in order of first appearance in ``space.points``.
    """
    idx = sorted(set(space.indices(s)))
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in idx:
        for b in idx:
            if a < b and (space.leq[a, b] or space.leq[b, a]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return [frozenset(space.points[i] for i in g) for _, g in sorted(groups.items())]


def is_connected(space: FiniteSpectralSpace, s: Iterable | None = None) -> bool:
    s = space.points if s is None else s
    return len(connected_components(space, s)) == 1


class SpectralMap:
    """A specialization-preserving map between finite spectral spaces."""

    __slots__ = ("domain", "codomain", "assign", "_cache")

    def __init__(self, domain: FiniteSpectralSpace, codomain: FiniteSpectralSpace,
                 assignment: Mapping[str, str]):
        missing = [x for x in domain.points if x not in assignment]
        if missing:
            raise TTGError(f"assignment is not total: no image for {missing[0]!r}")
        extra = [x for x in assignment if x not in domain]
        if extra:
            raise UnknownPointError(f"unknown point id {extra[0]!r}")
        arr = np.array([codomain.index(assignment[x]) for x in domain.points], dtype=np.int64)
        self._init(domain, codomain, arr, check=True)

    @classmethod
    def from_indices(cls, domain, codomain, assign, *, check=True) -> "SpectralMap":
        self = cls.__new__(cls)
        self._init(domain, codomain, np.asarray(assign, dtype=np.int64), check=check)
        return self

    def _init(self, domain, codomain, assign, check):
        if check:
            img = codomain.leq[np.ix_(assign, assign)]
            bad = domain.leq & ~img
            if bad.any():
                i, j = np.argwhere(bad)[0]
                raise NotMonotoneError(domain.points[i], domain.points[j],
                                       codomain.points[assign[i]], codomain.points[assign[j]])
        assign = np.ascontiguousarray(assign)
        assign.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.assign = assign
        self._cache = {}

    def __call__(self, x) -> str:
        return self.codomain.points[self.assign[self.domain.index(x)]]

    def __repr__(self):
        return f"SpectralMap({len(self.domain)} -> {len(self.codomain)} points)"

    def as_dict(self) -> dict[str, str]:
        return {x: self.codomain.points[y] for x, y in zip(self.domain.points, self.assign)}

    def fiber(self, y) -> frozenset:
        return self.domain.ids(self.assign == self.codomain.index(y))

    def fibers(self) -> dict[str, frozenset]:
        return {y: self.fiber(y) for y in self.codomain.points}

    def preimage(self, s: Iterable) -> frozenset:
        return self.domain.ids(self.codomain.vec(s)[self.assign])

    def image(self, s: Iterable) -> frozenset:
        return frozenset(self.codomain.points[self.assign[i]] for i in self.domain.indices(s))

    def is_surjective(self) -> bool:
        return len(np.unique(self.assign)) == len(self.codomain)

    def is_injective(self) -> bool:
        return len(np.unique(self.assign)) == len(self.domain)

    def corestrict(self, u: Iterable) -> "SpectralMap":
        """The restriction preimage(u) -> u."""
        u = frozenset(u)
        sub_y = self.codomain.subspace(u)
        pre = self.preimage(u)
        sub_x = self.domain.subspace(pre)
        amap = {x: self(x) for x in sub_x.points}
        return SpectralMap(sub_x, sub_y, amap)

    def compose(self, other: "SpectralMap") -> "SpectralMap":
        """``other`` after ``self``."""
        return SpectralMap.from_indices(self.domain, other.codomain, other.assign[self.assign])

    def _weak_lifting(self):
        if "wl" not in self._cache:
            self._cache["wl"] = kernels.weak_lifting_matrix(self.domain.leq, self.assign,
                                                             len(self.codomain))
        return self._cache["wl"]


def _check_cap(m: SpectralMap):
    cap = max_points()
    if len(m.codomain) > cap:
        raise CapExceeded(
            f"codomain has {len(m.codomain)} points; exponential predicates are capped at {cap}"
            " (set TTG_MAX_POINTS to override)"
        )


def is_topological_quotient(m: SpectralMap) -> bool:
    """Surjective, and the codomain order is the closure of the pushed-forward order."""
    keep = np.ones(len(m.codomain), dtype=bool)
    return bool(kernels.corestricted_quotient(m.domain.leq, m.codomain.leq, m.assign, keep))


# With a finite target the spectral and topological quotient notions agree.
is_spectral_quotient = is_topological_quotient


def is_weak_spectral_quotient(m: SpectralMap) -> bool:
    """Surjective, and every convex B whose preimage is closed is itself closed."""
    _check_cap(m)
    n = len(m.codomain)
    full = np.int64((1 << n) - 1)
    if not kernels.surjective_on(m.assign, n, full):
        return False
    return bool(kernels.weak_quotient_on(m.domain.leq, m.codomain.leq, m.assign, full))


def is_heritable_weak_spectral_quotient(m: SpectralMap) -> bool:
    """Every corestriction over an open (down-set) of the codomain is a weak spectral quotient."""
    _check_cap(m)
    return bool(kernels.heritable_weak(m.domain.leq, m.codomain.leq, m.assign))


# Complements of Thomason subsets of a finite space are exactly its down-sets.
is_strongly_heritable_weak_spectral_quotient = is_heritable_weak_spectral_quotient


def has_weak_lifting(m: SpectralMap, y, y_prime) -> bool:
    """Weak lifting from ``y_prime`` to ``y``, where y ~> y_prime."""
    i, j = m.codomain.index(y), m.codomain.index(y_prime)
    if not m.codomain.leq[i, j]:
        raise PreconditionError(f"{y!r} does not specialize to {y_prime!r}")
    return bool(m._weak_lifting()[i, j])


def has_weak_lifting_property(m: SpectralMap) -> bool:
    w = m._weak_lifting()
    return bool(not (m.codomain.leq & ~w).any())


def weak_lifting_failures(m: SpectralMap) -> list[tuple[str, str]]:
    w = m._weak_lifting()
    pts = m.codomain.points
    return [(pts[i], pts[j]) for i, j in np.argwhere(m.codomain.leq & ~w)]


def strong_by_corestriction(m: SpectralMap) -> bool:
    cod = m.codomain
    for v in _down_sets_idx(cod.leq, cod.linear_extension()):
        if not v:
            continue
        keep = np.zeros(len(cod), dtype=bool)
        keep[v] = True
        if not kernels.corestricted_quotient(m.domain.leq, cod.leq, m.assign, keep):
            return False
    return True


def strong_by_immediate_lifting(m: SpectralMap) -> bool:
    # surjectivity is part of being a quotient; covers alone cannot see an isolated empty fiber
    return m.is_surjective() and bool(
        kernels.immediate_lifting(m.domain.leq, m.codomain.leq, m.assign)
    )


def strong_by_weak_lifting(m: SpectralMap) -> bool:
    return has_weak_lifting_property(m)


STRONG_METHODS = {
    "corestriction": strong_by_corestriction,
    "immediate-lifting": strong_by_immediate_lifting,
    "weak-lifting": strong_by_weak_lifting,
}


def strong_quotient_verdicts(m: SpectralMap) -> dict[str, bool]:
    return {name: fn(m) for name, fn in STRONG_METHODS.items()}


def is_strong_topological_quotient(m: SpectralMap, method: str = "all") -> bool:
    """Every corestriction over a down-set is a topological quotient.

    ``method="all"`` evaluates the three equivalent characterizations and
    raises ``AssertionError`` if they disagree.
    """
    if method != "all":
        return STRONG_METHODS[method](m)
    verdicts = strong_quotient_verdicts(m)
    if len(set(verdicts.values())) != 1:
        raise AssertionError(f"strong-quotient characterizations disagree: {verdicts}")
    return verdicts["corestriction"]


def fibers_connected(m: SpectralMap, *, nonempty_only: bool = True) -> bool:
    for y in m.codomain.points:
        fib = m.fiber(y)
        if not fib:
            if nonempty_only:
                continue
            return False
        if len(connected_components(m.domain, fib)) != 1:
            return False
    return True


def disconnected_fibers(m: SpectralMap) -> dict[str, list[frozenset]]:
    out = {}
    for y in m.codomain.points:
        comps = connected_components(m.domain, m.fiber(y))
        if len(comps) > 1:
            out[y] = comps
    return out


def fiber_closed_points(m: SpectralMap) -> dict[str, list[str]]:
    """Relatively closed points of each fiber (a fiber is local iff exactly one)."""
    out = {}
    for y in m.codomain.points:
        fib = m.fiber(y)
        out[y] = sorted(m.domain.subspace(fib).closed_points()) if fib else []
    return out


@dataclass(frozen=True)
class PointPartition:
    space: FiniteSpectralSpace
    classes: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.classes)
        seen: dict[str, int] = {}
        for k, b in enumerate(blocks):
            if not b:
                raise TTGError("empty block in partition")
            for p in b:
                self.space.index(p)
                if p in seen:
                    raise TTGError(f"point {p!r} appears in two blocks")
                seen[p] = k
        missing = [p for p in self.space.points if p not in seen]
        if missing:
            raise TTGError(f"partition does not cover {missing[0]!r}")
        object.__setattr__(self, "classes", blocks)

    @classmethod
    def discrete(cls, space):
        return cls(space, tuple((p,) for p in space.points))

    @classmethod
    def gluing(cls, space, *groups):
        """Glue each of ``groups`` to a single point, everything else stays separate."""
        glued = {p for g in groups for p in g}
        blocks = [tuple(g) for g in groups] + [(p,) for p in space.points if p not in glued]
        return cls(space, tuple(blocks))


def block_name(block: Sequence[str]) -> str:
    return block[0] if len(block) == 1 else "|".join(sorted(block))


def quotient_space(space: FiniteSpectralSpace, part, names: Sequence[str] | None = None):
    """Collapse each block of ``part`` to a point.

    Returns ``(quotient, projection)``.  The quotient order is the closure of the
    pushed-forward specializations; :class:`NonT0Error` if that is not antisymmetric.
    """
    if not isinstance(part, PointPartition):
        part = PointPartition(space, tuple(tuple(b) for b in part))
    # blocks in order of their first point in the space
    first = {b: min(space.index(p) for p in b) for b in part.classes}
    blocks = sorted(part.classes, key=first.__getitem__)
    if names is None:
        names = [block_name(b) for b in blocks]
    else:
        names = [names[part.classes.index(b)] for b in blocks]
    assign = np.empty(len(space), dtype=np.int64)
    for k, b in enumerate(blocks):
        for p in b:
            assign[space.index(p)] = k
    order = kernels.pushforward_order(space.leq, assign, len(blocks))
    meta = {}
    for name, b in zip(names, blocks):
        ms = [space.meta[p] for p in b if p in space.meta]
        if ms:
            meta[name] = ms[0] if len(b) == 1 else ms
    target = FiniteSpectralSpace.from_leq(names, order, meta=meta)
    return target, SpectralMap.from_indices(space, target, assign)


@dataclass
class SectionLemmaReport:
    closed_quotient: bool
    section_embedding: bool
    image_is_preimage: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_section_lemma(g: SpectralMap, f: Mapping[str, str]) -> SectionLemmaReport:
    """Check the split-section lemma for ``g`` with set-theoretic section ``f``.

    Hypotheses: f preserves specialization, and x ~> f(g(x)) for all x.
    Conclusions checked: g is a closed quotient, f is an order embedding, and
    g(Z) = f^-1(Z) for every closed Z.  A violated conclusion is recorded in
    ``failures``; a violated hypothesis raises :class:`HypothesisFailed`.
    """
    X, Y = g.domain, g.codomain
    for y in Y.points:
        if g(f[y]) != y:
            raise PreconditionError(f"g(f({y!r})) = {g(f[y])!r}, not {y!r}")
    for y in Y.points:
        for y2 in Y.points:
            if Y.specializes(y, y2) and not X.specializes(f[y], f[y2]):
                raise HypothesisFailed("i", y)
    for x in X.points:
        if not X.specializes(x, f[g(x)]):
            raise HypothesisFailed("ii", x)

    failures = []
    closed = is_topological_quotient(g) and all(
        Y.is_closed(g.image(X.closure([x]))) for x in X.points
    )
    if not closed:
        failures.append("g is not a closed quotient map")
    emb = all(
        Y.specializes(y, y2) == X.specializes(f[y], f[y2]) for y in Y.points for y2 in Y.points
    )
    if not emb:
        failures.append("f is not an order embedding")
    img_pre = True
    for z in X.up_sets():
        pre = frozenset(y for y in Y.points if f[y] in z)
        if g.image(z) != pre:
            img_pre = False
            failures.append(f"g(Z) != f^-1(Z) for Z={sorted(z)}")
            break
    return SectionLemmaReport(closed, emb, img_pre, failures)
