"""Property suites over exhaustive corpora and the group catalog.

A suite yields a stream of (instance id, list of failures); :func:`run` shards
that stream across worker processes and aggregates in instance order, so the
report is identical for every ``jobs`` value.  Wall time is returned separately
and never written into the report.
"""
from __future__ import annotations

import itertools
import multiprocessing as mp
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import spaces as S
from .enumerate import corpus
from .errors import TTGError
from .groups import ACCEPTANCE_GROUPS, catalog, is_p_power, is_p_subnormal, o_p, primes_dividing

SUITES = ("section2", "burnside", "dhz", "shg-cp")


@dataclass
class VerifyReport:
    suite: str
    params: dict
    instances: int = 0
    failures: list = field(default_factory=list)  # (instance, property, witness)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_obj(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "instances": self.instances,
            "failures": [list(f) for f in self.failures],
            "notes": self.notes,
        }


# ---------------------------------------------------------------- map predicates


@lru_cache(maxsize=512)
def _connected_masks(leq_bytes: bytes, n: int) -> tuple[bool, ...]:
    leq = np.frombuffer(leq_bytes, dtype=bool).reshape(n, n)
    comp = leq | leq.T
    nbr = [sum(1 << j for j in range(n) if comp[i, j]) for i in range(n)]
    out = []
    for mask in range(1 << n):
        if not mask:
            out.append(False)
            continue
        seen = mask & -mask
        frontier = seen
        while frontier:
            i = frontier.bit_length() - 1
            frontier &= ~(1 << i)
            new = nbr[i] & mask & ~seen
            seen |= new
            frontier |= new
        out.append(seen == mask)
    return tuple(out)


def _mask(space, pts) -> int:
    return sum(1 << space.index(p) for p in pts)


def connectivity_failures(m: S.SpectralMap) -> list[tuple[str, str]]:
    """Connectivity consequences for a quotient map with connected fibers."""
    X, Y = m.domain, m.codomain
    conn_x = _connected_masks(X.leq.tobytes(), len(X))
    conn_y = _connected_masks(Y.leq.tobytes(), len(Y))
    pre = [0] * len(Y)
    for i, y in enumerate(m.assign):
        pre[int(y)] |= 1 << i
    out = []

    def preimage(ymask):
        r = 0
        for j in range(len(Y)):
            if (ymask >> j) & 1:
                r |= pre[j]
        return r

    full_y = (1 << len(Y)) - 1
    if conn_y[full_y] and not conn_x[(1 << len(X)) - 1]:
        out.append(("connected-target=>connected-source", "X"))
    closed = [_mask(Y, u) for u in Y.up_sets()]
    opened = [_mask(Y, d) for d in Y.down_sets()]
    for kind, family in (("open", opened), ("closed", closed)):
        for c in family:
            if conn_y[c] and not conn_x[preimage(c)]:
                out.append((f"connected-{kind}-preimage", Y.ids(_bitvec(c, len(Y)))))
    # clopen subsets of X are saturated
    up_x = {_mask(X, u) for u in X.up_sets()}
    down_x = {_mask(X, d) for d in X.down_sets()}
    for s in up_x & down_x:
        image = 0
        for i in range(len(X)):
            if (s >> i) & 1:
                image |= 1 << int(m.assign[i])
        sat = preimage(image)
        if sat != s:
            out.append(("clopen-saturated", X.ids(_bitvec(s, len(X)))))
    # intersections of closed preimages: when every sub-intersection of the family
    # is connected, so is the whole intersection
    family = [preimage(c) for c in closed if c and conn_y[c]]
    whole = (1 << len(X)) - 1
    for s in family:
        whole &= s
    if family and not conn_x[whole]:
        subs_ok = all(
            conn_x[_and(combo)]
            for r in range(1, len(family) + 1)
            for combo in itertools.combinations(family, r)
        )
        if subs_ok:
            out.append(("closed-intersection-connected", X.ids(_bitvec(whole, len(X)))))
    if S.strong_by_corestriction(m) and not S.has_weak_lifting_property(m):
        out.append(("strong+connected=>weak-lifting", repr(S.weak_lifting_failures(m)[:1])))
    return out


def _and(masks):
    r = -1
    for s in masks:
        r &= s
    return r


def _bitvec(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)


def section2_failures(m: S.SpectralMap) -> list[tuple[str, str]]:
    out = []
    q = S.is_topological_quotient(m)
    hw = S.is_heritable_weak_spectral_quotient(m)
    if q != hw:
        out.append(("quotient<=>heritable-weak", f"quotient={q} heritable-weak={hw}"))
    if q and not S.is_weak_spectral_quotient(m):
        out.append(("quotient=>weak", ""))
    if S.has_weak_lifting_property(m) and not q:
        out.append(("weak-lifting=>quotient", ""))
    verdicts = S.strong_quotient_verdicts(m)
    if len(set(verdicts.values())) != 1:
        out.append(("strong-characterizations-agree", repr(sorted(verdicts.items()))))
    if q and S.fibers_connected(m):
        out += connectivity_failures(m)
    return out


def _random_poset(rng, n: int, density: float) -> S.FiniteSpectralSpace:
    upper = np.triu(rng.random((n, n)) < density, k=1)
    perm = rng.permutation(n)
    rel = upper[np.ix_(perm, perm)]
    return S.FiniteSpectralSpace.from_leq([str(i) for i in range(n)], rel | np.eye(n, dtype=bool))


def _random_surjection(rng, X, Y, tries: int = 50):
    order = X.linear_extension()
    for _ in range(tries):
        assign = np.full(len(X), -1, dtype=np.int64)
        for i in order:
            allowed = np.ones(len(Y), dtype=bool)
            for j in order:
                if assign[j] >= 0 and X.leq[j, i]:
                    allowed &= Y.leq[assign[j]]
            choices = np.flatnonzero(allowed)
            if not len(choices):
                break
            assign[i] = rng.choice(choices)
        else:
            if len(np.unique(assign)) == len(Y):
                return S.SpectralMap.from_indices(X, Y, assign)
    return None


def random_maps(seed: int, count: int, max_domain: int = 7, max_codomain: int = 5):
    """Seeded sample of monotone surjections beyond the exhaustive sizes."""
    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        nx = int(rng.integers(2, max_domain + 1))
        ny = int(rng.integers(1, min(nx, max_codomain) + 1))
        X = _random_poset(rng, nx, float(rng.uniform(0.2, 0.6)))
        Y = _random_poset(rng, ny, float(rng.uniform(0.2, 0.7)))
        m = _random_surjection(rng, X, Y)
        if m is not None:
            yield f"random#{made}", m
            made += 1


def _section2_stream(params):
    yield from corpus(params["max_domain"], params["max_codomain"])
    yield from random_maps(params["seed"], params["samples"])


# ---------------------------------------------------------------- groups


def _group_failures(name: str) -> list[tuple[str, str]]:
    from .burnside import burnside_ring, spec_burnside

    G = catalog(name)
    lat = G.lattice()
    out = []
    for h in range(len(lat)):
        mem = set(lat.members[h].tolist())
        if 0 not in mem or any(int(G.table[a, b]) not in mem for a in mem for b in mem):
            out.append(("subgroup-closed", str(h)))
    for h in range(len(lat)):
        for k in range(len(lat)):
            if lat.contains[h, k] and lat.index[h, k] * lat.orders[h] != lat.orders[k]:
                out.append(("index", f"{h},{k}"))
    ring = burnside_ring(lat)
    m = ring.marks.m
    r = lat.n_classes
    for i in range(r):
        h = lat.rep(i)
        if m[i, i] * lat.orders[h] != bin(lat.normalizers[h]).count("1"):
            out.append(("marks-diagonal", lat.class_labels[i]))
        if m[0, i] != G.order // lat.orders[h]:
            out.append(("marks-trivial-row", lat.class_labels[i]))
        for j in range(r):
            sub = any(lat.contains[h2, lat.rep(j)] for h2 in lat.classes[i])
            if m[i, j] and not sub:
                out.append(("marks-triangular", f"{lat.class_labels[i]},{lat.class_labels[j]}"))
    for p in primes_dividing(G.order):
        for h in range(len(lat)):
            n = o_p(lat, h, p)
            if not lat.normal_in[n, h] or not is_p_power(int(lat.index[n, h]), p):
                out.append((f"o_p-normal-p-quotient@{p}", str(h)))
            if o_p(lat, n, p) != n:
                out.append((f"o_p-idempotent@{p}", str(h)))
            for g in range(G.order):
                if lat.conjugate(n, g) != o_p(lat, lat.conjugate(h, g), p):
                    out.append((f"o_p-conjugation@{p}", f"{h},{g}"))
                    break
            for k in range(len(lat)):
                if lat.contains[h, k]:
                    a = is_p_subnormal(lat, h, k, p)
                    b = o_p(lat, h, p) == o_p(lat, k, p)
                    if a != b:
                        out.append((f"p-subnormal<=>o_p-equal@{p}", f"{h},{k}"))
        for a, b, v in ring.agreement(p):
            out.append((f"dress-three-way@{p}", f"{a},{b}:{sorted(v.items())}"))
        # |X^H| = |X^{O^p H}| mod p on basis G-sets
        for i in range(r):
            j = lat.conj_class[o_p(lat, lat.rep(i), p)]
            if ((m[i] - m[j]) % p).any():
                out.append((f"marks-congruence@{p}", lat.class_labels[i]))
        # equivalence relation by exhaustion
        rel = np.array([[ring.dress_equal(_bp(a, p), _bp(b, p)) for b in range(r)] for a in range(r)])
        if not (rel.diagonal().all() and (rel == rel.T).all() and (((rel.astype(int) @ rel.astype(int)) > 0) <= rel).all()):
            out.append((f"dress-equivalence@{p}", ""))
    sp = spec_burnside(lat)
    closed = set(sp.closed_points())
    for pt in sp.points:
        if not pt.endswith(",0)") and pt not in closed:
            out.append(("char-p-closed", pt))
    if sum(pt.endswith(",0)") for pt in sp.points) != r:
        out.append(("generic-count", str(len(sp))))
    return out


def _bp(c, p):
    from .burnside import BurnsidePoint
    return BurnsidePoint(c, p)


def _dhz_failures(name: str) -> tuple[list, dict]:
    from .burnside import default_primes
    from .equivariant import dhzg_comparison, fiber_locality, unigenic_locus_dhzg

    G = catalog(name)
    m = dhzg_comparison(G)
    out = []
    if not m.is_surjective():
        out.append(("surjective", ""))
    if not S.is_topological_quotient(m):
        out.append(("topological-quotient", ""))
    bad = S.disconnected_fibers(m)
    for y, comps in sorted(bad.items()):
        out.append(("connected-fibers", f"{y}:{[sorted(c) for c in comps]}"))
    # two Mackey points share an image iff Dress-equal
    for a, b in itertools.combinations(m.domain.points, 2):
        if (m(a) == m(b)) != _dress_labels(G, m.domain.meta[a], m.domain.meta[b]):
            out.append(("factors-dress", f"{a},{b}"))
    for p in default_primes(G):
        if is_p_power(G.order, p):
            try:
                unigenic_locus_dhzg(G, p)
            except AssertionError as e:
                out.append((f"unigenic-generalization-closed@{p}", str(e)))
    loc = S.fiber_closed_points(m)
    nonlocal_ = sorted(y for y, pts in loc.items() if len(pts) != 1)
    return out, {"nonlocal_fibers": nonlocal_}


def _dress_labels(G, ma, mb) -> bool:
    from .burnside import BurnsidePoint, burnside_ring

    if ma["char"] != mb["char"]:
        return False
    lat = G.lattice()
    ring = burnside_ring(lat)
    a = BurnsidePoint(lat.class_of_label(ma["class"]), ma["char"])
    b = BurnsidePoint(lat.class_of_label(mb["class"]), mb["char"])
    return ring.dress_equal(a, b)


def _shg_failures(item) -> tuple[list, dict]:
    from .burnside import burnside_ring
    from .equivariant import shg_infinity_gluing, spc_shg_cp, unitation_shg_cp

    kind, arg = item
    out = []
    if kind == "gluing":
        G = catalog(arg)
        lat = G.lattice()
        ring = burnside_ring(lat)
        blocks = set(shg_infinity_gluing(G))
        dress = set()
        for p in primes_dividing(G.order) or [2]:
            for b in ring.dress_classes(p, "op"):
                dress.add(frozenset(f"P({lat.class_labels[c]},{p},inf)" for c in b))
        if blocks != dress:
            out.append(("infinity-gluing=dress", arg))
        return out, {}
    p, primes, n_max = arg
    proj, target = unitation_shg_cp(p, primes, n_max)
    glued = [y for y, f in proj.fibers().items() if len(f) > 1]
    if len(glued) != 1 or len(proj.fiber(glued[0])) != 2:
        out.append(("glues-one-pair", repr(glued)))
    if not S.is_strong_topological_quotient(proj):
        out.append(("strong-topological-quotient", ""))
    if not S.fibers_connected(proj):
        out.append(("connected-fibers", ""))
    src = spc_shg_cp(p, primes, n_max)
    finite = [x for x in src.points if not x.endswith(",inf)")]
    img = [proj(x) for x in finite]
    if len(set(img)) != len(img):
        out.append(("injective-below-inf", ""))
    a, b = src.subspace(finite), target.subspace(img)
    rel = {proj(x): x for x in finite}
    if a != b.relabel(rel):
        out.append(("order-iso-below-inf", ""))
    return out, {}


# ---------------------------------------------------------------- runner


def _default_params(suite: str, **kw) -> dict:
    if suite == "section2":
        return {"max_domain": kw.get("max_domain", 5), "max_codomain": kw.get("max_codomain", 4),
                "samples": kw.get("samples", 200), "seed": kw.get("seed", 0)}
    groups = list(kw["groups"]) if kw.get("groups") else list(ACCEPTANCE_GROUPS)
    if suite in ("burnside", "dhz"):
        return {"groups": groups}
    if suite == "shg-cp":
        primes = kw.get("primes") or [2, 3]
        plist = [kw["prime"]] if kw.get("prime") else [q for q in primes]
        return {"primes": sorted(set(primes) | set(plist)), "prime": plist,
                "height": kw.get("height") or 4, "groups": groups}
    raise TTGError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")


def _items(suite: str, params: dict):
    if suite == "section2":
        yield from _section2_stream(params)
    elif suite in ("burnside", "dhz"):
        for g in params["groups"]:
            yield g, g
    elif suite == "shg-cp":
        for p in params["prime"]:
            yield f"C_{p}@{p},n={params['height']}", ("unitation", (p, params["primes"], params["height"]))
        for g in params["groups"]:
            yield f"gluing:{g}", ("gluing", g)


def _check(suite: str, item):
    if suite == "section2":
        return section2_failures(item), {}
    if suite == "burnside":
        return _group_failures(item), {}
    if suite == "dhz":
        return _dhz_failures(item)
    return _shg_failures(item)


def _worker(args):
    suite, params, shard, jobs = args
    results = []
    for k, (iid, item) in enumerate(_items(suite, params)):
        if k % jobs != shard:
            continue
        fails, notes = _check(suite, item)
        results.append((k, iid, [(iid, prop, str(w)) for prop, w in fails], notes))
    return results


def run(suite: str, *, jobs: int = 1, **kw) -> tuple[VerifyReport, float]:
    """Run one suite; returns ``(report, wall_seconds)``."""
    params = _default_params(suite, **kw)
    jobs = max(1, int(jobs))
    t0 = time.perf_counter()
    tasks = [(suite, params, s, jobs) for s in range(jobs)]
    if jobs == 1:
        chunks = [_worker(tasks[0])]
    else:
        with mp.get_context("spawn").Pool(jobs) as pool:
            chunks = pool.map(_worker, tasks)
    rows = sorted(r for chunk in chunks for r in chunk)
    report = VerifyReport(suite, params)
    report.instances = len(rows)
    for _, iid, fails, notes in rows:
        report.failures += fails
        for key, val in notes.items():
            if val:
                report.notes.setdefault(key, {})[iid] = val
    return report, time.perf_counter() - t0


def run_all(*, jobs: int = 1, **kw) -> tuple[list[VerifyReport], float]:
    reports, total = [], 0.0
    for suite in SUITES:
        rep, t = run(suite, jobs=jobs, **kw)
        reports.append(rep)
        total += t
    return reports, total


__all__ = ["SUITES", "VerifyReport", "run", "run_all", "section2_failures",
           "connectivity_failures", "random_maps"]
