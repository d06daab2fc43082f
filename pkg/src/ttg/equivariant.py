"""Finite models of equivariant tt-spectra: derived Mackey functors over G and
the truncated chromatic picture for C_p, with their unitation quotients.

Orientation throughout: a ~> b means b lies in the closure of a.  For primes of
a tt-category that is reverse inclusion, so P ⊆ Q reads Q ~> P, and the closed
points are the minimal primes under inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass

from .burnside import _ring, burnside_point_label, check_primes, default_primes
from .errors import PreconditionError, TTGError
from .groups import _as_lattice, conj_p_subnormal_in, is_p_power, is_prime
from .spaces import (FiniteSpectralSpace, PointPartition, SpectralMap, fiber_closed_points,
                     quotient_space)

# Cross-fan edges of the truncated C_p picture, as (from fan, to fan).  The
# inclusion P(1,p) ⊆ P(C_p,p) on the Mackey side makes P(C_p,p) ~> P(1,p); the
# height-inf edge and the height-shifting diagonals follow the same direction.
# Flipping this pair is the only change needed to reverse the orientation.
CROSS_EDGE_FANS = ("C_p", "1")


def _mackey(h: str, char) -> str:
    return f"P({h},{char})"


def spc_dhzg(g, primes=None) -> FiniteSpectralSpace:
    """Spc of compact derived Mackey functors over G, one point per (class, char).

    P(H,p) ~> P(K,p) and P(H,0) ~> P(K,p) exactly when K is G-conjugate to a
    p-subnormal subgroup of H; characteristic-0 points are pairwise incomparable.
    """
    lat = _as_lattice(g)
    primes = check_primes(primes if primes is not None else default_primes(lat))
    labels = lat.class_labels
    r = lat.n_classes
    points = [_mackey(labels[c], 0) for c in range(r)]
    meta = {_mackey(labels[c], 0): {"class": labels[c], "char": 0} for c in range(r)}
    edges = []
    for p in primes:
        for c in range(r):
            meta[_mackey(labels[c], p)] = {"class": labels[c], "char": p}
            points.append(_mackey(labels[c], p))
        for a in range(r):
            for b in range(r):
                if conj_p_subnormal_in(lat, lat.rep(b), lat.rep(a), p):
                    edges.append((_mackey(labels[a], p), _mackey(labels[b], p)))
                    edges.append((_mackey(labels[a], 0), _mackey(labels[b], p)))
    return FiniteSpectralSpace(points, edges, meta=meta)


def dhzg_comparison(g, primes=None) -> SpectralMap:
    """The comparison map onto Spec(A(G)): P(H,p) -> q(H,p), P(H,0) -> q(H,0)."""
    from .burnside import spec_burnside

    lat = _as_lattice(g)
    primes = check_primes(primes if primes is not None else default_primes(lat))
    source = spc_dhzg(lat, primes)
    target = spec_burnside(lat, primes)
    assign = {}
    for c, h in enumerate(lat.class_labels):
        for char in [0, *primes]:
            assign[_mackey(h, char)] = burnside_point_label(lat, c, char)
    return SpectralMap(source, target, assign)


@dataclass
class FiberLocality:
    closed_points: dict  # fiber label -> relatively closed points of the fiber
    local: bool


def fiber_locality(m: SpectralMap) -> FiberLocality:
    """Which fibers have a unique relatively closed point.  Reported, not required."""
    cp = {y: pts for y, pts in fiber_closed_points(m).items() if pts}
    return FiberLocality(cp, all(len(v) == 1 for v in cp.values()))


# ---------------------------------------------------------------- C_p chromatic


def _height(n) -> str:
    return "inf" if n == "inf" else str(n)


def _chrom(h: str, q, n) -> str:
    return f"P({h},0,1)" if n == 1 else f"P({h},{q},{_height(n)})"


def spc_shg_cp(p: int, primes=None, n_max: int = 4) -> FiniteSpectralSpace:
    """Truncated Spc of compact genuine C_p-spectra.

    Two fans, one per subgroup (1 and C_p).  Each fan has a generic height-1 point
    "P(H,0,1)" and, for every prime q, a chain of points at heights 2..n_max and
    inf.  At the prime p only, the fans are joined by the edges in
    ``CROSS_EDGE_FANS``: height n to height n+1 for 1 <= n < n_max, and inf to inf.
    """
    if not is_prime(p):
        raise TTGError(f"{p} is not prime")
    primes = check_primes(primes if primes is not None else [p])
    if p not in primes:
        raise TTGError(f"prime {p} must belong to the prime set {primes}")
    if n_max < 2:
        raise TTGError("n_max must be at least 2")
    fans = {"1": "1", "C_p": f"C_{p}"}
    heights = [*range(2, n_max + 1), "inf"]
    points, edges, meta = [], [], {}
    for h in fans.values():
        gen = _chrom(h, None, 1)
        points.append(gen)
        meta[gen] = {"class": h, "prime": None, "height": "1"}
        for q in primes:
            prev = gen
            for n in heights:
                pt = _chrom(h, q, n)
                points.append(pt)
                meta[pt] = {"class": h, "prime": q, "height": _height(n)}
                edges.append((prev, pt))
                prev = pt
    src, dst = (fans[f] for f in CROSS_EDGE_FANS)
    for n in range(1, n_max):
        edges.append((_chrom(src, p, n), _chrom(dst, p, n + 1)))
    edges.append((_chrom(src, p, "inf"), _chrom(dst, p, "inf")))
    return FiniteSpectralSpace(points, edges, meta=meta)


def unitation_shg_cp(p: int, primes=None, n_max: int = 4):
    """Quotient of the truncated C_p picture gluing the two height-inf points at p.

    Returns ``(projection, target)``.
    """
    source = spc_shg_cp(p, primes, n_max)
    glued = (_chrom("1", p, "inf"), _chrom(f"C_{p}", p, "inf"))
    target, proj = quotient_space(source, PointPartition.gluing(source, glued))
    return proj, target


def shg_infinity_gluing(g, primes=None) -> list[frozenset]:
    """Partition of the height-inf points P(H,p,inf): same p, and H n K' p-subnormal
    in both H and K' for some conjugate K' of K.  Cross-checked against the Dress
    classes of the Burnside ring.
    """
    lat = _as_lattice(g)
    ring = _ring(lat)
    labels = lat.class_labels
    primes = check_primes(primes if primes is not None else default_primes(lat))
    out = []
    for p in primes:
        blocks = ring.dress_classes(p, method="ag")
        if blocks != ring.dress_classes(p, method="op"):
            raise AssertionError(f"height-inf gluing differs from Dress classes at p={p}")
        out += [frozenset(f"P({labels[c]},{p},inf)" for c in b) for b in blocks]
    return out


def unigenic_locus_dhzg(g, p: int) -> frozenset:
    """{P(G,p)} together with every P(H,0), for a p-group G."""
    lat = _as_lattice(g)
    if not is_prime(p):
        raise TTGError(f"{p} is not prime")
    if not is_p_power(lat.group.order, p):
        raise PreconditionError(f"group of order {lat.group.order} is not a {p}-group")
    space = spc_dhzg(lat, [p])
    labels = lat.class_labels
    locus = frozenset([_mackey(labels[-1], p)] + [_mackey(h, 0) for h in labels])
    if space.generalization(locus) != locus:
        raise AssertionError("unigenic locus is not closed under generalization")
    return locus
