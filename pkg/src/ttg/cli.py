"""``ttg`` command line.

Exit codes: 0 success / predicate true, 1 predicate false or verification
failures, 2 bad input or I/O error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from . import io, kernels
from . import spaces as S
from .errors import NonT0Error, NotMonotoneError, TTGError

PREDICATES = ("quotient", "spectral-quotient", "weak", "heritable-weak",
              "strong-topological", "weak-lifting", "connected-fibers")
SUBJECTS = ("burnside-spec", "dhz-spec", "dhz-comparison", "shg-cp", "shg-cp-unitation",
            "infinity-gluing", "fixtures")


class _Usage(TTGError):
    pass


# ---------------------------------------------------------------- witnesses


def _not_surjective(m):
    missing = sorted(set(m.codomain.points) - set(m.as_dict().values()))
    return {"missing": missing} if missing else None


def _quotient_witness(m):
    w = _not_surjective(m)
    if w:
        return w
    pushed = kernels.pushforward_order(m.domain.leq, m.assign, len(m.codomain))
    i, j = np.argwhere(m.codomain.leq & ~pushed)[0]
    pts = m.codomain.points
    return {"unlifted_specialization": [pts[i], pts[j]]}


def _weak_witness(m):
    w = _not_surjective(m)
    if w:
        return w
    Y = m.codomain
    for r in range(1, len(Y) + 1):
        for b in itertools.combinations(Y.points, r):
            if Y.is_convex(b) and not Y.is_closed(b) and m.domain.is_closed(m.preimage(b)):
                return {"convex_set": sorted(b)}
    return None


def _heritable_witness(m):
    for u in m.codomain.down_sets():
        if u and not S.is_weak_spectral_quotient(m.corestrict(u)):
            sub = m.corestrict(u)
            return {"open": sorted(u), "inner": _weak_witness(sub)}
    return None


def _lifting_witness(m):
    w = _not_surjective(m)
    if w:
        return w
    bad = S.weak_lifting_failures(m)
    return {"unlifted_specialization": list(bad[0])} if bad else None


def evaluate(m: S.SpectralMap, predicate: str) -> tuple[bool, object]:
    if predicate in ("quotient", "spectral-quotient"):
        ok = S.is_topological_quotient(m)
        return ok, None if ok else _quotient_witness(m)
    if predicate == "weak":
        ok = S.is_weak_spectral_quotient(m)
        return ok, None if ok else _weak_witness(m)
    if predicate == "heritable-weak":
        ok = S.is_heritable_weak_spectral_quotient(m)
        return ok, None if ok else _heritable_witness(m)
    if predicate in ("strong-topological", "weak-lifting"):
        ok = (S.is_strong_topological_quotient(m) if predicate == "strong-topological"
              else S.has_weak_lifting_property(m))
        return ok, None if ok else _lifting_witness(m)
    if predicate == "connected-fibers":
        bad = S.disconnected_fibers(m)
        return not bad, {y: [sorted(c) for c in comps] for y, comps in sorted(bad.items())} or None
    raise _Usage(f"unknown predicate {predicate!r}")


# ---------------------------------------------------------------- helpers


def _group(spec):
    from .groups import catalog, from_json

    if spec is None:
        raise _Usage("--group is required")
    p = Path(spec)
    if spec.endswith(".json") or p.is_file():
        return from_json(io.loads(p.read_text()))
    return catalog(spec)


def _primes(text):
    if text is None:
        return None
    try:
        return sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise _Usage(f"--primes expects a comma-separated list of integers, got {text!r}") from None


def _print_json(obj):
    sys.stdout.write(io.dumps(obj))


def _lattice_obj(g):
    from .groups import o_p, primes_dividing

    lat = g.lattice()
    classes = []
    for c, label in enumerate(lat.class_labels):
        h = lat.rep(c)
        classes.append({
            "label": label,
            "order": int(lat.orders[h]),
            "size": len(lat.classes[c]),
            "normal": bool(lat.is_normal(h)),
            "o_p": {str(p): lat.label(o_p(lat, h, p)) for p in primes_dividing(g.order)},
        })
    return {"order": g.order, "subgroups": len(lat), "classes": classes}


# ---------------------------------------------------------------- commands


def cmd_space(a):
    m = io.load_map(a.file)
    ok, witness = evaluate(m, a.predicate)
    _print_json({"predicate": a.predicate, "result": bool(ok), "witness": witness})
    return 0 if ok else 1


def cmd_group(a):
    _print_json(_lattice_obj(_group(a.group)))
    return 0


def cmd_burnside(a):
    from .burnside import spec_burnside, table_of_marks

    g = _group(a.group)
    marks = table_of_marks(g)
    _print_json({"classes": marks.labels, "marks": marks.m.tolist(),
                 "spec": io.space_to_obj(spec_burnside(g, _primes(a.primes)))})
    return 0


def cmd_dhz(a):
    from .equivariant import dhzg_comparison, fiber_locality

    m = dhzg_comparison(_group(a.group), _primes(a.primes))
    loc = fiber_locality(m)
    _print_json({
        "points": len(m.domain),
        "fibers": {y: sorted(f) for y, f in sorted(m.fibers().items())},
        "topological_quotient": S.is_topological_quotient(m),
        "connected_fibers": S.fibers_connected(m),
        "local_fibers": loc.local,
    })
    return 0


def cmd_shg(a):
    from .equivariant import unitation_shg_cp

    p = a.prime or 2
    proj, target = unitation_shg_cp(p, _primes(a.primes) or [p], a.height or 4)
    _print_json({
        "points": len(proj.domain),
        "quotient_points": len(target),
        "glued": sorted(sorted(f) for f in proj.fibers().values() if len(f) > 1),
        "strong_topological_quotient": S.is_strong_topological_quotient(proj),
        "connected_fibers": S.fibers_connected(proj),
    })
    return 0


def cmd_verify(a):
    from . import verify

    kw = {"seed": a.seed, "groups": [a.group] if a.group else None, "prime": a.prime,
          "primes": _primes(a.primes), "height": a.height}
    for key in ("max_domain", "max_codomain", "samples"):
        if getattr(a, key) is not None:
            kw[key] = getattr(a, key)
    if a.suite == "all":
        reports, wall = verify.run_all(jobs=a.jobs, **kw)
    elif a.suite in verify.SUITES:
        rep, wall = verify.run(a.suite, jobs=a.jobs, **kw)
        reports = [rep]
    else:
        raise _Usage(f"unknown suite {a.suite!r}; expected one of {verify.SUITES + ('all',)}")
    text = io.dumps({"seed": a.seed, "reports": [r.to_obj() for r in reports]})
    if a.out:
        io.atomic_write(a.out, text)
    else:
        sys.stdout.write(text)
    for r in reports:
        print(f"{r.suite}: {r.instances} instances, {len(r.failures)} failures", file=sys.stderr)
    print(f"wall time {wall:.2f}s", file=sys.stderr)
    return 0 if all(r.ok for r in reports) else 1


def _subject(a):
    """(kind, object) for an emit subject; kind is space, map, gluing or bundle."""
    from . import equivariant as E
    from .burnside import spec_burnside
    from .fixtures import fixtures

    primes = _primes(a.primes)
    s = a.subject
    if s == "burnside-spec":
        return "space", spec_burnside(_group(a.group), primes)
    if s == "dhz-spec":
        return "space", E.spc_dhzg(_group(a.group), primes)
    if s == "dhz-comparison":
        return "map", E.dhzg_comparison(_group(a.group), primes)
    if s in ("shg-cp", "shg-cp-unitation"):
        p = a.prime or 2
        primes = primes or [p]
        if s == "shg-cp":
            return "space", E.spc_shg_cp(p, primes, a.height or 4)
        return "map", E.unitation_shg_cp(p, primes, a.height or 4)[0]
    if s == "infinity-gluing":
        blocks = E.shg_infinity_gluing(_group(a.group), primes)
        return "gluing", {"classes": sorted(sorted(b) for b in blocks)}
    if s == "fixtures":
        return "bundle", fixtures()
    raise _Usage(f"unknown subject {s!r}; expected one of {SUBJECTS}")


def _render(kind, obj, fmt, name):
    if fmt == "json":
        if kind == "space":
            return io.dumps(io.space_to_obj(obj))
        if kind == "map":
            return io.dumps(io.map_to_obj(obj))
        return io.dumps(obj)
    if kind == "space":
        return io.space_to_dot(obj, name)
    if kind == "map":
        return io.map_to_dot(obj, name)
    raise _Usage(f"{name} has no DOT form")


def cmd_emit(a):
    kind, obj = _subject(a)
    ext = "dot" if a.format == "dot" else "json"
    if kind == "bundle":
        items = {k: ("space" if isinstance(v, S.FiniteSpectralSpace) else "map", v)
                 for k, v in sorted(obj.items())}
        rendered = {k: _render(kd, v, a.format, k) for k, (kd, v) in items.items()}
        if a.out:
            out = Path(a.out)
            out.mkdir(parents=True, exist_ok=True)
            for k, text in rendered.items():
                io.atomic_write(out / f"{k}.{ext}", text)
        elif a.format == "json":
            sys.stdout.write(io.dumps({k: json.loads(t) for k, t in rendered.items()}))
        else:
            sys.stdout.write("".join(rendered.values()))
        return 0
    text = _render(kind, obj, a.format, a.subject)
    if a.out:
        io.atomic_write(a.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ttg", description="Finite spectral spaces and equivariant spectra.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *, group=False, primes=False, prime=False, height=False):
        if group:
            p.add_argument("--group", help="catalog name (S_3, C_2xC_4, ...) or a group JSON file")
        if primes:
            p.add_argument("--primes", help="comma-separated primes, e.g. 2,3")
        if prime:
            p.add_argument("--prime", type=int)
        if height:
            p.add_argument("--height", type=int, help="truncation height n_max (default 4)")

    p = sub.add_parser("space", help="evaluate a predicate on a map JSON file")
    p.add_argument("file")
    p.add_argument("--predicate", required=True, choices=PREDICATES)
    p.set_defaults(fn=cmd_space)

    p = sub.add_parser("group", help="subgroup lattice summary")
    common(p, group=True)
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("burnside", help="table of marks and Spec(A(G))")
    common(p, group=True, primes=True)
    p.set_defaults(fn=cmd_burnside)

    p = sub.add_parser("dhz", help="derived Mackey spectrum and its comparison map")
    common(p, group=True, primes=True)
    p.set_defaults(fn=cmd_dhz)

    p = sub.add_parser("shg", help="truncated C_p picture and its unitation")
    common(p, primes=True, prime=True, height=True)
    p.set_defaults(fn=cmd_shg)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("suite", help="section2, burnside, dhz, shg-cp or all")
    common(p, group=True, primes=True, prime=True, height=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-domain", type=int, dest="max_domain")
    p.add_argument("--max-codomain", type=int, dest="max_codomain")
    p.add_argument("--samples", type=int, help="seeded random maps beyond the exhaustive corpus")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("emit", help="write a computed space or map")
    p.add_argument("subject", choices=SUBJECTS)
    common(p, group=True, primes=True, prime=True, height=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_emit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (NonT0Error, NotMonotoneError) as e:
        print(f"ttg: {e} (pair {list(e.pair)})", file=sys.stderr)
    except TTGError as e:
        print(f"ttg: {e}", file=sys.stderr)
    except OSError as e:
        print(f"ttg: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
