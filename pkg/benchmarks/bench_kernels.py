"""Time the quotient predicates over the exhaustive corpus under each backend.

Each backend runs in its own interpreter because ``TTG_BACKEND`` is read once
at import.  numba compile time is measured separately from the sweep.

    python3 benchmarks/bench_kernels.py --domain 5 --codomain 4 --repeat 3
"""
import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json, sys, time
t0 = time.perf_counter()
from ttg import kernels, spaces as S
from ttg.enumerate import corpus
from ttg.fixtures import weak_not_spectral
m = weak_not_spectral()
S.is_heritable_weak_spectral_quotient(m); S.has_weak_lifting_property(m); S.strong_quotient_verdicts(m)
warm = time.perf_counter() - t0
maps = [m for _, m in corpus(int(sys.argv[1]), int(sys.argv[2]))]
best = float("inf")
for _ in range(int(sys.argv[3])):
    t = time.perf_counter()
    for m in maps:
        S.is_topological_quotient(m)
        S.is_heritable_weak_spectral_quotient(m)
        S.has_weak_lifting_property(m)
        S.strong_quotient_verdicts(m)
    best = min(best, time.perf_counter() - t)
print(json.dumps({"backend": kernels.BACKEND, "maps": len(maps), "warmup": warm, "sweep": best}))
"""


def run(backend, args):
    env = dict(os.environ, TTG_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, str(args.domain), str(args.codomain), str(args.repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", type=int, default=5)
    ap.add_argument("--codomain", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args(argv)

    rows = [run(b, args) for b in ("numpy", "numba")]
    print(f"{'backend':<8} {'maps':>7} {'warmup s':>9} {'sweep s':>9} {'us/map':>8}")
    for r in rows:
        print(f"{r['backend']:<8} {r['maps']:>7} {r['warmup']:>9.2f} {r['sweep']:>9.2f} "
              f"{1e6 * r['sweep'] / r['maps']:>8.1f}")
    if rows[1]["backend"] == "numba":
        print(f"speedup: {rows[0]['sweep'] / rows[1]['sweep']:.1f}x")
    else:
        print("numba unavailable; both runs used numpy")


if __name__ == "__main__":
    t = time.perf_counter()
    main()
    print(f"total {time.perf_counter() - t:.1f}s", file=sys.stderr)
