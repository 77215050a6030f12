"""Time the compiled kernels against their pure-Python twins.

Runs identical workloads through `uaqsuite._gfcore` (when built) and
`uaqsuite._gfpure`, checks that both produce the same answers, and
prints one table row per kernel with the speedup.

    python3 benchmarks/bench_backends.py [--repeat N] [--seed S]
"""

import argparse
import math
import random
import time
from array import array

from uaqsuite import _gfpure
from uaqsuite import gf

try:
    from uaqsuite import _gfcore
except ImportError:
    _gfcore = None

PRIME = 10_007


def _time(fn, repeat):
    best = math.inf
    value = None
    for _ in range(repeat):
        started = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - started)
    return best, value


def _det_workload(rng):
    n = 40
    flat = [rng.randrange(PRIME) for _ in range(n * n)]
    buf = gf.vec(flat)

    def pure():
        return _gfpure.det_mod_p(flat, n, PRIME)

    def compiled():
        return _gfcore.det_mod_p(buf, n, PRIME)

    return pure, compiled


def _rank_workload(rng):
    rows, cols = 60, 40
    flat = [rng.randrange(PRIME) for _ in range(rows * cols)]
    buf = gf.vec(flat)

    def pure():
        return _gfpure.rank_mod_p(flat, rows, cols, PRIME)

    def compiled():
        return _gfcore.rank_mod_p(buf, rows, cols, PRIME)

    return pure, compiled


def _wedge_workload(rng):
    n, k = 16, 4
    flat = [rng.randrange(PRIME) for _ in range(n * k)]
    buf = gf.vec(flat)
    m = math.comb(n, k)

    def pure():
        out = array("q", bytes(8 * m))
        _gfpure.wedge_fill(flat, n, k, PRIME, out)
        return list(out)

    def compiled():
        out = array("q", bytes(8 * m))
        _gfcore.wedge_fill(buf, n, k, PRIME, out)
        return list(out)

    return pure, compiled


def _search_workload(rng):
    n_roles, n_perms = 20, 16
    masks = []
    for _ in range(n_roles):
        mask = 0
        for _ in range(rng.randint(1, 4)):
            mask |= 1 << rng.randrange(n_perms)
        masks.append(mask)
    plb = 0
    for _ in range(6):
        plb |= 1 << rng.randrange(n_perms)
    pub = (1 << n_perms) - 1
    cons_masks = [0b1111]
    cons_caps = [2]
    args = (plb, pub, 3, 4, cons_masks, cons_caps, 10**9)

    def pure():
        return _gfpure.find_solution(masks, *args)

    def compiled():
        return _gfcore.find_solution(
            gf.vec(masks), args[0], args[1], args[2], args[3],
            gf.vec(cons_masks), gf.vec(cons_caps), args[6])

    return pure, compiled


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best-of (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"active backend: {gf.BACKEND}")
    if _gfcore is None:
        print("compiled extension not built; pure timings only\n")

    workloads = [
        ("det 40x40", _det_workload),
        ("rank 60x40", _rank_workload),
        ("wedge 16 choose 4", _wedge_workload),
        ("subset search n=20", _search_workload),
    ]
    header = f"{'kernel':<20} {'pure':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, build in workloads:
        rng = random.Random(args.seed)
        pure_fn, compiled_fn = build(rng)
        pure_s, pure_val = _time(pure_fn, args.repeat)
        if _gfcore is None:
            print(f"{name:<20} {pure_s * 1000:>10.3f}ms {'-':>12} {'-':>9}")
            continue
        comp_s, comp_val = _time(compiled_fn, args.repeat)
        if pure_val != comp_val:
            raise SystemExit(f"backend mismatch on {name}: "
                             f"{pure_val!r} != {comp_val!r}")
        print(f"{name:<20} {pure_s * 1000:>10.3f}ms {comp_s * 1000:>10.3f}ms "
              f"{pure_s / comp_s:>8.1f}x")


if __name__ == "__main__":
    main()
