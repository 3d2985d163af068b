"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit
from fractions import Fraction
from itertools import combinations

from multisym import _kernels_py

try:
    from multisym import _kernels_c
except ImportError:
    _kernels_c = None


def random_terms(n, p, rng, density=0.5):
    return {I: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for I in combinations(range(1, n + 1), p) if rng.random() < density}


def workloads(rng):
    a = random_terms(8, 2, rng)
    b = random_terms(8, 3, rng)
    u = random_terms(8, 2, rng)
    w = random_terms(8, 4, rng)
    ints = [[rng.randint(-9, 9) for _ in range(24)] for _ in range(20)]
    fracs = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(12)] for _ in range(10)]
    idx = [(tuple(sorted(rng.sample(range(1, 12), 4))), tuple(sorted(rng.sample(range(1, 12), 3)))) for _ in range(200)]
    return {
        "merge_sign x200": lambda k: [k.merge_sign(x, y) for x, y in idx],
        "wedge 2-form ^ 3-form, n=8": lambda k: k.wedge_terms(a, b),
        "contract 2-vector into 4-form, n=8": lambda k: k.contract_terms(u, w),
        "rref_int 20x24": lambda k: k.rref_int([list(r) for r in ints], 24),
        "rref_fractions 10x12": lambda k: k.rref_fractions([list(r) for r in fracs], 12),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    args = ap.parse_args()
    loads = workloads(random.Random(0))
    backends = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    if _kernels_c is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':<38}" + "".join(f"{name:>12}" for name, _ in backends) + ("    speedup" if _kernels_c else ""))
    for label, fn in loads.items():
        times = []
        for _, mod in backends:
            best = min(timeit.repeat(lambda: fn(mod), number=args.number, repeat=args.repeat))
            times.append(best / args.number * 1e3)
        row = f"{label:<38}" + "".join(f"{t:>10.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>10.2f}x"
        print(row)


if __name__ == "__main__":
    main()
