"""Compare the compiled polynomial kernels against the pure-Python twins.

Run as a script:  python3 benchmarks/bench_core.py [--sizes 32,128,512]
"""

import argparse
import random
import time

from defdatum import _core, _corepy

try:
    from defdatum import _gfcore
except ImportError:
    _gfcore = None


def random_poly(rng, n, p):
    a = [rng.randrange(p) for _ in range(n)]
    a[-1] = rng.randrange(1, p)
    return a


def bench(fn, args_list, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="32,128,512")
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--cases", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _gfcore is None:
        print("compiled kernel not built; nothing to compare")
        return
    print(f"active backend: {_core.BACKEND}")

    p = args.p
    rng = random.Random(args.seed)
    ops = {
        "mul": lambda impl, a, b: impl.mul(a, b, p),
        "divmod": lambda impl, a, b: impl.divmod_(a, b, p),
        "gcd": lambda impl, a, b: impl.gcd_(a, b, p),
    }
    header = f"{'op':8s} {'n':>6s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for n in (int(s) for s in args.sizes.split(",")):
        pairs = [
            (random_poly(rng, n, p), random_poly(rng, max(n // 2, 1), p))
            for _ in range(args.cases)
        ]
        for name, op in ops.items():
            t_py = bench(lambda a, b: op(_corepy, a, b), pairs)
            t_cy = bench(lambda a, b: op(_gfcore, a, b), pairs)
            # both backends must agree exactly before any timing is trusted
            for a, b in pairs[:5]:
                assert op(_corepy, list(a), list(b)) == op(_gfcore, list(a), list(b))
            print(f"{name:8s} {n:6d} {t_py:9.4f}s {t_cy:9.4f}s {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
