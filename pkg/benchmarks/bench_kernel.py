"""Compare the compiled and pure-Python rewriting kernels on the same workload.

Usage: python3 benchmarks/bench_kernel.py [--n 2] [--words 300] [--length 6] [--repeat 3]
"""

import argparse
import random
import time

from qcurv.kernel import available_implementations
from qcurv.ncalg import DEFAULT_TERM_LIMIT, _det_terms, _quadratic_rules


def workload(N, count, length, seed):
    rng = random.Random(seed)
    return [tuple(rng.randrange(N * N) for _ in range(length)) for _ in range(count)]


def run(cls, N, words):
    rw = cls(N, _quadratic_rules(N), _det_terms(N), DEFAULT_TERM_LIMIT)
    start = time.perf_counter()
    results = [rw.nf(w) for w in words]
    return time.perf_counter() - start, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--words", type=int, default=300)
    ap.add_argument("--length", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    N = args.n + 1
    words = workload(N, args.words, args.length, args.seed)
    impls = available_implementations()
    best = {}
    reference = None
    for name, cls in sorted(impls.items()):
        times = []
        for _ in range(args.repeat):
            t, res = run(cls, N, words)
            times.append(t)
        if reference is None:
            reference = res
        elif res != reference:
            raise SystemExit("implementations disagree")
        best[name] = min(times)
        print("%-9s n=%d words=%d length=%d best=%.3fs" % (name, args.n, len(words), args.length, best[name]))
    if "compiled" in best:
        print("speedup compiled/python: %.2fx" % (best["python"] / best["compiled"]))
    else:
        print("compiled kernel not built; only the Python kernel was timed")


if __name__ == "__main__":
    main()
