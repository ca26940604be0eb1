"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from verlinde_kit import _pykernels, build_root_datum
from verlinde_kit.affine import kernel_data
from verlinde_kit.verlinde import _weight_arrays

try:
    from verlinde_kit import _ckernels
except ImportError:
    _ckernels = None


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def reduce_case(mod, datum, k_dual, weights):
    data = kernel_data(datum)

    def run():
        for mu in weights:
            mod.reduce_weight(*data, k_dual, mu)

    return run


def klimyk_case(mod, datum, k_dual, lam, mu):
    data = kernel_data(datum)
    w, m = _weight_arrays(datum, mu)
    shifted = [c + 1 for c in lam]

    def run():
        for _ in range(200):
            mod.klimyk_accumulate(*data, k_dual, shifted, w, m)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return
    rng = np.random.default_rng(0)
    cases = []
    for name, kd in [("A2", 7), ("B3", 9), ("D4", 10)]:
        d = build_root_datum(name)
        weights = [[int(x) for x in rng.integers(-60, 60, d.rank)] for _ in range(5000)]
        cases.append((f"reduce x5000 {name} k_dual={kd}", lambda mod, d=d, kd=kd, ws=weights: reduce_case(mod, d, kd, ws)))
    for name, kd, lam, mu in [("A2", 12, (4, 3), (3, 3)), ("B3", 14, (2, 1, 2), (1, 1, 1)), ("G2", 10, (3, 2), (2, 1))]:
        d = build_root_datum(name)
        cases.append((f"klimyk x200 {name} {lam}x{mu}", lambda mod, d=d, kd=kd, lam=lam, mu=mu: klimyk_case(mod, d, kd, lam, mu)))
    print(f"{'case':40s} {'python (s)':>11s} {'cython (s)':>11s} {'speedup':>8s}")
    for label, make in cases:
        tp = best(make(_pykernels), args.repeat)
        tc = best(make(_ckernels), args.repeat)
        print(f"{label:40s} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
