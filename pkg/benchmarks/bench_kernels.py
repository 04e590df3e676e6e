"""Timing comparison of the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is timed on a fixed representative workload; the table
reports the best wall time per backend and the resulting speedup.
"""

import argparse
import importlib
import time

import numpy as np

from sievekit.primes import prime_power_arrays, primes_array


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads():
    base = 10**9
    count = 1 << 18
    seg_primes = primes_array(int((base + 2 * count) ** 0.5) + 1)
    flags = np.ones(count, dtype=np.uint8)

    pr = primes_array(10**6)
    powers, weights = prime_power_arrays(10**6, pr)
    d = 12
    res_pi = (pr % d).astype(np.int64)
    res_psi = (powers % d).astype(np.int64)
    coprime = np.array([a for a in range(1, d) if np.gcd(a, d) == 1], dtype=np.int64)

    k, dd = 3, 4
    kd = k * dd
    res_kd = (pr % kd).astype(np.int64)
    res_k = (pr % k).astype(np.int64)
    cop_kd = np.array([a for a in range(1, kd) if np.gcd(a, kd) == 1], dtype=np.int64)

    return [
        ("mark_segment_odds", lambda m: m.mark_segment_odds(flags.copy(), base, seg_primes)),
        ("spf_fill", lambda m: m.spf_fill(np.zeros(10**6, dtype=np.uint32))),
        ("multiplicative_tables", lambda m: m.multiplicative_tables(10**6)),
        ("divisor_count_table", lambda m: m.divisor_count_table(10**6)),
        ("pi_error_scan", lambda m: m.pi_error_scan(res_pi, d, coprime)),
        ("psi_error_scan", lambda m: m.psi_error_scan(res_psi, weights, d, coprime)),
        ("k_offset_scan", lambda m: m.k_offset_scan(res_kd, res_k, kd, k, 2, cop_kd)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repeats per kernel")
    args = parser.parse_args()

    kpy = importlib.import_module("sievekit._kernels_py")
    try:
        kcy = importlib.import_module("sievekit._kernels_cy")
    except ImportError:
        kcy = None
        print("compiled backend not importable; timing the fallback only\n")

    header = f"{'kernel':<22}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, call in _workloads():
        t_py = _best(lambda: call(kpy), args.repeat)
        if kcy is None:
            print(f"{name:<22}{t_py:>11.4f}s{'-':>12}{'-':>10}")
            continue
        t_cy = _best(lambda: call(kcy), args.repeat)
        ratio = t_py / t_cy if t_cy > 0 else float("inf")
        print(f"{name:<22}{t_py:>11.4f}s{t_cy:>11.4f}s{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
