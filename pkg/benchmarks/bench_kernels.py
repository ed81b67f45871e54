#!/usr/bin/env python3
"""Benchmark the compiled text kernels against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--chars N] [--repeat K]
"""

import argparse
import random
import time

from c5corpus import _speedups_py as python_impl

try:
    from c5corpus import _speedups as native_impl
except ImportError:
    native_impl = None

KERNELS = ("collapse_blanks", "strip_blanks", "han_counts", "split_after_marks")


def make_lines(total_chars: int, seed: int = 1) -> list[str]:
    rng = random.Random(seed)
    pool = [chr(rng.randint(0x4E00, 0x62FF)) for _ in range(400)]
    blanks = [" ", "\t", "　", " ", "​"]
    marks = ["。", "！", "？"]
    lines = []
    produced = 0
    while produced < total_chars:
        n = rng.randint(20, 120)
        chars = []
        for _ in range(n):
            r = rng.random()
            if r < 0.08:
                chars.append(rng.choice(blanks))
            elif r < 0.16:
                chars.append(rng.choice(marks))
            else:
                chars.append(rng.choice(pool))
        lines.append("".join(chars))
        produced += n
    return lines


def bench(impl, name: str, lines: list[str], repeat: int) -> float:
    fn = getattr(impl, name)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for line in lines:
            fn(line)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chars", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lines = make_lines(args.chars)
    total = sum(len(line) for line in lines)
    print(f"workload: {len(lines)} lines, {total / 1e6:.1f}M chars, best of {args.repeat}\n")
    header = f"{'kernel':<20}{'python':>12}{'native':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name in KERNELS:
        py = bench(python_impl, name, lines, args.repeat)
        if native_impl is not None:
            nat = bench(native_impl, name, lines, args.repeat)
            print(f"{name:<20}{py:>10.3f}s{nat:>10.3f}s{py / nat:>9.1f}x")
        else:
            print(f"{name:<20}{py:>10.3f}s{'n/a':>12}{'':>10}")
    if native_impl is None:
        print("\ncompiled extension not built; only the fallback was timed")
    print(
        f"\nthroughput (native collapse_blanks): "
        f"{total / bench(native_impl or python_impl, 'collapse_blanks', lines, 1) / 1e6:.0f} Mchar/s"
    )


if __name__ == "__main__":
    main()
