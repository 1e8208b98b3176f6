"""Compare the Cython kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from diamond_relay import core, kernels, polymatroid
from diamond_relay.sim import sample_channel


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(rng):
    for n in (10, 16, 20, 24):
        x, y = rng.exponential(size=n) * 100, np.abs(rng.standard_normal(n)) * 10
        yield f"cut_minimum coherent n={n}", lambda impl, x=x, y=y: impl.cut_minimum(x, y, 1.0, 1.0, True, 0.0)
    for n in (8, 12):
        sf = polymatroid.mac_set_function(rng.exponential(size=n), 1000.0)
        vals = sf.values
        yield f"polymatroid_violation n={n}", lambda impl, v=vals, n=n: impl.polymatroid_violation(v, n, 1e-12)
    v = rng.exponential(size=20)
    yield "subset_sums n=20", lambda impl, v=v: impl.subset_sums(v)


def pdf_throughput(repeat):
    """pdf_rate calls per second at N=10 with the active backend."""
    rng = np.random.default_rng(0)
    nets = [sample_channel("rayleigh", 10, 1000.0, rng) for _ in range(200)]
    secs = best_time(lambda: [core.pdf_rate(net) for net in nets], repeat)
    return len(nets) / secs


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = kernels.available_backends()
    rng = np.random.default_rng(1)
    names = list(backends)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'case':32s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases(rng):
        t = {name: best_time(lambda: fn(impl), args.repeat) for name, impl in backends.items()}
        row = f"{label:32s}" + "".join(f"{t[n] * 1e3:10.3f}ms" for n in names)
        if len(names) == 2:
            row += f"{t['python'] / t['cython']:11.1f}x"
        print(row)
    for name, impl in backends.items():
        saved, kernels._impl = kernels._impl, impl
        try:
            rate = pdf_throughput(args.repeat)
        finally:
            kernels._impl = saved
        print(f"pdf_rate N=10 ({name}): {rate:,.0f} instances/s")


if __name__ == "__main__":
    main()
