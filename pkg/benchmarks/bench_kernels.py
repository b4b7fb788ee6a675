"""
Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--points N] [--sources M] [--repeat R]

Prints the best wall time of each backend per kernel, the speedup and the
largest relative disagreement between the two.
"""
import argparse
import time

import numpy as np

from gradiometry import kernels


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--points", type=int, default=100_000)
    ap.add_argument("--sources", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    centers = rng.uniform(-50, 50, (args.sources, 3))
    masses = rng.uniform(-1e6, 1e6, args.sources)
    radii = rng.uniform(0.5, 2.0, args.sources)
    points = rng.uniform(-500, 500, (args.points, 3))
    points[:, 2] += 1000.0

    impls = kernels.IMPLEMENTATIONS
    print(f"{args.points} points x {args.sources} sources, best of {args.repeat}")
    print(f"backends available: {', '.join(impls)}")
    print(f"{'kernel':<12}" + "".join(f"{name:>12}" for name in impls) + f"{'speedup':>10}{'max rel diff':>14}")
    for kernel in ("potential", "acceleration", "tensor", "clearance"):
        results = {}
        for name, mod in impls.items():
            fn = getattr(mod, kernel)
            call_args = (points, centers, radii if kernel == "clearance" else masses)
            results[name] = best_time(lambda: fn(*call_args), args.repeat)
        row = f"{kernel:<12}" + "".join(f"{t * 1e3:>10.1f}ms" for t, _ in results.values())
        if len(results) == 2:
            (t_c, out_c), (t_p, out_p) = results["cython"], results["python"]
            diff = np.abs(out_c - out_p).max() / np.abs(out_p).max()
            row += f"{t_p / t_c:>9.1f}x{diff:>14.1e}"
        print(row)


if __name__ == "__main__":
    main()
