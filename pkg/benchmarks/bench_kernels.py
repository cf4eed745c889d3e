"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]

Prints best-of-R wall time per kernel and backend, the speed-up, and the
largest absolute difference between backends on the same inputs.
"""

import argparse
import time

import numpy as np

from fidelity_gap import kernels
from fidelity_gap.presets import preset
from fidelity_gap.cli import parse_document
from fidelity_gap.scan import scan


def inputs(n, rng):
    u = rng.uniform(-1.05, 1.05, size=(3, n))
    return {
        "bloch": (u[0], u[1], u[2], (0.0, 0.0, 1.0)),
        "pauli_diagonal": (u[0], u[1], u[2], (-0.45, -0.45, -0.45)),
        "sts1": (rng.uniform(0.3, 2.5, n), rng.uniform(0.3, 1.0, n), rng.uniform(0, 2.5, n), (1.4, 0.9, 0.5)),
        "sts2": (rng.uniform(0, 4, n), rng.uniform(0, 1, n), rng.uniform(0, 1, n), (2.0, 0.2, 0.5)),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def max_diff(a, b):
    worst = 0.0
    for k, va in a.items():
        va, vb = np.asarray(va, float), np.asarray(b[k], float)
        m = ~(np.isnan(va) | np.isnan(vb))
        if m.any():
            worst = max(worst, float(np.max(np.abs(va[m] - vb[m]))))
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}; {args.points} points, best of {args.repeat}")
    if "cython" not in backends:
        print("compiled extension not built; only the numpy fallback is timed")
    data = inputs(args.points, np.random.default_rng(1))

    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + f"{'speed-up':>10}{'max |diff|':>12}")
    for name, argv in data.items():
        row, outs = {}, {}
        for b in backends:
            fn = getattr(kernels.get_backend(b), name)
            row[b], outs[b] = best_of(lambda: fn(*argv), args.repeat)
        line = f"{name:<16}" + "".join(f"{row[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{row['python'] / row['cython']:>9.1f}x{max_diff(outs['cython'], outs['python']):>12.1e}"
        print(line)

    print("\nend-to-end figure scans (grid evaluation only, single thread)")
    for fig in ("fig2", "fig6"):
        panels, _ = parse_document(preset(fig))
        for b in backends:
            t, _ = best_of(lambda: [scan(p.grid, p.constraint, p.windows, threads=1, backend=b) for p in panels],
                           max(1, args.repeat // 2))
            print(f"  {fig} [{b}]: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
