"""Timing of the compiled hot kernels against the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py``.  Both backends are imported
directly, so the comparison does not depend on ``MDIRICHLET_PURE``.
"""

import argparse
import timeit

import numpy as np

from mdirichlet._accel import _fallback
from mdirichlet.harmonics import zonal_coefficients

try:
    from mdirichlet._accel import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--cutoff", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args(argv)

    rng = np.random.RandomState(args.seed)
    m = args.points
    x = 0.6 * (rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m))
    rho = np.abs(x) ** 2 + rng.uniform(0, 0.1, m)
    coef = zonal_coefficients(2, args.cutoff)
    t = rng.uniform(0, 0.95, m)

    # kernels read only the cells with p + q <= cutoff
    used = np.add.outer(np.arange(args.cutoff + 1), np.arange(args.cutoff + 1)) <= args.cutoff
    cases = {
        f"zonal_cells  cutoff={args.cutoff} pairs={m}": lambda mod: mod.zonal_cells(coef, x, rho)[:, used],
        f"hyp2f1_series (3, 2; 7) points={m}": lambda mod: mod.hyp2f1_series(3.0, 2.0, 7.0, t, 1e-14),
    }
    print(f"{'kernel':<40} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, call in cases.items():
        tp = _best(lambda: call(_fallback), args.repeat) * 1e3
        if _ckernels is None:
            print(f"{name:<40} {tp:12.2f} {'n/a':>12} {'n/a':>8}")
            continue
        tc = _best(lambda: call(_ckernels), args.repeat) * 1e3
        a, b = call(_fallback), call(_ckernels)
        a, b = (a[0], b[0]) if isinstance(a, tuple) else (a, b)
        agree = np.max(np.abs(np.asarray(a) - np.asarray(b)))
        print(f"{name:<40} {tp:12.2f} {tc:12.2f} {tp / tc:8.1f}   max diff {agree:.1e}")


if __name__ == "__main__":
    main()
