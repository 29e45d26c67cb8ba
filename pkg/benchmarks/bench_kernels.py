"""Time the band solver on each available kernel backend.

Usage::

    python benchmarks/bench_kernels.py --k-points 401 --repeat 20

Both backends solve the same grids; the script also checks that their
outputs agree bit for bit before reporting timings.
"""
import argparse
import timeit

import numpy as np

from qpbands import kernels
from qpbands.params import DimensionlessParams, normalized_from_dimensionless
from qpbands.presets import PRESET_COMBOS
from qpbands.spectrum import DEFAULT_TOL, k_grid


def _solve_all(mod, grids, k):
    for p in grids:
        mod.solve_grid(k, p.a, p.b, p.delta, DEFAULT_TOL, 1e-12, 200)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-points", type=int, default=401)
    ap.add_argument("--repeat", type=int, default=10)
    args = ap.parse_args(argv)

    k = k_grid(args.k_points)
    grids = [normalized_from_dimensionless(DimensionlessParams(b, g)) for b, g in PRESET_COMBOS]
    backends = kernels.available_backends()

    ref = ref_name = None
    for name, mod in backends.items():
        out = [mod.solve_grid(k, p.a, p.b, p.delta, DEFAULT_TOL, 1e-12, 200) for p in grids]
        if ref is None:
            ref, ref_name = out, name
        else:
            same = all(np.array_equal(x, y, equal_nan=True)
                       for a, b in zip(ref, out) for x, y in zip(a, b))
            print(f"{name} output identical to {ref_name}: {same}")

    print(f"{len(grids)} parameter sets x {args.k_points} K points, best of {args.repeat}")
    timings = {}
    for name, mod in backends.items():
        t = min(timeit.repeat(lambda: _solve_all(mod, grids, k), number=1, repeat=args.repeat))
        timings[name] = t
        print(f"  {name:8s} {t * 1e3:9.2f} ms  ({t / len(grids) * 1e3:.3f} ms per scan)")
    if "python" in timings and len(timings) > 1:
        for name, t in timings.items():
            if name != "python":
                print(f"  speedup {name} / python: {timings['python'] / t:.1f}x")


if __name__ == "__main__":
    main()
