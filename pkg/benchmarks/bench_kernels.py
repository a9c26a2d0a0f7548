"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 20000] [--grid 200] [--repeat 3]

Prints one CSV row per kernel and backend, and checks the two backends
return identical arrays.
"""

import argparse
import sys
import timeit

import numpy as np

from twobody_dot import _pykernels

try:
    from twobody_dot import _ckernels
except ImportError:
    _ckernels = None


def cases(n, grid, seed=0):
    rng = np.random.default_rng(seed)
    p = rng.uniform(0, 8, n)
    u = rng.uniform(0, 10, n)
    rho = np.geomspace(1e-2, 3, grid)
    z = np.linspace(0, 2, grid)
    return {
        "vstar_bisect_array": lambda k: k.vstar_bisect_array(p, u, 1.0),
        "veff_grid": lambda k: k.veff_grid(rho, z, 1.0, 6.0, 2.75, 1.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000, help="bisection problems")
    ap.add_argument("--grid", type=int, default=200, help="points per grid axis")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.insert(0, ("cython", _ckernels))
    else:
        print("compiled extension not built; timing the Python backend only", file=sys.stderr)

    print("kernel,backend,best_seconds,speedup_vs_python,identical")
    for name, fn in cases(args.n, args.grid).items():
        ref = fn(_pykernels)
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        for bname, mod in backends:
            t = t_py if mod is _pykernels else min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            same = bool(np.array_equal(fn(mod), ref))
            print(f"{name},{bname},{t:.6g},{t_py / t:.3g},{str(same).lower()}")


if __name__ == "__main__":
    main()
