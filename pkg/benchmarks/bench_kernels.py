"""
Compare the compiled and pure-Python enumeration kernels on identical instances.

    python3 benchmarks/bench_kernels.py [--n 17] [--q 5] [--ks 4,8,12] [--instances 20]

Prints one CSV row per k with the median decode time of each backend and
the speedup.  Both backends must return the same point; a mismatch aborts.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from leelattice.channel import sample_laplace_noise, sample_lattice, trial_rng
from leelattice.sphere import BACKENDS, lee_sphere_decode


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    p.add_argument("--n", type=int, default=17)
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--ks", default="4,8,12")
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernel not built; only the Python backend is available", file=sys.stderr)
        return 1
    print("k,python_us,cython_us,speedup")
    for k in (int(v) for v in args.ks.split(",")):
        times = {"python": [], "cython": []}
        for i in range(args.instances):
            rng = trial_rng(args.seed, k, i)
            lat = sample_lattice(args.q, args.n, k, rng)
            r = lat.point(rng.integers(0, args.q, size=args.n)) + sample_laplace_noise(args.n, 1.0, rng)
            points = {}
            for name in times:
                t0 = time.perf_counter()
                res = lee_sphere_decode(lat, r, backend=name)
                times[name].append((time.perf_counter() - t0) * 1e6)
                points[name] = res.point
            if not np.array_equal(points["python"], points["cython"]):
                raise SystemExit(f"backends disagree at k={k}, instance {i}")
        py, cy = statistics.median(times["python"]), statistics.median(times["cython"])
        print(f"{k},{py:.1f},{cy:.1f},{py / cy:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
