"""Compiled versus pure-Python kernels on the same workloads.

    python bench/bench_kernels.py [--repeat 3]

Prints one TSV row per workload: name, cython seconds, python seconds, speedup.
Both backends must return the same value or the script exits nonzero.
"""

import argparse
import statistics
import sys
import time

from theta16 import kernels
from theta16 import thetaengine as te
from theta16.lattices import build_lattice


def shell_job(lid, n):
    lat = build_lattice(lid)
    return lambda b: kernels.backend(b).shell_count(lat.gram_array, n)


def rep_job(lid, gram):
    lat = build_lattice(lid)
    N = te.FourierIndex.parse(gram)
    return lambda b: te._count(lat, te.canonical_form(N), 1, b)


def hist_job(gram):
    from theta16.harmonic import HarmonicSpec, harmonic_coeff
    N = te.FourierIndex.parse(gram)
    spec = HarmonicSpec("I8", N.genus)
    return lambda b: harmonic_coeff(spec, N, backend=b)


WORKLOADS = [
    ("shell Z16 norm 3", shell_job("L5", 3)),
    ("shell E8+E8 norm 4", shell_job("L6", 4)),
    ("rep L5 genus 2 (3,1;1,3)", rep_job("L5", "3,1;1,3")),
    ("rep L6 genus 3 2I3", rep_job("L6", "2,0,0;0,2,0;0,0,2")),
    ("rep L6 genus 4 D4", rep_job("L6", "2,-1,0,0;-1,2,-1,-1;0,-1,2,0;0,-1,0,2")),
    ("P4 histogram I8 genus 3 2I3", hist_job("2,0,0;0,2,0;0,0,2")),
]


def timed(fn, backend, repeat):
    times, value = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        value = fn(backend)
        times.append(time.perf_counter() - t)
    return statistics.median(times), value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "cython" not in kernels.available():
        sys.exit("compiled kernels are not built; run pip install -e . first")
    # warm shells and universes so both sides time only the kernel work
    for _, fn in WORKLOADS:
        fn("cython")
    print("workload\tcython_s\tpython_s\tspeedup")
    bad = False
    for name, fn in WORKLOADS:
        tc, vc = timed(fn, "cython", args.repeat)
        tp, vp = timed(fn, "python", args.repeat)
        bad |= vc != vp
        print(f"{name}\t{tc:.4f}\t{tp:.4f}\t{tp / tc:.1f}x" + ("" if vc == vp else "\tMISMATCH"))
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
