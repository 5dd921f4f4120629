#!/usr/bin/env python3
"""Time the numba kernels against their numpy / interpreted fallbacks.

Each kernel is run once to warm the JIT cache, then timed over ``--repeat``
runs per backend; both results are compared for equality.  With
``--subprocess`` the whole CLI is also timed with MATROIDFLAT_DISABLE_NUMBA
set and unset.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from matroidflat import _kernels as K
from matroidflat import constructions as C
from matroidflat import verify as V
from matroidflat._jit import USE_NUMBA


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def cases():
    y = V.build_matroid_y()
    m5 = C.family_Mn(5)
    twelve = V.build_twelve()
    p6 = C.mn_presentation(6)
    p5 = C.mn_presentation(5)
    fy, f5, f12 = y.flats(), m5.flats(), twelve.flats()
    rng = np.random.default_rng(7)
    nv = 12
    arcs = np.argwhere(rng.random((nv, nv)) < 0.25).astype(np.int64)
    arcs = arcs[arcs[:, 0] != arcs[:, 1]]
    sinks = np.zeros(nv, dtype=bool)
    sinks[:4] = True
    return [
        ("gammoid 12 vertices", lambda b: K.gammoid_table(nv, arcs, list(range(nv)), sinks, b)),
        ("transversal M5 table", lambda b: K.transversal_table(10, list(p5.sets), b)),
        ("transversal M6 table", lambda b: K.transversal_table(15, list(p6.sets), b)),
        ("flag tables twelve", lambda b: K.flag_tables(twelve.table, 12, b)),
        ("axioms twelve", lambda b: K.check_axioms_local(twelve.table, 12, b)),
        ("pseudomodular scan M5", lambda b: K.pseudomodular_scan(m5.table, f5, b)),
        ("triple scan matroidY", lambda b: K.triple_form_scan(y.table, fy, b)),
        ("pseudomodular scan twelve", lambda b: K.pseudomodular_scan(twelve.table, f12, b)),
        ("modular scan M5", lambda b: K.modular_scan(m5.table, f5, b)),
    ]


def run_inprocess(repeat):
    print(f"{'kernel':<26} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  equal")
    for name, fn in cases():
        fn("numba")
        tn, rn = _best(lambda: fn("numba"), repeat)
        tp, rp = _best(lambda: fn("numpy"), repeat)
        print(f"{name:<26} {tn:>10.4f} {tp:>10.4f} {tp / max(tn, 1e-9):>8.1f}  {_same(rn, rp)}")


def run_subprocess(corpus):
    cmd = [sys.executable, "-m", "matroidflat", "flatness-degree", "--corpus", corpus, "--no-timing"]
    for label, disable in (("numba", "0"), ("fallback", "1")):
        env = dict(os.environ, MATROIDFLAT_DISABLE_NUMBA=disable)
        t = time.perf_counter()
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
        dt = time.perf_counter() - t
        answer = proc.stdout.splitlines()[1] if proc.stdout else proc.stderr.strip()
        print(f"{label:<9} {dt:8.3f}s  exit={proc.returncode}  {answer}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--subprocess", action="store_true", help="also time the CLI end to end")
    ap.add_argument("--corpus", default="mn5", help="corpus entry for --subprocess")
    args = ap.parse_args()
    if not USE_NUMBA:
        sys.exit("numba is disabled or missing; nothing to compare")
    run_inprocess(args.repeat)
    if args.subprocess:
        run_subprocess(args.corpus)


if __name__ == "__main__":
    main()
