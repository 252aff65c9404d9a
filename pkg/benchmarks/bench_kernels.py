"""Compare the pure Python and compiled kernels on representative inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is timed on the same inputs under every available backend;
outputs are checked for equality before timing.  A final end-to-end row
times a small classification run with each backend in a subprocess.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from canaug import augment
from canaug.augment import RunContext, generate
from canaug.canon import canonicalize, initial_colours, reduce_code
from canaug.code import LinearCode
from canaug.constraints import validate
from canaug.gf import field_make
from canaug.kernels import backends


def _random_code(rng, q, k, n):
    F = field_make(q)
    while True:
        C = LinearCode(F, rng.integers(0, q, size=(k, n)), n)
        if len(C.pivots) == k:
            return C


def refine_cases(rng):
    cases = []
    for q, k, n in [(2, 6, 24), (3, 5, 16), (4, 4, 14)]:
        for _ in range(20):
            red = reduce_code(_random_code(rng, q, k, n))
            cc, wc = initial_colours(red)
            cases.append((red.incidence, cc, wc))
    return cases


def normal_form_cases(rng):
    cases = []
    for q, k, n in [(2, 6, 24), (3, 5, 16), (4, 4, 14)]:
        F = field_make(q)
        for _ in range(20):
            cases.append((F, rng.integers(0, q, size=(k, n)).astype(np.uint8)))
    return cases


def multiset_case():
    """Arguments of the candidate search below a ternary [25,3] 9-divisible node."""
    captured = {}
    real = augment.kernels.multiset_search

    def grab(*args):
        captured["args"] = args
        return real(*args)

    C = generate(RunContext(3, 25, 3, d_dual=2, divisor=9, mode="row")).codes[0]
    ctx = RunContext(3, 26, 4, d_dual=2, divisor=9, mode="row")
    ctx.constraints = validate(ctx).constraints
    augment.kernels.multiset_search = grab
    try:
        augment._row_candidates_multisets(augment._Node(C, canonicalize(C)), ctx, ctx.n - ctx.k)
    finally:
        augment.kernels.multiset_search = real
    return captured["args"]


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def bench(name, fn_by_backend, cases, repeat):
    results = {}
    for label, fn in fn_by_backend.items():
        results[label] = [fn(*c) for c in cases]
    ref = next(iter(results.values()))
    for label, out in results.items():
        if not all(_same(x, y) for x, y in zip(ref, out)):
            raise SystemExit(f"{name}: {label} backend disagrees with the reference")
    times = {}
    for label, fn in fn_by_backend.items():
        t = min(timeit.repeat(lambda: [fn(*c) for c in cases], number=1, repeat=repeat))
        times[label] = t
    base = times["python"]
    cells = "  ".join(f"{lab}={t * 1e3:9.2f} ms (x{base / t:5.1f})" for lab, t in times.items())
    print(f"{name:<16} {cells}")


def end_to_end(repeat):
    cmd = [sys.executable, "-m", "canaug.cli", "classify", "--q", "3", "--n", "14",
           "--k", "5", "--dmin", "6", "--dual-min", "2", "--so", "euclidean", "--mode", "row"]
    times = {}
    for label, env_extra in [("python", {"CANAUG_PURE_PYTHON": "1"}), ("compiled", {})]:
        if label not in backends():
            continue
        env = {k: v for k, v in os.environ.items() if k != "CANAUG_PURE_PYTHON"}
        env.update(env_extra)
        best = float("inf")
        for _ in range(repeat):
            t = time.perf_counter()
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            best = min(best, time.perf_counter() - t)
        times[label] = best
    base = times["python"]
    cells = "  ".join(f"{lab}={t:9.2f} s  (x{base / t:5.1f})" for lab, t in times.items())
    print(f"{'classify [14,5]3':<16} {cells}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    mods = backends()
    if "compiled" not in mods:
        print("compiled extension not built; only the python backend is available")
    rng = np.random.default_rng(1)
    bench("refine", {k: m.refine for k, m in mods.items()}, refine_cases(rng), args.repeat)
    bench("normal_form", {k: m.normal_form for k, m in mods.items()},
          normal_form_cases(rng), args.repeat)
    bench("multiset_search", {k: m.multiset_search for k, m in mods.items()},
          [multiset_case()], args.repeat)
    end_to_end(min(args.repeat, 2))


if __name__ == "__main__":
    main()
