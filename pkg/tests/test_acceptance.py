"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Counts are compared exactly.  The whole file takes tens of minutes on one core.
"""

import logging
import time

import numpy as np
import pytest

from canaug.augment import RunContext, generate
from canaug.canon import canonicalize
from canaug.code import LinearCode, rref
from canaug.oracle import Requirements, classify_exhaustive, equivalent_bruteforce
from canaug.symmetry import map_apply_code

import conftest
from conftest import random_code, random_map
from tree_checks import (equivalent_parents_share_children, equivalent_passers_share_parent,
                          induced_action_failures, orbit_table_failures,
                          orbit_vectors_equivalent, walk)

pytestmark = pytest.mark.acceptance

SO_TERNARY = {10: [1], 11: [1, 1], 12: [6, 2, 1], 13: [10, 4, 1], 14: [27, 15, 4],
          15: [78, 73, 20, 2], 16: [181, 312, 121, 11, 1]}
HERMITIAN_QUATERNARY = {15: {2: 1}, 16: {2: 2, 3: 1}, 17: {2: 3, 3: 4, 4: 1}, 18: {3: 45, 4: 12}}
DIV9_TERNARY = {12: {2: 1}, 13: {3: 1}, 18: {2: 1}, 21: {2: 1, 3: 1}, 22: {3: 1, 4: 1},
          24: {2: 1, 3: 1, 4: 1}, 25: {3: 1, 4: 1, 5: 1}, 26: {3: 1, 4: 1, 5: 1, 6: 1},
          27: {2: 2, 3: 3, 4: 3, 5: 1}}
DIV4_QUATERNARY = {5: {2: 1}, 8: {2: 1}, 9: {2: 1, 3: 1}, 10: {2: 1, 3: 1, 4: 1}, 12: {2: 2, 3: 2},
          13: {2: 2, 3: 3, 4: 1}, 14: {2: 1, 3: 5, 4: 3, 5: 1}, 15: {2: 1, 3: 3, 4: 6, 5: 2, 6: 1}}


def table_runs():
    runs = {1: [], 2: [], 3: [], 4: []}
    for n, counts in SO_TERNARY.items():
        for i, c in enumerate(counts):
            runs[1].append((dict(field=3, n=n, k=4 + i, d=6, d_dual=2, so="euclidean",
                                 mode="row"), c))
    for n, row in HERMITIAN_QUATERNARY.items():
        for k, c in row.items():
            runs[2].append((dict(field=4, n=n, k=k, d=12, d_dual=2, so="hermitian",
                                 mode="row"), c))
    for n, row in DIV9_TERNARY.items():
        for k, c in row.items():
            runs[3].append((dict(field=3, n=n, k=k, d_dual=2, divisor=9, mode="row"), c))
    for n, row in DIV4_QUATERNARY.items():
        for k, c in row.items():
            runs[4].append((dict(field=4, n=n, k=k, d_dual=2, divisor=4, mode="row"), c))
    return runs


TABLE_RUNS = table_runs()
TITLES = {
    1: "ternary self-orthogonal d>=6, n=10..16",
    2: "quaternary Hermitian self-orthogonal d=12, n=15..18",
    3: "ternary 9-divisible, n<=27",
    4: "quaternary 4-divisible, n<=15",
    5: "binary self-orthogonal [27,k,>=8], k=2,3",
    6: "even binary [18,4,>=4] and [20,3,>=6]",
    7: "doubly even [32,4,>=4]",
    8: "unique optimal [13,8,4] and [17,8,6]",
    9: "generate against exhaustive oracle on all small boxes",
    10: "canonical map invariance and oracle agreement",
    11: "augmentation tree and induced action checks",
    12: "--jobs 4 against --jobs 1 on criteria 1-4",
}
# code sets of the criteria 1-4 runs at jobs=1, reused by criterion 12
_SETS: dict = {}


@pytest.fixture(autouse=True)
def quiet():
    logging.disable(logging.WARNING)
    yield
    logging.disable(logging.NOTSET)


def report(num, failures, detail, t0):
    ok = not failures
    text = f"{TITLES[num]} ({detail}, {time.time() - t0:.0f}s)"
    if failures:
        text += f"; failures: {failures[:5]}"
    conftest.ACCEPTANCE[num] = (ok, text)
    print(f"criterion {num} {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, text


def label(params):
    return f"[{params['n']},{params['k']}]_{params['field']}"


def check_counts(num, runs, keep=False):
    failures = []
    t0 = time.time()
    for params, expected in runs:
        res = generate(RunContext(**params))
        if keep:
            _SETS[tuple(sorted(params.items()))] = {canonicalize(C).key for C in res.codes}
        if res.count != expected:
            failures.append(f"{label(params)} expected {expected} got {res.count}")
    report(num, failures, f"{len(runs)} run" + ("s" if len(runs) > 1 else ""), t0)


@pytest.mark.parametrize("num", [1, 2, 3, 4])
def test_tables(num):
    check_counts(num, TABLE_RUNS[num], keep=True)


def test_criterion_5():
    check_counts(5, [(dict(field=2, n=27, k=2, d=8, so="euclidean", mode="row"), 59),
                     (dict(field=2, n=27, k=3, d=8, so="euclidean", mode="row"), 445)])


def test_criterion_6():
    check_counts(6, [(dict(field=2, n=18, k=4, d=4, divisor=2, mode="row"), 4923),
                     (dict(field=2, n=20, k=3, d=6, divisor=2, mode="row"), 516)])


def test_criterion_7():
    check_counts(7, [(dict(field=2, n=32, k=4, d=4, d_dual=2, divisor=4, mode="row"), 2163)])


def test_criterion_8():
    check_counts(8, [(dict(field=2, n=13, k=8, d=4, d_dual=2, mode="row"), 1),
                     (dict(field=2, n=17, k=8, d=6, d_dual=2, mode="row"), 1)])


def oracle_boxes():
    for q, n_max, k_max in ((2, 7, 3), (3, 5, 2)):
        for n in range(1, n_max + 1):
            for k in range(1, min(k_max, n) + 1):
                for d in range(1, n - k + 2):
                    for dd in range(1, k + 2 if k < n else 2):
                        yield q, n, k, d, dd


def test_criterion_9():
    t0 = time.time()
    failures = []
    runs = 0
    for q, n, k, d, dd in oracle_boxes():
        expected = classify_exhaustive(q, n, k, Requirements(d, dd)).count
        for mode, cand in (("column", "auto"), ("row", "orbits"), ("row", "multisets")):
            runs += 1
            got = generate(RunContext(q, n, k, d, dd, mode, row_candidates=cand)).count
            if got != expected:
                failures.append(f"q={q} n={n} k={k} d={d} dd={dd} {mode}/{cand}: "
                                f"{got} != {expected}")
    report(9, failures, f"{runs} runs in column and both row strategies", t0)


def small_code(rng):
    q = int(rng.choice([2, 3, 4]))
    n = int(rng.integers(2, 8 if q == 2 else 6))
    k = int(rng.integers(1, n))
    return random_code(rng, q, k, n)


def test_criterion_10():
    t0 = time.time()
    rng = np.random.default_rng(1010)
    failures = []
    n_codes, n_maps = 500, 100
    for i in range(n_codes):
        C = small_code(rng)
        res = canonicalize(C)
        for _ in range(n_maps):
            image = map_apply_code(random_map(rng, C.q, C.n), C)
            if canonicalize(image).rho != res.rho:
                failures.append(f"code {i}: map image has another canonical form")
                break
        # agreement against the oracle on one equivalent and one random partner
        partners = [map_apply_code(random_map(rng, C.q, C.n), C),
                    random_code(rng, C.q, C.k, C.n)]
        for Y in partners:
            same = canonicalize(Y).rho == res.rho
            if same != equivalent_bruteforce(C, Y):
                failures.append(f"code {i}: canonical agreement {same} disagrees with oracle")
    report(10, failures, f"{n_codes} codes x {n_maps} maps, {2 * n_codes} oracle pairs", t0)


TREE_CORPUS = [
    dict(field=2, n=7, k=3),
    dict(field=2, n=7, k=3, d_dual=2),
    dict(field=2, n=8, k=3, d=3),
    dict(field=3, n=5, k=2),
    dict(field=3, n=6, k=2, d_dual=2),
    dict(field=4, n=5, k=2),
    dict(field=2, n=7, k=3, mode="row"),
    dict(field=2, n=8, k=4, d=2, so="euclidean", mode="row"),
    dict(field=3, n=5, k=2, d_dual=2, mode="row"),
    dict(field=3, n=6, k=3, mode="row", row_candidates="multisets"),
    dict(field=4, n=5, k=2, mode="row"),
]


def test_criterion_11():
    t0 = time.time()
    rng = np.random.default_rng(1111)
    failures = []
    for params in TREE_CORPUS:
        ctx = RunContext(**params)
        pairs = walk(ctx)
        name = label(params) + params.get("mode", "column")
        for check, args in ((equivalent_passers_share_parent, ()),
                            (equivalent_parents_share_children, (rng,)),
                            (orbit_vectors_equivalent, ())):
            bad = check(ctx, *args, pairs=pairs)
            if bad:
                failures.append(f"{name} {check.__name__}: {len(bad)}")
    for i in range(300):
        C = small_code(rng)
        if induced_action_failures(C):
            failures.append(f"random code {i}: induced action")
        sides = ("column", "row") if C.k < C.n else ("column",)
        for side in sides:
            D = C
            if side == "row":
                # row side works on the (A | I_k) form
                R, piv = rref(C.field, C.gen)
                rest = [j for j in range(C.n) if j not in piv]
                D = LinearCode(C.field, R[:, rest + list(piv)], C.n)
            if orbit_table_failures(D, side):
                failures.append(f"random code {i}: {side} orbit table")
    report(11, failures, f"{len(TREE_CORPUS)} runs, 300 random codes", t0)


def test_criterion_12():
    t0 = time.time()
    failures = []
    for num in (1, 2, 3, 4):
        for params, _ in TABLE_RUNS[num]:
            key = tuple(sorted(params.items()))
            if key not in _SETS:
                _SETS[key] = {canonicalize(C).key for C in generate(RunContext(**params)).codes}
            par = generate(RunContext(**params, jobs=4))
            if {canonicalize(C).key for C in par.codes} != _SETS[key]:
                failures.append(f"criterion {num} {label(params)}")
    report(12, failures, f"{sum(len(TABLE_RUNS[i]) for i in (1, 2, 3, 4))} runs", t0)
