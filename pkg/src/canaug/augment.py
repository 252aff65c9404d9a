"""Exhaustive generation of inequivalent codes by canonical augmentation.

Column mode grows ``(I_k | A)`` one column at a time; row mode grows
``(A | I_s)`` one row at a time, each new row being ``(a | 0 | 1)``.  A child
is kept only if the coordinate just added lies in its special orbit.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement, product

import numpy as np

from . import kernels
from .canon import CanonicalResult, canonicalize, parent_test, quick_parent_test
from .code import LinearCode, all_vectors, dual_distance_at_least, rref
from .constraints import (ConstraintSet, ValidationError, distance_schedule, dual_schedule,
                          validate)
from .gf import FieldSpec, field_make, matmul
from .symmetry import vector_orbit_reps

log = logging.getLogger(__name__)

__all__ = ["RunContext", "RunStats", "RunResult", "generate", "distance_schedule",
           "dual_schedule", "children_column", "children_row"]

# row mode enumerates F_q^(n-k) directly up to this size, else uses class multisets
ROW_ORBIT_LIMIT = 1 << 12
_CHUNK = 1 << 22


@dataclass
class RunStats:
    nodes: int = 0
    children: int = 0
    passes: int = 0
    failures: int = 0
    canon_calls: int = 0
    quick_decisions: int = 0
    duplicates: int = 0
    level_counts: dict = dc_field(default_factory=dict)

    def merge(self, other: "RunStats") -> None:
        for name in ("nodes", "children", "passes", "failures", "canon_calls",
                     "quick_decisions", "duplicates"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for lvl, c in other.level_counts.items():
            self.level_counts[lvl] = self.level_counts.get(lvl, 0) + c

    def count_level(self, level: int) -> None:
        self.level_counts[level] = self.level_counts.get(level, 0) + 1

    def lines(self) -> list[str]:
        out = [f"nodes expanded: {self.nodes}", f"children generated: {self.children}",
               f"parent test passes: {self.passes}", f"parent test failures: {self.failures}",
               f"canonical forms computed: {self.canon_calls}",
               f"decided by invariants: {self.quick_decisions}"]
        if self.duplicates:
            out.append(f"sibling duplicates removed: {self.duplicates}")
        out += [f"level {lvl}: {c}" for lvl, c in sorted(self.level_counts.items())]
        return out


@dataclass
class RunContext:
    field: FieldSpec
    n: int
    k: int
    d: int = 1
    d_dual: int = 1
    mode: str = "column"
    so: str = "none"
    divisor: int | None = None
    seeds: list[LinearCode] | None = None
    jobs: int = 1
    row_candidates: str = "auto"   # auto | orbits | multisets
    constraints: ConstraintSet | None = None
    warnings: list[str] = dc_field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.field, int):
            self.field = field_make(self.field)

    @property
    def q(self) -> int:
        return self.field.q

    def level_of(self, C: LinearCode) -> int:
        return C.n - self.k if self.mode == "column" else C.k

    @property
    def last_level(self) -> int:
        return self.n - self.k if self.mode == "column" else self.k

    def params(self) -> dict:
        return dict(field=self.q, n=self.n, k=self.k, d=self.d, d_dual=self.d_dual,
                    mode=self.mode, so=self.so, divisor=self.divisor,
                    row_candidates=self.row_candidates)


@dataclass
class RunResult:
    codes: list[LinearCode]
    stats: RunStats
    warnings: list[str]

    @property
    def count(self) -> int:
        return len(self.codes)


@dataclass
class _Node:
    code: LinearCode
    canon: CanonicalResult


# ---------------------------------------------------------------------------
# column mode

def children_column(node: _Node, ctx: RunContext, stats: RunStats | None = None):
    """Children ``(G | a^T)`` for one representative a per orbit on F_q^k."""
    C = node.code
    F = ctx.field
    G = np.asarray(C.gen, dtype=np.uint8)
    orbits = vector_orbit_reps(node.canon.aut.gens, G, "column", q=F.q)
    reps = orbits.reps
    if ctx.d_dual >= 2:
        reps = reps[reps.any(axis=1)]
    if not len(reps):
        return []
    n1 = C.n + 1
    dnext = max(1, ctx.constraints.d_eff - (ctx.n - n1))
    if C.k:
        contrib = matmul(F, C.messages, reps.T) != 0
        minw = (C.weights[1:, None] + contrib[1:]).min(axis=0)
        reps = reps[minw >= dnext]
    final = n1 == ctx.n
    cs = ctx.constraints
    out = []
    for a in reps:
        child = LinearCode(F, np.concatenate([G, a[:, None]], axis=1), n1)
        if not dual_distance_at_least(child, ctx.d_dual):
            continue
        if final:
            if not cs.check_final(child, skip=("min_distance", "dual_distance")):
                continue
        elif not cs.check_step(child, "column", skip=("min_distance", "dual_distance")):
            continue
        out.append((child, a))
    if stats is not None:
        stats.children += len(out)
    return out


# ---------------------------------------------------------------------------
# row mode

def _row_child(F: FieldSpec, G: np.ndarray, a: np.ndarray) -> LinearCode:
    s, length = G.shape
    r = len(a)
    M = np.zeros((s + 1, length + 1), dtype=np.uint8)
    M[:s, :length] = G
    M[s, :r] = a
    M[s, length] = 1
    return LinearCode(F, M, length + 1)


def _so_vector_ok(F: FieldSpec, A: np.ndarray, V: np.ndarray, form: str) -> np.ndarray:
    """Mask of candidate rows a (as rows of V) keeping (A | I | 0), (a | 0 | 1) self-orthogonal."""
    conjA = F.conj[A] if form == "hermitian" else A
    ok = np.ones(len(V), dtype=bool)
    if len(A):
        ok &= ~matmul(F, V, conjA.T).any(axis=1)
    wt = np.count_nonzero(V, axis=1)
    ok &= (wt + 1) % F.p == 0
    return ok


def _row_candidates_orbits(node: _Node, ctx: RunContext, r: int) -> np.ndarray:
    F = ctx.field
    C = node.code
    A = np.asarray(C.gen[:, :r], dtype=np.uint8)
    orbits = vector_orbit_reps(node.canon.aut.gens, C.gen, "row", q=F.q)
    V = F.neg[orbits.reps]
    form = ctx.constraints.so_form
    if form is not None:
        V = V[_so_vector_ok(F, A, V, form)]
    d = ctx.constraints.d_eff
    if d > 1 and len(V):
        X = all_vectors(F.q, C.k)
        XA = matmul(F, X, A) if C.k else np.zeros((1, r), np.uint8)
        wx = np.count_nonzero(X, axis=1)
        keep = np.ones(len(V), dtype=bool)
        step = max(1, _CHUNK // max(1, len(X) * r))
        for lo in range(0, len(V), step):
            blk = V[lo:lo + step]
            w = np.count_nonzero(F.add[XA[:, None, :], blk[None, :, :]], axis=2)
            keep[lo:lo + step] = ((w + wx[:, None] + 1) >= d).all(axis=0)
        V = V[keep]
    return V


def _row_candidates_multisets(node: _Node, ctx: RunContext, r: int) -> list[np.ndarray]:
    """One extension vector per choice of value multiset on each class of equal A-columns.

    Within a class of proportional columns of A, permuting the normalised
    entries of a is induced by an automorphism, so only multisets matter;
    on zero columns of A only the number of nonzero entries matters.
    Candidate a coincides with -xA at a coordinate of class g exactly when
    its normalised entry equals -x.g, which gives the weight of every new
    codeword from per-class value counts.
    """
    F = ctx.field
    q = F.q
    C = node.code
    s = C.k
    A = np.asarray(C.gen[:, :r], dtype=np.uint8)
    X = all_vectors(q, s)
    wx = np.count_nonzero(X, axis=1)
    form = ctx.constraints.so_form

    zeros: list[int] = []
    keys: dict[bytes, int] = {}
    reps: list[np.ndarray] = []
    members: list[list[int]] = []
    nus: list[list[int]] = []
    for t in range(r):
        col = A[:, t]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            zeros.append(t)
            continue
        lead = int(col[nz[0]])
        g = F.mul[F.inv[lead], col]
        j = keys.setdefault(g.tobytes(), len(reps))
        if j == len(reps):
            reps.append(g)
            members.append([])
            nus.append([])
        members[j].append(t)
        nus[j].append(lead)
    h = [F.conj[g] if form == "hermitian" else g for g in reps]

    # classes whose value sums are forced by orthogonality: independent, taken from the end
    forced: list[int] = []
    if form is not None and s:
        basis = np.zeros((0, s), dtype=np.uint8)
        for j in range(len(reps) - 1, -1, -1):
            trial = np.concatenate([basis, h[j][None, :]])
            if len(rref(F, trial)[1]) > len(basis):
                basis = trial
                forced.append(j)
            if len(basis) == s:
                break
        forced.sort()
    order = [j for j in range(len(reps)) if j not in forced] + forced

    opt_match, opt_wt, opt_vec, opt_total, payload = [], [], [], [], []
    pos_start = [0]
    # position 0: how many zero columns of A get a nonzero entry
    wz_choices = [len(zeros)] if dual_schedule(ctx.k, ctx.d_dual, s + 1) >= 2 \
        else range(len(zeros), -1, -1)
    for wz in wz_choices:
        opt_match.append(np.full(len(X), len(zeros) - wz, dtype=np.int64))
        opt_wt.append(wz)
        opt_vec.append(np.zeros(s, dtype=np.uint8))
        opt_total.append(0)
        payload.append(wz)
    pos_start.append(len(payload))
    for j in order:
        y = F.neg[matmul(F, X, reps[j][:, None])[:, 0]]
        ind = np.stack([(y == b) for b in range(q)]).astype(np.int64)
        for M in combinations_with_replacement(range(q), len(members[j])):
            cnt = np.bincount(M, minlength=q)
            total = 0
            for v in M:
                total = F.add_(total, v)
            opt_match.append(cnt @ ind)
            opt_wt.append(len(M) - int(cnt[0]))
            opt_vec.append(F.mul[total, h[j]] if form is not None else np.zeros(s, np.uint8))
            opt_total.append(total)
            payload.append(M)
        pos_start.append(len(payload))

    n_forced = len(forced)
    forced_need = np.full((q ** s if n_forced else 1, max(1, n_forced)), -1, dtype=np.int64)
    if n_forced:
        digits = q ** np.arange(s - 1, -1, -1, dtype=np.int64)
        for sums in product(range(q), repeat=n_forced):
            acc = np.zeros(s, dtype=np.uint8)
            for j, v in zip(forced, sums):
                acc = F.add[acc, F.mul[v, h[j]]]
            # residual acc of the free classes is cancelled by these sums
            forced_need[int(F.neg[acc].astype(np.int64) @ digits)] = sums

    leaves = kernels.multiset_search(
        ctx.constraints.d_eff, r + 1 + wx, np.array(opt_match, dtype=np.int64),
        np.array(opt_wt, dtype=np.int64), np.array(opt_vec, dtype=np.uint8).reshape(len(opt_vec), s),
        np.array(opt_total, dtype=np.int64), np.array(pos_start, dtype=np.int64),
        1 + len(order) - n_forced, forced_need, F.add, q, F.p, form is not None,
        ctx.divisor or 0)
    out = []
    for leaf in leaves.tolist():
        a = np.zeros(r, dtype=np.uint8)
        for t in zeros[:payload[leaf[0]]]:
            a[t] = 1
        for j, o in zip(order, leaf[1:]):
            for t, nu, b in zip(members[j], nus[j], payload[o]):
                a[t] = F.mul_(nu, b)
        out.append(a)
    return out


def row_strategy(ctx: RunContext) -> str:
    if ctx.row_candidates == "auto":
        return "orbits" if ctx.q ** (ctx.n - ctx.k) <= ROW_ORBIT_LIMIT else "multisets"
    return ctx.row_candidates


def children_row(node: _Node, ctx: RunContext, stats: RunStats | None = None):
    """Children ``((A; a) | I_{s+1})`` of a row-mode node ``(A | I_s)``.

    With the multiset candidate strategy several children may be
    equivalent; the caller removes duplicates among those passing the
    parent test.
    """
    C = node.code
    F = ctx.field
    r = ctx.n - ctx.k
    strategy = row_strategy(ctx)
    if strategy == "orbits":
        cands = list(_row_candidates_orbits(node, ctx, r))
    elif strategy == "multisets":
        cands = _row_candidates_multisets(node, ctx, r)
    else:
        raise ValueError(f"unknown row candidate strategy {strategy!r}")
    s1 = C.k + 1
    final = s1 == ctx.k
    dual_need = dual_schedule(ctx.k, ctx.d_dual, s1) if ctx.k else 1
    cs = ctx.constraints
    G = np.asarray(C.gen, dtype=np.uint8)
    out = []
    for a in cands:
        child = _row_child(F, G, a)
        if not dual_distance_at_least(child, dual_need):
            continue
        if final:
            if not cs.check_final(child):
                continue
        elif not cs.check_step(child, "row"):
            continue
        out.append((child, a))
    if stats is not None:
        stats.children += len(out)
    return out


# ---------------------------------------------------------------------------
# recursion

def _canon(C: LinearCode, stats: RunStats) -> CanonicalResult:
    stats.canon_calls += 1
    return canonicalize(C)


def _expand(node: _Node, ctx: RunContext, stats: RunStats):
    """Children of ``node`` that pass the parent test, as (code, canon-or-None)."""
    stats.nodes += 1
    if ctx.mode == "column":
        kids, dedupe = children_column(node, ctx, stats), False
    else:
        kids, dedupe = children_row(node, ctx, stats), row_strategy(ctx) == "multisets"
    final = ctx.level_of(node.code) + 1 == ctx.last_level
    seen = set()
    out = []
    for child, _ in kids:
        added = child.n - 1
        qv = quick_parent_test(child, added, ctx.mode)
        res = None
        if qv.verdict is not None:
            stats.quick_decisions += 1
        if qv.verdict is False:
            stats.failures += 1
            continue
        if qv.verdict is None or not final or dedupe:
            res = _canon(child, stats)
            if not parent_test(res, added, ctx.mode):
                stats.failures += 1
                continue
        stats.passes += 1
        if dedupe:
            if res.key in seen:
                stats.duplicates += 1
                continue
            seen.add(res.key)
        out.append((child, res))
    return out


def _descend(node: _Node, ctx: RunContext, stats: RunStats, sink: list) -> None:
    stats.count_level(ctx.level_of(node.code))
    if ctx.level_of(node.code) == ctx.last_level:
        sink.append(node.code)
        return
    for child, res in _expand(node, ctx, stats):
        if ctx.level_of(child) == ctx.last_level:
            stats.count_level(ctx.last_level)
            sink.append(child)
        else:
            _descend(_Node(child, res), ctx, stats, sink)


def _root_codes(ctx: RunContext) -> list[LinearCode]:
    F = ctx.field
    if ctx.seeds:
        roots, keys = [], set()
        for S in ctx.seeds:
            R, piv = rref(F, S.gen)
            if ctx.mode == "column":
                rest = [j for j in range(S.n) if j not in set(piv)]
                G = R[:, list(piv) + rest]
            else:
                rest = [j for j in range(S.n) if j not in set(piv)]
                G = R[:, rest + list(piv)]
            C = LinearCode(F, G, S.n)
            key = canonicalize(C).key
            if key in keys:
                msg = f"duplicate seed [{S.n},{S.k}] ignored"
                log.warning(msg)
                ctx.warnings.append(msg)
                continue
            keys.add(key)
            roots.append(C)
        return roots
    if ctx.mode == "column":
        return [LinearCode(F, np.eye(ctx.k, dtype=np.uint8), ctx.k)]
    return [LinearCode(F, np.zeros((0, ctx.n - ctx.k), dtype=np.uint8), ctx.n - ctx.k)]


def _root_ok(C: LinearCode, ctx: RunContext) -> bool:
    cs = ctx.constraints
    if ctx.level_of(C) == ctx.last_level:
        return cs.check_final(C)
    return cs.check_step(C, ctx.mode)


def _context_from_params(params: dict) -> RunContext:
    ctx = RunContext(**params)
    ctx.constraints = validate(ctx).constraints
    return ctx


def _run_subtree(args):
    params, gen, n_cols = args
    ctx = _context_from_params(params)
    C = LinearCode(ctx.field, gen, n_cols)
    stats = RunStats()
    sink: list[LinearCode] = []
    _descend(_Node(C, canonicalize(C)), ctx, stats, sink)
    stats.canon_calls += 1
    return [c.gen for c in sink], stats


def _frontier(roots: list[_Node], ctx: RunContext, stats: RunStats, sink: list, want: int):
    """Expand breadth-first until there are at least ``want`` open nodes."""
    frontier = roots
    while frontier and len(frontier) < want:
        nxt = []
        for node in frontier:
            stats.count_level(ctx.level_of(node.code))
            if ctx.level_of(node.code) == ctx.last_level:
                sink.append(node.code)
                continue
            for child, res in _expand(node, ctx, stats):
                if ctx.level_of(child) == ctx.last_level:
                    stats.count_level(ctx.last_level)
                    sink.append(child)
                else:
                    nxt.append(_Node(child, res))
        frontier = nxt
    return frontier


def generate(ctx: RunContext) -> RunResult:
    """Classify all inequivalent codes described by ``ctx``.

    Codes are returned sorted by generator matrix; the set does not depend
    on ``ctx.jobs``.
    """
    if ctx.mode not in ("column", "row"):
        raise ValidationError(f"mode must be 'column' or 'row', not {ctx.mode!r}")
    report = validate(ctx)
    ctx.constraints = report.constraints
    ctx.warnings.extend(report.warnings)
    stats = RunStats()
    sink: list[LinearCode] = []
    roots = []
    for C in _root_codes(ctx):
        if _root_ok(C, ctx):
            stats.canon_calls += 1
            roots.append(_Node(C, canonicalize(C)))
    jobs = ctx.jobs if ctx.jobs and ctx.jobs > 0 else (os.cpu_count() or 1)
    if jobs <= 1:
        for node in roots:
            _descend(node, ctx, stats, sink)
    else:
        open_nodes = _frontier(roots, ctx, stats, sink, 4 * jobs)
        tasks = [(ctx.params(), node.code.gen, node.code.n) for node in open_nodes]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for gens, sub in pool.map(_run_subtree, tasks):
                stats.merge(sub)
                sink.extend(LinearCode(ctx.field, g, g.shape[1]) for g in gens)
    sink.sort(key=lambda C: C.gen.tobytes())
    return RunResult(sink, stats, ctx.warnings)
