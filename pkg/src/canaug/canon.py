"""Canonical forms, automorphism groups and the parent test.

The canonical form is computed on the *reduced* code: one column per
projective class of nonzero columns, coloured by its multiplicity.  Zero
columns and repeated columns are re-attached afterwards together with the
automorphisms they contribute.  The reduced code is canonised by
individualisation and refinement over the incidence structure between
coordinates and projective codewords; leaves are compared by the refinement
trace followed by a scaling-normalised reduced echelon form.
"""

from __future__ import annotations

from functools import lru_cache
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .code import LinearCode, all_vectors, dual, rref
from .gf import FieldSpec, matmul
from .symmetry import (AutGenerators, SemimonomialMap, coordinate_orbits, dualize_aut,
                       map_compose, map_invert)

COLUMN, ROW = "column", "row"


# ---------------------------------------------------------------------------
# reduced representation

@dataclass
class Reduced:
    code: LinearCode
    R: np.ndarray             # k x m, normalised class representatives
    classes: list[list[int]]  # full coordinates of each class, ascending
    nu: list[int]             # column t = nu[t] * R[:, class_of[t]]
    class_of: list[int]       # -1 for zero columns
    zeros: list[int]
    mult: np.ndarray
    coloop: np.ndarray        # reduced coordinate spans a weight-1 word of the reduced code
    incidence: np.ndarray     # projective codewords x m, 0/1
    word_weight: np.ndarray

    @property
    def m(self) -> int:
        return self.R.shape[1]

    @property
    def o_a(self) -> list[int]:
        return list(self.zeros)

    @property
    def o_b(self) -> list[int]:
        return [self.classes[j][0] for j in range(self.m)
                if self.coloop[j] and self.mult[j] == 1]


@lru_cache(maxsize=None)
def _projective_messages(q: int, k: int) -> np.ndarray:
    """Messages whose first nonzero entry is 1, in lexicographic order."""
    msgs = all_vectors(q, k)
    lead = np.argmax(msgs != 0, axis=1)
    out = msgs[msgs[np.arange(len(msgs)), lead] == 1]
    out.setflags(write=False)
    return out


def reduce_code(C: LinearCode) -> Reduced:
    F = C.field
    G = C.reduced
    k, n = G.shape
    nzmask = G.any(axis=0)
    zeros = np.flatnonzero(~nzmask).tolist()
    cols = np.flatnonzero(nzmask)
    class_of = [-1] * n
    nu = [0] * n
    if cols.size:
        Gc = G[:, cols]
        lead = Gc[np.argmax(Gc != 0, axis=0), np.arange(cols.size)]
        normed = F.mul[F.inv[lead][None, :], Gc]
        # classes numbered by first occurrence
        flat = np.ascontiguousarray(normed.T).tobytes()
        keys: dict[bytes, int] = {}
        classes: list[list[int]] = []
        reps: list[int] = []
        for i, (t, a) in enumerate(zip(cols.tolist(), lead.tolist())):
            j = keys.setdefault(flat[i * k:(i + 1) * k], len(classes))
            if j == len(classes):
                classes.append([])
                reps.append(i)
            classes[j].append(t)
            class_of[t] = j
            nu[t] = a
        R = np.ascontiguousarray(normed[:, reps])
        m = len(classes)
    else:
        R = np.zeros((k, 0), np.uint8)
        classes = []
        m = 0
    mult = np.array([len(c) for c in classes], dtype=np.int64)
    coloop = np.zeros(m, dtype=bool)
    if m:
        RR, piv = rref(F, R)
        nonpiv = [j for j in range(m) if j not in set(piv)]
        for i, p in enumerate(piv):
            if not nonpiv or not RR[i, nonpiv].any():
                coloop[p] = True
    if k and m:
        inc = (matmul(F, _projective_messages(F.q, k), R) != 0).astype(np.int32)
    else:
        inc = np.zeros((0, m), dtype=np.int32)
    return Reduced(C, R, classes, nu, class_of, zeros, mult, coloop, inc,
                   inc @ mult if m else np.zeros(inc.shape[0], np.int64))


def _cached(C: LinearCode, name: str, make):
    # codes are immutable, so derived canonical data can live on the instance
    val = C.__dict__.get(name)
    if val is None:
        val = C.__dict__[name] = make(C)
    return val


def _dual_of(C: LinearCode) -> LinearCode:
    return _cached(C, "_canon_dual", dual)


def _reduction(C: LinearCode) -> Reduced:
    return _cached(C, "_canon_reduced", reduce_code)


def _root_refinement(C: LinearCode):
    """Refined colours (coordinates, words) and trace of the root partition."""
    def make(C):
        red = _reduction(C)
        cc, wc = initial_colours(red)
        return refine(red.incidence, cc, wc)
    return _cached(C, "_canon_root", make)


# ---------------------------------------------------------------------------
# colour refinement

def _ranks(values) -> np.ndarray:
    _, inv = np.unique(values, return_inverse=True)
    return inv.ravel().astype(np.int64)


def initial_colours(red: Reduced) -> tuple[np.ndarray, np.ndarray]:
    # repeated columns first
    cc = _ranks(-2 * red.mult + red.coloop.astype(np.int64)) if red.m else np.zeros(0, np.int64)
    wc = _ranks(red.word_weight) if len(red.word_weight) else np.zeros(0, np.int64)
    return cc, wc


def refine(inc: np.ndarray, cc: np.ndarray, wc: np.ndarray):
    """Equitable refinement; returns new colours and an invariant trace value."""
    return kernels.refine(inc, cc, wc)


def individualise(cc: np.ndarray, v: int) -> np.ndarray:
    """Split v off the front of its cell; cc must be dense ranks."""
    c = cc[v]
    out = cc + (cc >= c)
    out[v] = c
    return out


# ---------------------------------------------------------------------------
# leaf certificate

def normal_form(F: FieldSpec, M: np.ndarray) -> tuple[bytes, list[int]]:
    """Canonical representative of the row space of M under column scaling.

    Returns the normalised reduced echelon form as bytes and the column
    scalars D with ``rref(M * diag(D))`` equal to it.
    """
    return kernels.normal_form(F, M)


@dataclass
class _Leaf:
    key: tuple
    lab: list[int]
    alpha: int
    D: list[int]
    path: list[int]

    def reduced_map(self, q: int, F: FieldSpec) -> SemimonomialMap:
        m = len(self.lab)
        perm = [0] * m
        for pos, src in enumerate(self.lab):
            perm[src] = pos
        back = F.inverse_automorphism(self.alpha)
        scal = tuple(F.apply_automorphism(d, back) for d in self.D)
        return SemimonomialMap(q, tuple(perm), scal, self.alpha)


class _Search:
    def __init__(self, red: Reduced):
        self.red = red
        self.F = red.code.field
        self.q = self.F.q
        self.inc = red.incidence
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None
        self.autos: list[SemimonomialMap] = []
        self.frobenius_kernel: SemimonomialMap | None = None
        self.nodes = 0
        self.root_cc = None

    def run(self, root):
        """Search below the already refined root partition ``root``."""
        self._node(*root[:2], [], [], root[2])

    def _cert(self, lab):
        R = self.red.R[:, lab]
        best = None
        for a in range(self.F.automorphism_count):
            M = self.F.frob[a][R] if a else R
            cert, D = normal_form(self.F, M)
            if best is None or cert < best[0]:
                best = (cert, D, a)
            elif cert == best[0] and self.first is None:
                alt = (cert, D, a)
                self._pending_frob = (best, alt)
        return best

    def _leaf(self, cc, path, traces):
        lab = np.argsort(cc, kind="stable").tolist()
        self._pending_frob = None
        cert, D, alpha = self._cert(lab)
        leaf = _Leaf((tuple(traces), cert), lab, alpha, D, list(path))
        F = self.F
        if self.first is None:
            self.first = self.best = leaf
            if self._pending_frob is not None:
                (c0, D0, a0), (c1, D1, a1) = self._pending_frob
                l0 = _Leaf(None, lab, a0, D0, path).reduced_map(self.q, F)
                l1 = _Leaf(None, lab, a1, D1, path).reduced_map(self.q, F)
                self.frobenius_kernel = map_compose(map_invert(l0), l1)
            return None
        for ref in (self.first, self.best):
            if leaf.key == ref.key:
                g = map_compose(map_invert(ref.reduced_map(self.q, F)),
                                leaf.reduced_map(self.q, F))
                self.autos.append(g)
                return _common_prefix(path, ref.path)
        if leaf.key < self.best.key:
            self.best = leaf
        return None

    def _orbit_roots(self, fixed):
        m = self.red.m
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.autos:
            p = g.perm
            if all(p[f] == f for f in fixed):
                for i in range(m):
                    a, b = find(i), find(p[i])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return find

    def _node(self, cc, wc, path, traces, tr=None):
        self.nodes += 1
        if tr is None:
            cc, wc, tr = refine(self.inc, cc, wc)
        if not path:
            self.root_cc = cc
        traces = traces + [tr]
        L = len(path)
        if self.best is not None:
            bt = self.best.key[0][:L + 1]
            ft = self.first.key[0][:L + 1]
            if tuple(traces) != ft and tuple(traces) > bt:
                return None
        m = self.red.m
        if m == 0 or cc.max() + 1 == m:
            return self._leaf(cc, path, traces)
        counts = np.bincount(cc)
        target = int(np.flatnonzero(counts > 1)[0])
        cell = np.flatnonzero(cc == target).tolist()
        done: list[int] = []
        find = None
        seen_autos = -1
        for v in cell:
            if done:
                if seen_autos != len(self.autos):
                    find = self._orbit_roots(path)
                    seen_autos = len(self.autos)
                fv = find(v)
                if any(find(w) == fv for w in done):
                    continue
            done.append(v)
            r = self._node(individualise(cc, v), wc, path + [v], traces)
            if r is not None and r < L:
                return r
        return None


def _common_prefix(a, b) -> int:
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    return i


def _diagonal_generators(F: FieldSpec, R: np.ndarray) -> list[list[int]]:
    """Connected components of the echelon-form support graph (column sets)."""
    m = R.shape[1]
    if m == 0 or F.q == 2:
        return []
    RR, piv = rref(F, R)
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, p in enumerate(piv):
        for j in np.flatnonzero(RR[i]).tolist():
            a, b = find(p), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps: dict[int, list[int]] = {}
    for j in range(m):
        comps.setdefault(find(j), []).append(j)
    return sorted(comps.values())


# ---------------------------------------------------------------------------
# results

@dataclass
class CanonicalResult:
    code: LinearCode
    rho: LinearCode
    phi: SemimonomialMap
    aut: AutGenerators
    orbits: list[list[int]]   # ordered by smallest canonical position
    o_a: list[int]
    o_b: list[int]
    key: tuple
    side: str = "primal"
    stats: dict = dc_field(default_factory=dict)

    @property
    def special(self):
        return special_orbit(self, COLUMN)

    def position(self, t: int) -> int:
        return self.phi.perm[t]


def _lift(red: Reduced, g: SemimonomialMap) -> SemimonomialMap:
    """Extend an automorphism of the reduced code to the full code."""
    F = red.code.field
    n = red.code.n
    perm = list(range(n))
    scal = [1] * n
    back = F.inverse_automorphism(g.auto)
    for j, members in enumerate(red.classes):
        tgt = red.classes[g.perm[j]]
        lam = g.scalars[g.perm[j]]
        for t, t2 in zip(members, tgt):
            perm[t] = t2
            scal[t2] = F.mul_(F.mul_(F.apply_automorphism(red.nu[t2], back), lam),
                              F.inv_(red.nu[t]))
    return SemimonomialMap(F.q, tuple(perm), tuple(scal), g.auto)


def _canonicalize_direct(C: LinearCode) -> CanonicalResult:
    F = C.field
    q = F.q
    red = _reduction(C)
    search = _Search(red)
    search.run(_root_refinement(C))
    n, m = C.n, red.m
    best = search.best
    lab = best.lab if best is not None else []
    phi_red = best.reduced_map(q, F) if best is not None else SemimonomialMap.identity(q, 0)

    # full canonical map: classes in canonical order, zero columns last
    perm = [0] * n
    scal = [1] * n
    pos = 0
    for rp in range(m):
        j = lab[rp]
        lam = phi_red.scalars[rp]
        for t in red.classes[j]:
            perm[t] = pos
            scal[pos] = F.mul_(lam, F.inv_(red.nu[t]))
            pos += 1
    for t in red.zeros:
        perm[t] = pos
        pos += 1
    phi = SemimonomialMap(q, tuple(perm), tuple(scal), phi_red.auto)

    if m:
        Nred = np.frombuffer(best.key[1], dtype=np.uint8).reshape(-1, m)
        cols = np.repeat(np.arange(m), red.mult[lab])
        gen = np.zeros((Nred.shape[0], n), dtype=np.uint8)
        gen[:, :len(cols)] = Nred[:, cols]
    else:
        gen = np.zeros((0, n), dtype=np.uint8)
    rho = LinearCode(F, gen, n)

    # automorphism generators of the full code
    gens: list[SemimonomialMap] = []
    red_gens = list(search.autos)
    if search.frobenius_kernel is not None:
        red_gens.append(search.frobenius_kernel)
    for comp in _diagonal_generators(F, red.R):
        s = [1] * m
        for j in comp:
            s[j] = F.primitive
        red_gens.append(SemimonomialMap(q, tuple(range(m)), tuple(s), 0))
    gens.extend(_lift(red, g) for g in red_gens)
    for members in red.classes:
        for a, b in zip(members, members[1:]):
            p = list(range(n))
            p[a], p[b] = b, a
            s = [1] * n
            s[b] = F.mul_(red.nu[b], F.inv_(red.nu[a]))
            s[a] = F.mul_(red.nu[a], F.inv_(red.nu[b]))
            gens.append(SemimonomialMap(q, tuple(p), tuple(s), 0))
    for a, b in zip(red.zeros, red.zeros[1:]):
        p = list(range(n))
        p[a], p[b] = b, a
        gens.append(SemimonomialMap.permutation(q, p))
    if red.zeros and F.primitive is not None:
        s = [1] * n
        s[red.zeros[0]] = F.primitive
        gens.append(SemimonomialMap(q, tuple(range(n)), tuple(s), 0))

    orbits = coordinate_orbits(gens, n)
    orbits.sort(key=lambda o: min(perm[t] for t in o))
    mults = tuple(red.mult[lab].tolist()) if m else ()
    key = (C.k, n, mults, len(red.zeros), best.key if best is not None else None)
    return CanonicalResult(C, rho, phi, AutGenerators(C, gens), orbits, red.o_a, red.o_b,
                           key, "primal", {"nodes": search.nodes})


def _transport_from_dual(C: LinearCode, res: CanonicalResult) -> CanonicalResult:
    return CanonicalResult(
        C, dual(res.rho), dualize_aut(res.phi),
        AutGenerators(C, [dualize_aut(g) for g in res.aut.gens]),
        res.orbits, res.o_b, res.o_a, ("dual",) + res.key, "dual", res.stats)


def _root_trace(C: LinearCode) -> int:
    return _root_refinement(C)[2]


def choose_side(C: LinearCode) -> str:
    """Side on which the dual-consistent canonical form is computed."""
    if 2 * C.k < C.n:
        return "primal"
    if 2 * C.k > C.n:
        return "dual"
    tp, td = _root_trace(C), _root_trace(_dual_of(C))
    if tp != td:
        return "primal" if tp < td else "dual"
    return "tie"


def canonicalize(C: LinearCode, dual_consistent: bool = True) -> CanonicalResult:
    """Canonical form of C under semimonomial equivalence.

    With ``dual_consistent`` the form is computed on whichever of C, C-perp
    has smaller dimension, so that rho(C-perp) = rho(C)-perp.
    """
    if not dual_consistent:
        return _canonicalize_direct(C)
    side = choose_side(C)
    if side == "primal":
        return _canonicalize_direct(C)
    D = _dual_of(C)
    if side == "dual":
        return _transport_from_dual(C, _canonicalize_direct(D))
    rp = _canonicalize_direct(C)
    rd = _canonicalize_direct(D)
    if rp.key[4] <= rd.key[4]:
        rp.key = ("tie",) + rp.key
        return rp
    out = _transport_from_dual(C, rd)
    out.key = ("tie",) + out.key
    return out


dual_consistent_canonicalize = canonicalize


def canonical_key(C: LinearCode) -> tuple:
    return canonicalize(C).key


# ---------------------------------------------------------------------------
# coordinate invariants, special orbit, parent test

@dataclass
class CoordinatePartition:
    labels: list[int]
    cells: list[list[int]]


def coordinate_invariant(C: LinearCode) -> CoordinatePartition:
    """Refinement colours of the coordinates; constant on automorphism orbits."""
    red = _reduction(C)
    cc = _root_refinement(C)[0]
    top = int(cc.max()) + 1 if red.m else 0
    labels = [top if j < 0 else int(cc[j]) for j in red.class_of]
    cells: dict[int, list[int]] = {}
    for t, lab in enumerate(labels):
        cells.setdefault(lab, []).append(t)
    return CoordinatePartition(labels, [cells[c] for c in sorted(cells)])


def special_orbit(result: CanonicalResult, mode: str = COLUMN):
    """The canonically first orbit eligible as the augmentation coordinate.

    Column mode gives the zero-coordinate orbit precedence, row mode the
    weight-one-support orbit; otherwise the first orbit in canonical order
    avoiding both.  Returns None when no orbit qualifies.
    """
    if mode not in (COLUMN, ROW):
        raise ValueError(f"mode must be 'column' or 'row', not {mode!r}")
    prec = result.o_a if mode == COLUMN else result.o_b
    if prec:
        return sorted(prec)
    excluded = set(result.o_a) | set(result.o_b)
    pos = result.phi.perm
    eligible = [t for t in range(result.code.n) if t not in excluded]
    if not eligible:
        return None
    first = min(eligible, key=lambda t: pos[t])
    for o in result.orbits:
        if first in o:
            return sorted(o)
    raise AssertionError("coordinate missing from orbit partition")


def parent_test(result: CanonicalResult, added: int, mode: str = COLUMN) -> bool:
    sigma = special_orbit(result, mode)
    return sigma is not None and added in sigma


@dataclass
class QuickVerdict:
    verdict: bool | None   # None: invariants inconclusive, canonicalise
    side: str


def quick_parent_test(C: LinearCode, added: int, mode: str = COLUMN) -> QuickVerdict:
    """Decide the parent test from root refinement alone when possible."""
    side = choose_side(C)
    if side == "tie":
        return QuickVerdict(None, side)
    X = C if side == "primal" else _dual_of(C)
    red = _reduction(X)
    o_a, o_b = (red.o_a, red.o_b) if side == "primal" else (red.o_b, red.o_a)
    prec = o_a if mode == COLUMN else o_b
    if prec:
        return QuickVerdict(added in prec, side)
    if added in o_a or added in o_b:
        return QuickVerdict(False, side)
    cc = _root_refinement(X)[0]
    ob_cls = {red.class_of[t] for t in red.o_b}
    for colour in range(int(cc.max()) + 1):
        cell = np.flatnonzero(cc == colour).tolist()
        if cell[0] in ob_cls:
            continue
        j = red.class_of[added]
        if cc[j] != colour:
            return QuickVerdict(False, side)
        if len(cell) == 1:
            return QuickVerdict(True, side)
        return QuickVerdict(None, side)
    return QuickVerdict(False, side)
