"""Brute-force ground truth for equivalence and classification.

Everything here enumerates the full semimonomial group; nothing is shared
with the canonical-form search or the augmentation engine.  Budgets are
hard: over-budget requests raise :class:`BudgetExceeded` instead of running
slowly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .code import BudgetExceeded, LinearCode, rref
from .gf import field_make
from .symmetry import SemimonomialMap

# largest length for which the whole group is enumerated
MAX_LENGTH = {2: 8, 3: 6, 4: 6}
# largest number of subspaces classify_exhaustive will enumerate
MAX_SUBSPACES = 200_000
_PERM_CHUNK = 5040


def _check_group_budget(q: int, n: int) -> None:
    if n > MAX_LENGTH[q]:
        raise BudgetExceeded(
            f"brute force over the semimonomial group needs n <= {MAX_LENGTH[q]} for q={q}, got n={n}")


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.intp).reshape(-1, n)


@lru_cache(maxsize=None)
def _scalings(q: int, n: int) -> np.ndarray:
    return np.array(list(product(range(1, q), repeat=n)), dtype=np.uint8).reshape(-1, n)


def _all_words(q: int, G: np.ndarray) -> np.ndarray:
    """Every linear combination of the rows of G."""
    k, n = G.shape
    F = field_make(q)
    words = np.zeros((1, n), dtype=np.uint8)
    for i in range(k):
        shifted = [F.add[words, F.mul[c, G[i]]] for c in range(q)]
        words = np.concatenate(shifted, axis=0)
    return words


def _index(q: int, X: np.ndarray) -> np.ndarray:
    n = X.shape[-1]
    w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return X.astype(np.int64) @ w


def _images(q: int, words: np.ndarray):
    """Yield (auto, scaling, perms, idx) with idx[p, w] the index of image word w under map p.

    The map for row p sends v to ``frob[auto](s * v)[perms[p]]`` (gather order).
    """
    F = field_make(q)
    n = words.shape[1]
    P = _perms(n)
    for a in range(F.automorphism_count):
        for s in _scalings(q, n):
            Y = F.frob[a][F.mul[s, words]]
            for lo in range(0, len(P), _PERM_CHUNK):
                chunk = P[lo:lo + _PERM_CHUNK]
                yield a, s, chunk, _index(q, Y[:, chunk].transpose(1, 0, 2))


def _as_map(q: int, a: int, s: np.ndarray, gather: np.ndarray) -> SemimonomialMap:
    n = len(gather)
    perm = [0] * n
    scal = [1] * n
    for j, src in enumerate(gather.tolist()):
        perm[src] = j
        scal[j] = int(s[src])
    return SemimonomialMap(q, tuple(perm), tuple(scal), a)


def equivalent_bruteforce(C1: LinearCode, C2: LinearCode, witness: bool = False):
    """True iff some semimonomial map carries C1 onto C2.

    With ``witness=True`` returns the map (or None) instead of a boolean.
    """
    if (C1.q, C1.n, C1.k) != (C2.q, C2.n, C2.k):
        return None if witness else False
    q, n = C1.q, C1.n
    _check_group_budget(q, n)
    target = np.zeros(q ** n, dtype=bool)
    target[_index(q, _all_words(q, C2.gen))] = True
    G = np.asarray(C1.gen, dtype=np.uint8)
    for a, s, chunk, idx in _images(q, G):
        hit = target[idx].all(axis=1) if len(G) else np.ones(len(chunk), bool)
        if hit.any():
            if not witness:
                return True
            p = int(np.flatnonzero(hit)[0])
            return _as_map(q, a, s, chunk[p])
    return None if witness else False


def _sorted_nonzero_keys(idx: np.ndarray) -> np.ndarray:
    keys = np.sort(idx, axis=1)
    return keys[:, 1:]  # index 0 is the zero word, always present and smallest


def _lexmin_row(K: np.ndarray) -> np.ndarray:
    if K.shape[1] == 0:
        return K[0]
    order = np.lexsort(K.T[::-1])
    return K[order[0]]


def _code_from_indices(q: int, n: int, keys) -> LinearCode:
    F = field_make(q)
    keys = np.asarray(keys, dtype=np.int64)
    X = np.zeros((len(keys), n), dtype=np.uint8)
    for j in range(n - 1, -1, -1):
        X[:, j] = keys % q
        keys = keys // q
    R, _ = rref(F, X) if len(X) else (np.zeros((0, n), np.uint8), [])
    return LinearCode(F, R, n)


def _orbit_keys(q: int, words: np.ndarray) -> np.ndarray:
    out = [np.unique(_sorted_nonzero_keys(idx), axis=0) for *_, idx in _images(q, words)]
    return np.unique(np.concatenate(out), axis=0)


def canonical_lexmin(C: LinearCode) -> LinearCode:
    """Image of C whose ordered list of nonzero codewords is lexicographically least."""
    q, n = C.q, C.n
    _check_group_budget(q, n)
    keys = _orbit_keys(q, _all_words(q, C.gen))
    return _code_from_indices(q, n, _lexmin_row(keys))


# -- predicates, computed from codeword lists -------------------------------

def _weights(q: int, G: np.ndarray) -> np.ndarray:
    return np.count_nonzero(_all_words(q, G), axis=1)


def _min_weight(q: int, G: np.ndarray):
    w = _weights(q, G)[1:]
    return int(w.min()) if len(w) else float("inf")


def _dual_min_weight(q: int, G: np.ndarray, n: int):
    F = field_make(q)
    X = _all_words(q, np.eye(n, dtype=np.uint8))
    if len(G):
        prods = np.zeros((len(X), len(G)), dtype=np.uint8)
        for j in range(n):
            prods = F.add[prods, F.mul[X[:, j:j + 1], G[:, j][None, :]]]
        X = X[~prods.any(axis=1)]
    w = np.count_nonzero(X, axis=1)
    w = w[w > 0]
    return int(w.min()) if len(w) else float("inf")


def _self_orthogonal(q: int, G: np.ndarray, form: str) -> bool:
    F = field_make(q)
    H = F.conj[G] if form == "hermitian" else G
    for x in G:
        for y in H:
            acc = 0
            for t in F.mul[x, y].tolist():
                acc = int(F.add[acc, t])
            if acc:
                return False
    return True


@dataclass(frozen=True)
class Requirements:
    dmin: int = 1
    dual_min: int = 1
    so: str = "none"
    divisible: int | None = None

    @classmethod
    def from_context(cls, ctx) -> "Requirements":
        if ctx is None:
            return cls()
        if isinstance(ctx, cls):
            return ctx
        return cls(getattr(ctx, "dmin", 1), getattr(ctx, "dual_min", 1),
                   getattr(ctx, "so", "none") or "none", getattr(ctx, "divisible", None))

    def accepts(self, C: LinearCode) -> bool:
        q, G = C.q, np.asarray(C.gen, dtype=np.uint8)
        if C.k and _min_weight(q, G) < self.dmin:
            return False
        if C.k < C.n and _dual_min_weight(q, G, C.n) < self.dual_min:
            return False
        if self.so != "none" and not _self_orthogonal(q, G, self.so):
            return False
        if self.divisible and (_weights(q, G) % self.divisible).any():
            return False
        return True


@dataclass
class ExhaustiveResult:
    count: int
    representatives: list[LinearCode]


def _rref_matrices(q: int, n: int, k: int):
    for piv in combinations(range(n), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in piv]
        for vals in product(range(q), repeat=len(free)):
            M = np.zeros((k, n), dtype=np.uint8)
            for i, p in enumerate(piv):
                M[i, p] = 1
            for (i, j), v in zip(free, vals):
                M[i, j] = v
            yield M


def _gaussian_binomial(q: int, n: int, k: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=None)
def _all_classes(q: int, n: int, k: int) -> tuple[LinearCode, ...]:
    _check_group_budget(q, n)
    total = _gaussian_binomial(q, n, k)
    if total > MAX_SUBSPACES:
        raise BudgetExceeded(f"{total} subspaces exceed the exhaustive budget {MAX_SUBSPACES}")
    mats = list(_rref_matrices(q, n, k))
    keys = [np.sort(_index(q, _all_words(q, M)))[1:].tobytes() for M in mats]
    slot = {key: i for i, key in enumerate(keys)}
    seen = np.zeros(len(mats), dtype=bool)
    reps = []
    for i, M in enumerate(mats):
        if seen[i]:
            continue
        orbit = _orbit_keys(q, _all_words(q, M))
        for row in orbit:
            seen[slot[row.astype(np.int64).tobytes()]] = True
        reps.append(_code_from_indices(q, n, _lexmin_row(orbit)))
    return tuple(reps)


def classify_exhaustive(q: int, n: int, k: int, ctx=None) -> ExhaustiveResult:
    """All inequivalent [n, k]_q codes meeting ``ctx``'s final constraints."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    req = Requirements.from_context(ctx)
    reps = [C for C in _all_classes(q, n, k) if req.accepts(C)]
    return ExhaustiveResult(len(reps), reps)
