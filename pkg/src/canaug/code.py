"""Linear codes over GF(2), GF(3), GF(4) and the predicates used as filters."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations

import numpy as np

from .gf import FieldSpec, field_make, matmul

# largest q**k the enumeration-based routines will touch
ENUMERATION_BUDGET = 1 << 22


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive computation would exceed its budget."""


def all_vectors(q: int, length: int) -> np.ndarray:
    """All vectors of F_q^length in lexicographic order, shape (q**length, length)."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    idx = np.arange(q ** length, dtype=np.int64)
    out = np.empty((q ** length, length), dtype=np.uint8)
    for j in range(length - 1, -1, -1):
        out[:, j] = idx % q
        idx //= q
    return out


def vector_index(q: int, vecs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`all_vectors` row ordering (works on 1-D or 2-D input)."""
    vecs = np.asarray(vecs, dtype=np.int64)
    weights = q ** np.arange(vecs.shape[-1] - 1, -1, -1, dtype=np.int64)
    return vecs @ weights


def rref(F: FieldSpec, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; zero rows are dropped."""
    M = np.array(M, dtype=np.uint8, copy=True)
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = F.mul[F.inv[M[r, c]], M[r]]
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = F.sub[M[i], F.mul[M[i, c], M[r]]]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(F: FieldSpec, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


class LinearCode:
    """A linear [n, k] code given by a generator matrix.

    Equality is equality of row spaces.  Derived data (codewords, weights)
    is cached on first use; the generator itself is never mutated.
    """

    def __init__(self, field: FieldSpec | int, gen, n: int | None = None):
        F = field if isinstance(field, FieldSpec) else field_make(field)
        G = np.array(gen, dtype=np.uint8)
        if G.ndim == 1:
            G = G.reshape(1, -1) if G.size else G.reshape(0, n or 0)
        if G.ndim != 2:
            raise ValueError("generator must be a 2-D array")
        if n is not None and G.shape[1] != n:
            raise ValueError(f"generator has {G.shape[1]} columns, expected {n}")
        if G.size and int(G.max()) >= F.q:
            raise ValueError(f"entry {int(G.max())} is not an element of GF({F.q})")
        self.field = F
        self.gen = G
        self.gen.setflags(write=False)
        self.k, self.n = G.shape

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) for r in self.gen.tolist())
        return f"LinearCode(q={self.q}, n={self.n}, k={self.k}, [{rows}])"

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def _rref(self) -> tuple[np.ndarray, list[int]]:
        return rref(self.field, self.gen)

    @property
    def reduced(self) -> np.ndarray:
        return self._rref[0]

    @property
    def pivots(self) -> list[int]:
        return self._rref[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (self.q == other.q and self.n == other.n and self.k == other.k
                and np.array_equal(self.reduced, other.reduced))

    def __hash__(self) -> int:
        return hash((self.q, self.n, self.reduced.tobytes()))

    @cached_property
    def messages(self) -> np.ndarray:
        self._check_budget()
        return all_vectors(self.q, self.k)

    def _check_budget(self) -> None:
        if self.q ** self.k > ENUMERATION_BUDGET:
            raise BudgetExceeded(
                f"{self.q}^{self.k} codewords exceed the enumeration budget {ENUMERATION_BUDGET}")

    @cached_property
    def codeword_matrix(self) -> np.ndarray:
        """All q**k codewords; row i is message i (lexicographic) times the generator."""
        if self.k == 0:
            return np.zeros((1, self.n), dtype=np.uint8)
        cw = matmul(self.field, self.messages, self.gen)
        cw.setflags(write=False)
        return cw

    def codewords(self):
        yield from (tuple(r) for r in self.codeword_matrix.tolist())

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.count_nonzero(self.codeword_matrix, axis=1)
        w.setflags(write=False)
        return w

    def weight_distribution(self) -> list[int]:
        return np.bincount(self.weights, minlength=self.n + 1).tolist()

    @cached_property
    def min_distance(self) -> float | int:
        if self.k == 0:
            return float("inf")
        return int(self.weights[1:].min())

    def column_rank_deficient(self) -> bool:
        return len(self.pivots) < self.k


def code_from_rows(field, k: int, n: int, entries) -> LinearCode:
    C = LinearCode(field, np.array(entries, dtype=np.uint8).reshape(k, n), n)
    r = len(C.pivots)
    if r < k:
        raise ValueError(f"generator rows are dependent: rank {r} < k={k}")
    return C


def from_strings(q: int, rows: list[str]) -> LinearCode:
    """Convenience constructor from rows written as digit strings."""
    mat = [[int(ch) for ch in r] for r in rows]
    n = len(mat[0]) if mat else 0
    return code_from_rows(q, len(mat), n, mat)


def zero_code(field, n: int) -> LinearCode:
    return LinearCode(field, np.zeros((0, n), dtype=np.uint8), n)


def systematic_form(C: LinearCode) -> tuple[np.ndarray, list[int]]:
    """Generator ``(I_k | A)`` of a permutation-equivalent code.

    Returns the matrix and ``perm`` with ``perm[new] = old`` column index.
    """
    R, piv = C._rref
    rest = [j for j in range(C.n) if j not in set(piv)]
    perm = list(piv) + rest
    return R[:, perm], perm


def dual(C: LinearCode) -> LinearCode:
    """Euclidean dual code (zero code when C is the full space)."""
    F = C.field
    R, piv = C._rref
    k, n = R.shape
    free = [j for j in range(n) if j not in set(piv)]
    H = np.zeros((n - k, n), dtype=np.uint8)
    for r, j in enumerate(free):
        H[r, j] = 1
        for i, p in enumerate(piv):
            H[r, p] = F.neg[R[i, j]]
    return LinearCode(F, H, n)


def dual_distance_at_least(C: LinearCode, t: int) -> bool:
    """True iff every t-1 columns of a generator matrix are independent."""
    if t <= 1 or C.k == C.n:
        return True
    F = C.field
    G = C.gen
    cols = [tuple(c) for c in G.T.tolist()]
    if any(not any(c) for c in cols):
        return False
    if t == 2:
        return True
    # projective classes: twins give weight-2 dual words
    normed = set()
    for c in cols:
        lead = next(v for v in c if v)
        key = tuple(F.mul[F.inv[lead], np.array(c, dtype=np.uint8)].tolist())
        if key in normed:
            return False
        normed.add(key)
    if t == 3:
        return True
    if C.k < t - 1:
        return False if C.n >= t - 1 else True
    for size in range(3, t):
        for S in combinations(range(C.n), size):
            if rank(F, G[:, S]) < size:
                return False
    return True


def dual_distance(C: LinearCode) -> float | int:
    """Minimum distance of the dual, by the column criterion."""
    if C.k == C.n:
        return float("inf")
    t = 2
    while dual_distance_at_least(C, t):
        t += 1
    return t - 1


def puncture(C: LinearCode, j: int) -> LinearCode:
    """Delete coordinate ``j`` (0-based); dimension may drop."""
    if not 0 <= j < C.n:
        raise IndexError(f"coordinate {j} out of range for length {C.n}")
    G = np.delete(C.gen, j, axis=1)
    R, piv = rref(C.field, G)
    return LinearCode(C.field, R, C.n - 1)


def shorten(C: LinearCode, j: int) -> LinearCode:
    """Subcode vanishing at ``j`` with coordinate ``j`` removed."""
    if not 0 <= j < C.n:
        raise IndexError(f"coordinate {j} out of range for length {C.n}")
    F = C.field
    R = C.reduced.copy()
    nz = np.nonzero(R[:, j])[0]
    if nz.size:
        p = int(nz[0])
        R[p] = F.mul[F.inv[R[p, j]], R[p]]
        for i in nz[1:]:
            R[i] = F.sub[R[i], F.mul[R[i, j], R[p]]]
        R = np.delete(R, p, axis=0)
    R = np.delete(R, j, axis=1)
    R, _ = rref(F, R)
    return LinearCode(F, R, C.n - 1)


def is_self_orthogonal(C: LinearCode, form: str = "euclidean") -> bool:
    F = C.field
    if form == "hermitian" and F.q != 4:
        raise ValueError("the Hermitian form is defined only over GF(4)")
    if form not in ("euclidean", "hermitian"):
        raise ValueError(f"unknown form {form!r}")
    if C.k == 0:
        return True
    G = C.gen
    other = F.conj[G] if form == "hermitian" else G
    return not matmul(F, G, other.T).any()


def is_divisible(C: LinearCode, delta: int) -> bool:
    if delta < 2:
        raise ValueError("divisor must be at least 2")
    return not (C.weights % delta).any()
