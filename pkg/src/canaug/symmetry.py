"""Semimonomial maps, their action on codes, and induced actions on vectors.

Action convention for a map with permutation ``perm`` (source index ->
destination index), destination-indexed ``scalars`` and automorphism
index ``auto``::

    phi(v)[perm[i]] = frob[auto](scalars[perm[i]] * v[i])
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .code import BudgetExceeded, LinearCode, all_vectors, rref, vector_index
from .gf import FieldSpec, field_make, matmul

ORBIT_BUDGET = 1 << 20


@dataclass(frozen=True)
class SemimonomialMap:
    q: int
    perm: tuple[int, ...]
    scalars: tuple[int, ...]
    auto: int = 0

    def __post_init__(self):
        if len(self.perm) != len(self.scalars):
            raise ValueError("perm and scalars differ in length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if any(s == 0 for s in self.scalars):
            raise ValueError("scalars must be nonzero")

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def field(self) -> FieldSpec:
        return field_make(self.q)

    @classmethod
    def identity(cls, q: int, n: int) -> "SemimonomialMap":
        return cls(q, tuple(range(n)), (1,) * n, 0)

    @classmethod
    def permutation(cls, q: int, perm) -> "SemimonomialMap":
        perm = tuple(int(p) for p in perm)
        return cls(q, perm, (1,) * len(perm), 0)

    def is_identity(self) -> bool:
        return (self.auto == 0 and all(i == p for i, p in enumerate(self.perm))
                and all(s == 1 for s in self.scalars))

    def is_permutation_only(self) -> bool:
        return self.auto == 0 and all(s == 1 for s in self.scalars)

    def __call__(self, v):
        return map_apply(self, v)


def map_apply(phi: SemimonomialMap, v) -> np.ndarray:
    """Apply ``phi`` to a vector or to every row of a matrix."""
    F = phi.field
    V = np.asarray(v, dtype=np.uint8)
    if V.shape[-1] != phi.n:
        raise ValueError(f"length mismatch: map on {phi.n} coordinates, vector of {V.shape[-1]}")
    perm = np.asarray(phi.perm, dtype=np.intp)
    lam = np.asarray(phi.scalars, dtype=np.uint8)
    out = np.empty_like(V)
    out[..., perm] = F.frob[phi.auto][F.mul[lam[perm], V]]
    return out


def map_apply_code(phi: SemimonomialMap, C: LinearCode) -> LinearCode:
    return LinearCode(C.field, map_apply(phi, C.gen), C.n)


def map_compose(phi: SemimonomialMap, psi: SemimonomialMap) -> SemimonomialMap:
    """The map ``v -> phi(psi(v))``."""
    if phi.n != psi.n or phi.q != psi.q:
        raise ValueError("maps act on different spaces")
    F = phi.field
    n = phi.n
    perm = tuple(phi.perm[psi.perm[i]] for i in range(n))
    inv_phi = [0] * n
    for i, p in enumerate(phi.perm):
        inv_phi[p] = i
    back = F.inverse_automorphism(psi.auto)
    scalars = tuple(F.mul_(F.apply_automorphism(phi.scalars[j], back), psi.scalars[inv_phi[j]])
                    for j in range(n))
    auto = (phi.auto + psi.auto) % F.automorphism_count
    return SemimonomialMap(phi.q, perm, scalars, auto)


def map_invert(phi: SemimonomialMap) -> SemimonomialMap:
    F = phi.field
    n = phi.n
    perm = [0] * n
    for i, p in enumerate(phi.perm):
        perm[p] = i
    scalars = tuple(F.inv_(F.apply_automorphism(phi.scalars[phi.perm[i]], phi.auto))
                    for i in range(n))
    return SemimonomialMap(phi.q, tuple(perm), scalars, F.inverse_automorphism(phi.auto))


def dualize_aut(phi: SemimonomialMap) -> SemimonomialMap:
    """Image of an automorphism of C as an automorphism of the Euclidean dual."""
    F = phi.field
    return SemimonomialMap(phi.q, phi.perm, tuple(F.inv_(s) for s in phi.scalars), phi.auto)


def is_automorphism(phi: SemimonomialMap, C: LinearCode) -> bool:
    return map_apply_code(phi, C) == C


@dataclass
class AutGenerators:
    """Generators of (a subgroup of) the automorphism group of ``code``."""

    code: LinearCode
    gens: list[SemimonomialMap] = dc_field(default_factory=list)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)


@dataclass(frozen=True)
class InducedMap:
    matrix: np.ndarray
    auto: int


def mat_inverse(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    k = M.shape[0]
    aug = np.concatenate([np.asarray(M, dtype=np.uint8), np.eye(k, dtype=np.uint8)], axis=1)
    R, piv = rref(F, aug)
    if piv[:k] != list(range(k)) or len(piv) < k:
        raise ValueError("matrix is singular")
    return R[:, k:]


def induced_action(phi: SemimonomialMap, G) -> InducedMap:
    """Solve ``G phi = A G`` for A; raise if ``phi`` does not stabilise the code."""
    F = phi.field
    G = np.asarray(G, dtype=np.uint8)
    Gphi = map_apply(phi, G)
    _, piv = rref(F, G)
    if len(piv) < G.shape[0]:
        raise ValueError("generator matrix is rank deficient")
    A = matmul(F, Gphi[:, piv], mat_inverse(F, G[:, piv]))
    if not np.array_equal(matmul(F, A, G), Gphi):
        raise ValueError("map is not an automorphism of the code")
    return InducedMap(A, phi.auto)


def apply_induced(F: FieldSpec, m: InducedMap, X: np.ndarray) -> np.ndarray:
    """``x -> (A x^T)^{auto^-1}`` applied to each row of X."""
    Y = matmul(F, X, m.matrix.T)
    return F.frob[F.inverse_automorphism(m.auto)][Y]


def coordinate_orbits(gens, n: int) -> list[list[int]]:
    """Orbits of the permutation parts, sorted by smallest element."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, p in enumerate(g.perm):
            a, b = find(i), find(p)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def row_side_generator(F: FieldSpec, G: np.ndarray) -> np.ndarray:
    """Dual generator ``(I_{n-k} | -A^T)`` for a generator ``(A | I_k)``."""
    G = np.asarray(G, dtype=np.uint8)
    k, n = G.shape
    r = n - k
    if not np.array_equal(G[:, r:], np.eye(k, dtype=np.uint8)):
        raise ValueError("row side needs a generator of the form (A | I_k)")
    H = np.zeros((r, n), dtype=np.uint8)
    H[:, :r] = np.eye(r, dtype=np.uint8)
    H[:, r:] = F.neg[G[:, :r].T]
    return H


@dataclass
class VectorOrbits:
    reps: np.ndarray          # one row per orbit, lexicographically smallest member
    orbit_of: np.ndarray      # orbit id for every vector index of the space
    sizes: np.ndarray


def vector_orbit_reps(gens, G, side: str = "column", q: int | None = None,
                      budget: int = ORBIT_BUDGET) -> VectorOrbits:
    """Orbits of the induced action of ``gens`` on F_q^k (column) or F_q^(n-k) (row)."""
    gens = list(gens)
    G = np.asarray(G, dtype=np.uint8)
    if q is None:
        if not gens:
            raise ValueError("field order needed when there are no generators")
        q = gens[0].q
    F = field_make(q)
    if side == "column":
        base, maps = G, gens
    elif side == "row":
        base, maps = row_side_generator(F, G), [dualize_aut(g) for g in gens]
    else:
        raise ValueError(f"side must be 'column' or 'row', not {side!r}")
    dim = base.shape[0]
    size = q ** dim
    if size > budget:
        raise BudgetExceeded(f"vector space of size {size} exceeds orbit budget {budget}")
    X = all_vectors(q, dim)
    src, dst = [], []
    idx = np.arange(size)
    for g in maps:
        m = induced_action(g, base)
        img = vector_index(q, apply_induced(F, m, X))
        moved = img != idx
        src.append(idx[moved])
        dst.append(img[moved])
    if src:
        s = np.concatenate(src)
        d = np.concatenate(dst)
    else:
        s = d = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # relabel so orbit ids follow their smallest member
    uniq, first_idx = np.unique(labels, return_index=True)
    order = np.argsort(first_idx)
    remap = np.empty(len(uniq), dtype=np.int64)
    remap[uniq[order]] = np.arange(len(uniq))
    orbit_of = remap[labels]
    rep_idx = first_idx[order]
    sizes = np.bincount(orbit_of, minlength=len(uniq))
    return VectorOrbits(X[rep_idx], orbit_of, sizes)
