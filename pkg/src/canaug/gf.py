"""Table-driven arithmetic in GF(2), GF(3) and GF(4).

Elements are encoded as small integers ``0..q-1``.  For GF(4) the codes
2 and 3 stand for w and w+1 where w^2 = w + 1.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4)


class FieldSpec:
    """An immutable finite field of order 2, 3 or 4.

    Attributes
    ----------
    q, p : int
        Order and characteristic.
    add, mul, neg : numpy arrays
        Lookup tables indexed by element codes.
    inv : numpy array
        Multiplicative inverses; ``inv[0]`` is 0 and must never be used.
    frob : numpy array
        Shape ``(automorphism_count, q)``; row ``j`` is automorphism ``j``.
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            raise ValueError(f"unsupported field order {q}; supported orders are 2, 3, 4")
        self.q = q
        if q == 4:
            self.p = 2
            add = np.array([[a ^ b for b in range(4)] for a in range(4)], dtype=np.uint8)
            # log table w.r.t. w (code 2): 1 = w^0, w = w^1, w+1 = w^2
            log = {1: 0, 2: 1, 3: 2}
            exp = {0: 1, 1: 2, 2: 3}
            mul = np.zeros((4, 4), dtype=np.uint8)
            for a in range(1, 4):
                for b in range(1, 4):
                    mul[a, b] = exp[(log[a] + log[b]) % 3]
            self.automorphism_count = 2
        else:
            self.p = q
            add = np.array([[(a + b) % q for b in range(q)] for a in range(q)], dtype=np.uint8)
            mul = np.array([[(a * b) % q for b in range(q)] for a in range(q)], dtype=np.uint8)
            self.automorphism_count = 1
        self.add = add
        self.mul = mul
        self.neg = np.array([next(b for b in range(q) if add[a, b] == 0) for a in range(q)],
                            dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a, b] == 1)
        self.inv = inv
        self.sub = add[:, self.neg]
        frob = [np.arange(q, dtype=np.uint8)]
        if q == 4:
            frob.append(np.array([mul[a, a] for a in range(4)], dtype=np.uint8))
        self.frob = np.array(frob, dtype=np.uint8)
        # square of every element; the Hermitian conjugate for q=4
        self.conj = self.frob[-1]
        # a generator of the multiplicative group (None for GF(2))
        self.primitive = {2: None, 3: 2, 4: 2}[q]
        for arr in (self.add, self.mul, self.neg, self.inv, self.sub, self.frob):
            arr.setflags(write=False)
        # plain-list copies for scalar hot paths
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._inv = inv.tolist()
        self._frob = self.frob.tolist()

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))

    def __reduce__(self):
        return (field_make, (self.q,))

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def add_(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul_(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv_(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv[a]

    def apply_automorphism(self, a: int, j: int) -> int:
        if not 0 <= j < self.automorphism_count:
            raise ValueError(f"automorphism index {j} out of range for GF({self.q})")
        return self._frob[j][a]

    def inverse_automorphism(self, j: int) -> int:
        # the only nontrivial automorphism (Frobenius on GF(4)) is an involution
        return j

    def inner_product(self, x, y, form: str = "euclidean") -> int:
        x = np.asarray(x, dtype=np.uint8)
        y = np.asarray(y, dtype=np.uint8)
        if x.shape != y.shape:
            raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
        if form == "hermitian":
            if self.q != 4:
                raise ValueError("the Hermitian form is defined only over GF(4)")
            y = self.conj[y]
        elif form != "euclidean":
            raise ValueError(f"unknown form {form!r}")
        acc = 0
        for t in self.mul[x, y].tolist():
            acc = self._add[acc][t]
        return acc


@lru_cache(maxsize=None)
def field_make(q: int) -> FieldSpec:
    return FieldSpec(q)


def add(F: FieldSpec, a: int, b: int) -> int:
    return F.add_(a, b)


def mul(F: FieldSpec, a: int, b: int) -> int:
    return F.mul_(a, b)


def inv(F: FieldSpec, a: int) -> int:
    return F.inv_(a)


def apply_automorphism(F: FieldSpec, a: int, j: int) -> int:
    return F.apply_automorphism(a, j)


def inner_product(F: FieldSpec, x, y, form: str = "euclidean") -> int:
    return F.inner_product(x, y, form)


def matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product over the field using characteristic arithmetic.

    Prime fields reduce an integer product; GF(4) splits elements into
    their two GF(2) coordinates.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.q != 4:
        return ((A @ B) % F.q).astype(np.uint8)
    # w = code 2 = bit 1, 1 = bit 0; element a = a0 + a1*w
    a0, a1 = A & 1, A >> 1
    b0, b1 = B & 1, B >> 1
    c0 = (a0 @ b0 + a1 @ b1) & 1          # w^2 = w + 1 contributes to both parts
    c1 = (a0 @ b1 + a1 @ b0 + a1 @ b1) & 1
    return (c0 | (c1 << 1)).astype(np.uint8)
