from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from canaug.code import (BudgetExceeded, LinearCode, code_from_rows, dual, dual_distance,
                         dual_distance_at_least, from_strings, is_divisible, is_self_orthogonal,
                         puncture, shorten, systematic_form, zero_code)
from canaug.gf import field_make

from conftest import codes

EX1 = ["1011", "0101"]


def brute_words(C):
    """All codewords by explicit linear combinations, independent of LinearCode."""
    F = C.field
    out = set()
    for coeffs in product(range(C.q), repeat=C.k):
        w = [0] * C.n
        for c, row in zip(coeffs, C.gen.tolist()):
            w = [F.add_(a, F.mul_(c, b)) for a, b in zip(w, row)]
        out.add(tuple(w))
    return out


def brute_dual_min_weight(C):
    F = C.field
    best = None
    for v in product(range(C.q), repeat=C.n):
        if not any(v):
            continue
        if all(F.inner_product(v, row) == 0 for row in C.gen.tolist()):
            w = sum(1 for a in v if a)
            best = w if best is None else min(best, w)
    return best


def test_example_code_words():
    C = from_strings(2, EX1)
    assert set(C.codewords()) == {(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 1), (1, 1, 1, 0)}
    assert C.weight_distribution() == [1, 0, 1, 2, 0]
    assert C.min_distance == 2


@pytest.mark.parametrize("q,rows,words", [
    (2, ["10", "01"], {(0, 0), (1, 0), (0, 1), (1, 1)}),
    (3, ["12"], {(0, 0), (1, 2), (2, 1)}),
])
def test_codewords_small(q, rows, words):
    assert set(from_strings(q, rows).codewords()) == words


def test_rank_deficient_rejected():
    with pytest.raises(ValueError, match="rank 1"):
        code_from_rows(2, 2, 2, [[1, 1], [1, 1]])


def test_entry_outside_field_rejected():
    with pytest.raises(ValueError, match="GF\\(3\\)"):
        LinearCode(3, [[1, 3]])


def test_trivial_ternary_code():
    C = code_from_rows(3, 2, 2, [[1, 0], [0, 1]])
    assert (C.k, C.n) == (2, 2) and C.min_distance == 1


@pytest.mark.parametrize("q,rows,dist", [
    (2, ["100", "010", "001"], [1, 3, 3, 1]),
    (3, ["12"], [1, 0, 2]),
])
def test_weight_distribution(q, rows, dist):
    assert from_strings(q, rows).weight_distribution() == dist


def test_min_distance_by_enumeration():
    # 1011 + 0111 = 1100 has weight 2
    C = from_strings(2, ["1011", "0111"])
    assert C.min_distance == min(sum(map(bool, w)) for w in brute_words(C) if any(w)) == 2


def test_identity_min_distance():
    assert LinearCode(3, np.eye(3, dtype=np.uint8)).min_distance == 1


def test_zero_code_distance_infinite():
    Z = zero_code(2, 5)
    assert Z.k == 0 and Z.min_distance == float("inf")


def test_systematic_form_example():
    M, perm = systematic_form(from_strings(2, EX1))
    assert perm == [0, 1, 2, 3]
    assert M.tolist() == [[1, 0, 1, 1], [0, 1, 0, 1]]


def test_systematic_form_moves_pivots_forward():
    M, perm = systematic_form(from_strings(2, ["011", "001"]))
    assert perm[:2] == [1, 2]
    assert M[:, :2].tolist() == [[1, 0], [0, 1]]
    assert M[:, 2].tolist() == [0, 0]


def test_systematic_form_identity():
    M, perm = systematic_form(LinearCode(4, np.eye(3, dtype=np.uint8)))
    assert perm == [0, 1, 2] and (M == np.eye(3)).all()


@pytest.mark.parametrize("q,rows,expected", [
    (2, ["1011", "0101"], ["1010", "1101"]),
    (2, ["11"], ["11"]),
    (3, ["11"], ["12"]),
])
def test_dual_examples(q, rows, expected):
    C = from_strings(q, rows)
    D = dual(C)
    assert D == from_strings(q, expected)
    F = C.field
    for x in C.gen.tolist():
        for y in D.gen.tolist():
            assert F.inner_product(x, y) == 0


def test_dual_of_full_space_is_zero_code():
    D = dual(LinearCode(2, np.eye(3, dtype=np.uint8)))
    assert D.k == 0 and D.n == 3


@pytest.mark.parametrize("rows,t,expected", [
    (["1010", "0100"], 2, False),
    (EX1, 2, True),
    (EX1, 3, False),
    (EX1, 1, True),
])
def test_dual_distance_examples(rows, t, expected):
    assert dual_distance_at_least(from_strings(2, rows), t) is expected


def test_dual_distance_full_space():
    C = LinearCode(3, np.eye(3, dtype=np.uint8))
    assert dual_distance_at_least(C, 10)
    assert dual_distance(C) == float("inf")


def test_puncture_example():
    P = puncture(from_strings(2, EX1), 3)
    assert P.k == 2
    assert set(P.codewords()) == {(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)}


def test_shorten_repetition_to_zero_code():
    S = shorten(from_strings(2, ["11"]), 0)
    assert S.k == 0 and S.n == 1


def test_index_errors():
    C = from_strings(2, EX1)
    with pytest.raises(IndexError):
        puncture(C, 4)
    with pytest.raises(IndexError):
        shorten(C, -1)


def test_self_orthogonal_and_divisible():
    C = from_strings(2, ["1111"])
    assert is_self_orthogonal(C, "euclidean") and is_divisible(C, 4)
    assert not is_self_orthogonal(from_strings(2, EX1))


def test_ternary_divisible_by_nine():
    # four projective points of PG(1,3), each three times: every weight is 9
    cols = [(1, 0), (0, 1), (1, 1), (1, 2)] * 3
    C = LinearCode(3, np.array(cols, dtype=np.uint8).T)
    assert C.k == 2 and C.n == 12
    assert is_divisible(C, 9) and C.min_distance == 9


def test_form_errors():
    with pytest.raises(ValueError):
        is_self_orthogonal(from_strings(3, ["11"]), "hermitian")
    with pytest.raises(ValueError):
        is_divisible(from_strings(2, ["11"]), 1)


def test_hermitian_self_orthogonal():
    # the [6,3] hexacode is Hermitian self-dual
    C = from_strings(4, ["100123", "010132", "001111"])
    assert is_self_orthogonal(C, "hermitian")
    assert dual(C) != C  # Euclidean dual differs


def test_enumeration_budget(monkeypatch):
    import canaug.code as code_mod

    monkeypatch.setattr(code_mod, "ENUMERATION_BUDGET", 8)
    with pytest.raises(BudgetExceeded):
        LinearCode(2, np.eye(4, dtype=np.uint8)).weights


def test_equality_is_row_space_equality():
    assert from_strings(2, ["1011", "0101"]) == from_strings(2, ["1110", "0101"])
    assert from_strings(2, ["1011", "0101"]) != from_strings(2, ["1011", "0110"])
    assert len({from_strings(2, ["10", "01"]), from_strings(2, ["11", "01"])}) == 1


@given(codes(max_n=7))
def test_double_dual(C):
    assume(C.k < C.n)
    assert dual(dual(C)) == C


@given(codes(max_n=7))
def test_weight_distribution_sums(C):
    wd = C.weight_distribution()
    assert wd[0] == 1 and sum(wd) == C.q ** C.k
    assert set(C.codewords()) == brute_words(C)


@given(codes(max_n=7), st.integers(0, 6))
def test_puncture_distance(C, j):
    assume(j < C.n and C.n > 1)
    # no weight-1 codeword supported at j
    assume(not any(sum(map(bool, w)) == 1 and w[j] for w in C.codewords()))
    P = puncture(C, j)
    assert P.k == C.k
    assert P.min_distance >= C.min_distance - 1


@given(codes(max_n=7), st.integers(0, 6))
def test_shorten_distance(C, j):
    assume(j < C.n)
    S = shorten(C, j)
    assert S.k in (C.k, C.k - 1)
    if S.k:
        assert S.min_distance >= C.min_distance
    # shortened words are exactly the words vanishing at j, with j removed
    expect = {w[:j] + w[j + 1:] for w in brute_words(C) if w[j] == 0}
    assert set(S.codewords()) == expect


@given(codes(max_n=6, max_k=3), st.integers(1, 4))
def test_dual_distance_against_enumeration(C, t):
    assume(C.q ** C.n <= 4096)
    dmin = brute_dual_min_weight(C)
    expected = True if dmin is None else dmin >= t
    assert dual_distance_at_least(C, t) is expected


def test_dual_distance_exhaustive_binary_n10():
    # every binary [10,k] code from a fixed random sample, against dual enumeration
    rng = np.random.default_rng(7)
    F = field_make(2)
    for _ in range(40):
        k = int(rng.integers(1, 10))
        C = LinearCode(F, rng.integers(0, 2, size=(k, 10)), 10)
        if len(C.pivots) < k:
            continue
        D = dual(C)
        d_perp = D.min_distance if D.k else float("inf")
        for t in range(1, 6):
            assert dual_distance_at_least(C, t) is (d_perp >= t)


@given(codes(qs=(2, 3), max_n=6))
def test_divisible_shortening(C):
    for delta in (2, 3, 4):
        if is_divisible(C, delta):
            for j in range(C.n):
                assert is_divisible(shorten(C, j), delta)
