from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from canaug.canon import canonicalize
from canaug.code import BudgetExceeded, LinearCode, dual, from_strings, rref, vector_index
from canaug.gf import matmul
from canaug.symmetry import (SemimonomialMap, apply_induced, coordinate_orbits, dualize_aut,
                             induced_action, is_automorphism, map_apply, map_apply_code,
                             map_compose, map_invert, row_side_generator,
                             vector_orbit_reps)

from conftest import codes, maps, random_code, random_map

EX1 = from_strings(2, ["1011", "0101"])


def swap(q, n, a, b):
    p = list(range(n))
    p[a], p[b] = b, a
    return SemimonomialMap.permutation(q, p)


def reference_apply(phi, v):
    """Action convention written out coordinate by coordinate."""
    F = phi.field
    inv = [0] * phi.n
    for i, p in enumerate(phi.perm):
        inv[p] = i
    return [F.apply_automorphism(F.mul_(phi.scalars[j], int(v[inv[j]])), phi.auto)
            for j in range(phi.n)]


def group_closure(gens, n, q):
    """All elements generated by ``gens`` as (perm, scalars, auto) tuples."""
    ident = SemimonomialMap.identity(q, n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                c = map_compose(h, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def test_example_swap_is_automorphism():
    assert is_automorphism(swap(2, 4, 0, 2), EX1)
    assert is_automorphism(swap(2, 4, 1, 3), EX1)
    assert not is_automorphism(swap(2, 4, 0, 1), EX1)


def test_identity_map():
    v = np.array([1, 2, 0, 3], dtype=np.uint8)
    assert (map_apply(SemimonomialMap.identity(4, 4), v) == v).all()


def test_scalar_action():
    phi = SemimonomialMap(3, (0, 1), (2, 1), 0)
    assert map_apply(phi, [1, 1]).tolist() == [2, 1]


def test_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        map_apply(SemimonomialMap.identity(2, 3), [1, 0])
    with pytest.raises(ValueError):
        map_compose(SemimonomialMap.identity(2, 3), SemimonomialMap.identity(2, 4))


def test_invalid_maps():
    with pytest.raises(ValueError):
        SemimonomialMap(3, (0, 0), (1, 1))
    with pytest.raises(ValueError):
        SemimonomialMap(3, (0, 1), (1, 0))


def test_swaps_compose():
    g = map_compose(swap(2, 4, 0, 2), swap(2, 4, 1, 3))
    assert g.perm == (2, 3, 0, 1)


def test_example_automorphism_group_order():
    res = canonicalize(EX1)
    group = group_closure(list(res.aut.gens), 4, 2)
    assert {g.perm for g in group} == {(0, 1, 2, 3), (2, 1, 0, 3), (0, 3, 2, 1), (2, 3, 0, 1)}


def test_gf4_twisted_composition_bruteforce():
    frob = SemimonomialMap(4, (0, 1), (1, 1), 1)
    scale = SemimonomialMap(4, (0, 1), (2, 1), 0)
    for a, b in ((frob, scale), (scale, frob)):
        c = map_compose(a, b)
        for v in product(range(4), repeat=2):
            assert map_apply(c, v).tolist() == map_apply(a, map_apply(b, v)).tolist()


@given(st.data())
def test_action_convention(data):
    q = data.draw(st.sampled_from([2, 3, 4]))
    n = data.draw(st.integers(1, 6))
    phi = data.draw(maps(q, n))
    v = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    assert map_apply(phi, v).tolist() == reference_apply(phi, v)


@given(st.data())
def test_compose_and_invert(data):
    q = data.draw(st.sampled_from([2, 3, 4]))
    n = data.draw(st.integers(1, 6))
    phi, psi = data.draw(maps(q, n)), data.draw(maps(q, n))
    v = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)),
                 dtype=np.uint8)
    assert (map_apply(map_compose(phi, psi), v) == map_apply(phi, map_apply(psi, v))).all()
    assert (map_apply(map_invert(phi), map_apply(phi, v)) == v).all()
    assert map_compose(phi, map_invert(phi)).is_identity()


@pytest.mark.parametrize("q,s,expected", [(2, 1, 1), (3, 2, 2), (4, 2, 3), (4, 3, 2)])
def test_dualize_scalars(q, s, expected):
    phi = SemimonomialMap(q, (1, 0), (s, 1), 0)
    d = dualize_aut(phi)
    assert d.perm == phi.perm and d.scalars == (expected, 1)


def test_induced_identity():
    m = induced_action(SemimonomialMap.identity(2, 4), EX1.gen)
    assert (m.matrix == np.eye(2)).all()


def test_induced_example_swap():
    # swapping coordinates 1 and 3 sends 1011 -> 1110 = r1 + r2 and fixes 0101
    m = induced_action(swap(2, 4, 1, 3), EX1.gen)
    assert m.matrix.tolist() == [[1, 1], [0, 1]]


def test_induced_rejects_non_automorphism():
    with pytest.raises(ValueError, match="not an automorphism"):
        induced_action(swap(2, 4, 0, 1), EX1.gen)


@given(codes(max_n=6))
def test_aut_generators_and_induced_maps(C):
    res = canonicalize(C)
    G = C.gen
    for g in res.aut.gens:
        assert is_automorphism(g, C)
        m = induced_action(g, G)
        # A G = G phi
        assert (matmul(C.field, m.matrix, G) == map_apply(g, G)).all()


@given(codes(max_n=6))
def test_induced_action_twisted_homomorphism(C):
    F = C.field
    gens = list(canonicalize(C).aut.gens)
    for g1 in gens[:4]:
        for g2 in gens[:4]:
            A1 = induced_action(g1, C.gen).matrix
            A2 = induced_action(g2, C.gen).matrix
            # g1 applied first, then g2
            A12 = induced_action(map_compose(g2, g1), C.gen).matrix
            assert (A12 == matmul(F, F.frob[g2.auto][A1], A2)).all()


@given(codes(max_n=6))
def test_dualized_automorphisms_stabilise_dual(C):
    if C.k == C.n:
        return
    D = dual(C)
    for g in canonicalize(C).aut.gens:
        assert is_automorphism(dualize_aut(g), D)


def test_coordinate_orbit_examples():
    assert coordinate_orbits(canonicalize(EX1).aut.gens, 4) == [[0, 2], [1, 3]]
    I3 = LinearCode(3, np.eye(3, dtype=np.uint8))
    assert coordinate_orbits(canonicalize(I3).aut.gens, 3) == [[0, 1, 2]]
    assert coordinate_orbits([SemimonomialMap.identity(2, 3)], 3) == [[0], [1], [2]]


@pytest.mark.parametrize("q,k", [(2, 3), (3, 2), (4, 2), (2, 4)])
def test_identity_code_vector_orbits_are_weight_classes(q, k):
    I = LinearCode(q, np.eye(k, dtype=np.uint8))
    orb = vector_orbit_reps(canonicalize(I).aut.gens, I.gen, "column", q=q)
    assert len(orb.reps) == k + 1
    weights = np.count_nonzero(orb.reps, axis=1)
    assert sorted(weights.tolist()) == list(range(k + 1))


def test_trivial_generators_give_singletons():
    orb = vector_orbit_reps([SemimonomialMap.identity(3, 3)], np.eye(2, 3, dtype=np.uint8),
                            "column", q=3)
    assert len(orb.reps) == 9 and (orb.sizes == 1).all()


def test_example_column_orbits():
    # the two coordinate swaps induce the identity and [[1,1],[0,1]] on F_2^2
    orb = vector_orbit_reps(canonicalize(EX1).aut.gens, EX1.gen, "column", q=2)
    # x -> x A^T swaps 10 and 11, fixes 00 and 01
    assert orb.reps.tolist() == [[0, 0], [0, 1], [1, 0]]
    assert sorted(orb.sizes.tolist()) == [1, 1, 2]


def test_orbit_budget():
    I = LinearCode(2, np.eye(5, dtype=np.uint8))
    with pytest.raises(BudgetExceeded):
        vector_orbit_reps([SemimonomialMap.identity(2, 5)], I.gen, "column", q=2, budget=16)


@given(codes(max_n=6), st.sampled_from(["column", "row"]))
def test_vector_orbits_closed(C, side):
    if side == "row":
        if C.k == C.n:
            return
        # row side expects (A | I_k)
        R, piv = rref(C.field, C.gen)
        rest = [j for j in range(C.n) if j not in piv]
        C = LinearCode(C.field, R[:, rest + list(piv)], C.n)
    gens = list(canonicalize(C).aut.gens)
    orb = vector_orbit_reps(gens, C.gen, side, q=C.q)
    dim = C.k if side == "column" else C.n - C.k
    assert orb.sizes.sum() == C.q ** dim
    assert orb.orbit_of[0] == 0 and orb.sizes[0] == 1
    F = C.field
    base = C.gen if side == "column" else None
    if side == "row":
        base = row_side_generator(F, C.gen)
        gens = [dualize_aut(g) for g in gens]
    rep_ids = orb.orbit_of[vector_index(C.q, orb.reps)]
    assert rep_ids.tolist() == list(range(len(orb.reps)))
    for g in gens:
        img = apply_induced(F, induced_action(g, base), orb.reps)
        assert (orb.orbit_of[vector_index(C.q, img)] == rep_ids).all()
    # representatives are the lexicographically smallest members
    for i, r in enumerate(orb.reps):
        members = np.flatnonzero(orb.orbit_of == i)
        assert vector_index(C.q, r[None])[0] == members.min()


def test_random_maps_preserve_codes_setwise(rng):
    for q in (2, 3, 4):
        C = random_code(rng, q, 2, 5)
        phi = random_map(rng, q, 5)
        image = set(map(tuple, map_apply(phi, C.codeword_matrix).tolist()))
        assert image == set(map_apply_code(phi, C).codewords())
