import numpy as np
import pytest
from hypothesis import settings, strategies as st

from canaug.code import LinearCode
from canaug.gf import field_make
from canaug.symmetry import SemimonomialMap

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIELDS = (2, 3, 4)


@st.composite
def codes(draw, qs=FIELDS, max_n=7, min_k=1, max_k=3):
    """Random full-rank code over one of ``qs``."""
    q = draw(st.sampled_from(qs))
    n = draw(st.integers(max(1, min_k), max_n))
    k = draw(st.integers(min_k, min(max_k, n)))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_code(np.random.default_rng(seed), q, k, n)


@st.composite
def maps(draw, q, n):
    perm = draw(st.permutations(range(n)))
    scal = draw(st.lists(st.integers(1, q - 1), min_size=n, max_size=n))
    auto = draw(st.integers(0, 1)) if q == 4 else 0
    return SemimonomialMap(q, tuple(perm), tuple(scal), auto)


def random_code(rng, q, k, n):
    F = field_make(q)
    while True:
        C = LinearCode(F, rng.integers(0, q, size=(k, n)), n)
        if len(C.pivots) == k:
            return C


def random_map(rng, q, n):
    perm = tuple(rng.permutation(n).tolist())
    scal = tuple(rng.integers(1, q, size=n).tolist())
    auto = int(rng.integers(0, 2)) if q == 4 else 0
    return SemimonomialMap(q, perm, scal, auto)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> (passed, description), filled by the acceptance suite
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}: {text}")
