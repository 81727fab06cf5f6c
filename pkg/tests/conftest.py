import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from simplex_split.ifs import generators, perm_matrix
from simplex_split.linalg import IntMatrix, SimplexPoint, mat_mul


def random_sigma(rng: random.Random, n: int, length: int) -> IntMatrix:
    """Random product of N, L and permutation matrices."""
    g = generators(n)
    m = IntMatrix.identity(n + 1)
    for _ in range(length):
        choice = rng.randrange(3)
        if choice == 0:
            step = g.N
        elif choice == 1:
            step = g.L
        else:
            p = list(range(n + 1))
            rng.shuffle(p)
            step = perm_matrix(p)
        m = mat_mul(m, step)
    return m


def random_point(rng: random.Random, n: int, denom: int = 60) -> SimplexPoint:
    w = [rng.randint(0, denom) for _ in range(n + 1)]
    if sum(w) == 0:
        w[0] = 1
    return SimplexPoint.normalize(w)


def random_interior_point(rng: random.Random, n: int, denom: int = 60) -> SimplexPoint:
    return SimplexPoint.normalize([rng.randint(1, denom) for _ in range(n + 1)])


@st.composite
def sigma_matrices(draw, max_n=4, max_len=8):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    length = draw(st.integers(0, max_len))
    return random_sigma(random.Random(seed), n, length)


@st.composite
def perm_pairs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    p0 = tuple(draw(st.permutations(range(n + 1))))
    p1 = tuple(draw(st.permutations(range(n + 1))))
    return n, p0, p1


@pytest.fixture
def rng():
    return random.Random(20260416)


def frac_det(rows):
    """Determinant of a rational matrix by plain Gaussian elimination."""
    m = [[Fraction(v) for v in r] for r in rows]
    k = len(m)
    d = Fraction(1)
    for i in range(k):
        piv = next((r for r in range(i, k) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            d = -d
        d *= m[i][i]
        for r in range(i + 1, k):
            f = m[r][i] / m[i][i]
            for c in range(i, k):
                m[r][c] -= f * m[i][c]
    return d
