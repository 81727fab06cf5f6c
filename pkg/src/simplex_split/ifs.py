"""Simplex-splitting iterated function systems and their Gauss-type maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .linalg import (
    IntMatrix,
    SimplexPoint,
    cylinder_diameter,
    cylinder_measure,
    cylinder_vertices,
    det,
    inverse_unimodular,
    mat_mul,
    project,
)

Word = tuple[int, ...]


def parse_word(text: str) -> Word:
    return tuple(int(ch) for ch in text.strip())


def word_str(w: Sequence[int]) -> str:
    return "".join(str(a) for a in w)


def is_prefix(v: Sequence[int], w: Sequence[int]) -> bool:
    return len(v) <= len(w) and tuple(w[: len(v)]) == tuple(v)


def incomparable(v: Sequence[int], w: Sequence[int]) -> bool:
    return not is_prefix(v, w) and not is_prefix(w, v)


def words(alphabet: int, length: int) -> Iterable[Word]:
    """All words of the given length, in lexicographic order."""
    return product(range(alphabet), repeat=length)


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    N: IntMatrix
    F: IntMatrix
    R: IntMatrix
    L: IntMatrix


def generators(n: int) -> GeneratorSet:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    k = n + 1
    ident = [[int(i == j) for j in range(k)] for i in range(k)]
    N = [row[:] for row in ident]
    N[0][1] = 1
    cols = [tuple(r[j] for r in ident) for j in range(k)]
    F = IntMatrix.from_columns([cols[1], cols[0]] + cols[2:])
    R = IntMatrix.from_columns(cols[1:] + cols[:1])
    N = IntMatrix(tuple(map(tuple, N)))
    L = mat_mul(mat_mul(F, N), F)
    return GeneratorSet(n, N, F, R, L)


def perm_matrix(p: Sequence[int]) -> IntMatrix:
    """Permutation matrix sending e_j to e_{p[j]}."""
    k = len(p)
    return IntMatrix(tuple(tuple(int(p[j] == i) for j in range(k)) for i in range(k)))


def perm_of_matrix(m: IntMatrix) -> tuple[int, ...]:
    if not m.is_permutation():
        raise ValueError(f"{m} is not a permutation matrix")
    return tuple(col.index(1) for col in m.columns())


class Ifs:
    """Finite list of branch matrices acting on the n-simplex."""

    def __init__(self, branches: Sequence[IntMatrix], name: str = ""):
        branches = tuple(branches)
        if not branches:
            raise ValueError("an IFS needs at least one branch")
        order = branches[0].order
        for b in branches:
            if b.order != order:
                raise ValueError("branches have different orders")
            if not b.in_sigma():
                raise ValueError(f"branch {b} is not nonnegative unimodular")
            if b.is_permutation():
                raise ValueError(f"branch {b} is invertible in the monoid")
        self.branches = branches
        self.name = name

    @property
    def n(self) -> int:
        return self.branches[0].order - 1

    @property
    def m(self) -> int:
        return len(self.branches)

    @cached_property
    def inverses(self) -> tuple[IntMatrix, ...]:
        return tuple(inverse_unimodular(b) for b in self.branches)

    def __repr__(self):
        return f"Ifs({self.name or list(map(str, self.branches))})"

    def measures(self) -> list[Fraction]:
        return [cylinder_measure(b) for b in self.branches]

    def is_simplex_splitting(self) -> bool:
        """Measures add up to 1 and no two cylinders share an interior point.

        Interior-disjointness is tested at the barycenter of the vertices the
        two cylinders have in common; full polytope intersection is not
        attempted.
        """
        if sum(self.measures()) != 1:
            return False
        verts = [cylinder_vertices(b) for b in self.branches]
        for a in range(self.m):
            for b in range(a + 1, self.m):
                shared = [v for v in verts[a] if v in verts[b]]
                if not shared:
                    continue
                k = self.n + 1
                bary = SimplexPoint.normalize(
                    [sum(v[i] for v in shared) for i in range(k)]
                )
                if self._interior(a, bary) and self._interior(b, bary):
                    return False
        return True

    def _interior(self, a: int, x: SimplexPoint) -> bool:
        return all(c > 0 for c in self.inverses[a].apply(x.coords))

    def contains(self, a: int, x: SimplexPoint) -> bool:
        return all(c >= 0 for c in self.inverses[a].apply(x.coords))

    def branches_containing(self, x: SimplexPoint) -> list[int]:
        """Every digit whose cylinder contains x (multivalued diagnostic)."""
        return [a for a in range(self.m) if self.contains(a, x)]

    def branch_of(self, x: SimplexPoint) -> int:
        for a in range(self.m):
            if self.contains(a, x):
                return a
        raise ValueError(f"{x} lies in no cylinder; the IFS does not cover the simplex")

    def gauss_step(self, x: SimplexPoint) -> tuple[int, SimplexPoint]:
        a = self.branch_of(x)
        return a, project(self.inverses[a], x)

    def expand(self, x: SimplexPoint, t: int) -> Word:
        out = []
        for _ in range(t):
            a, x = self.gauss_step(x)
            out.append(a)
        return tuple(out)

    def cylinder_of_word(self, w: Sequence[int]) -> IntMatrix:
        m = IntMatrix.identity(self.n + 1)
        for a in w:
            if not 0 <= a < self.m:
                raise ValueError(f"digit {a} outside alphabet of size {self.m}")
            m = mat_mul(m, self.branches[a])
        return m

    def pi_approx(self, w: Sequence[int]) -> tuple[list[SimplexPoint], Fraction]:
        """Vertices and diameter of the cylinder of w; brackets every coding point."""
        c = self.cylinder_of_word(w)
        return cylinder_vertices(c), cylinder_diameter(c)

    def cylinders(self, depth: int) -> Iterable[tuple[Word, IntMatrix]]:
        level = [((), IntMatrix.identity(self.n + 1))]
        for _ in range(depth):
            level = [
                (w + (a,), mat_mul(c, b))
                for w, c in level
                for a, b in enumerate(self.branches)
            ]
        return level


@dataclass(frozen=True)
class SplitPair:
    """Binary split ``(A0, A1) = (N P0, L P1)`` along the edge <e0, e1>."""

    p0: tuple[int, ...]
    p1: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        k = len(self.p0)
        if len(self.p1) != k or k < 2:
            raise ValueError("permutations must have equal length >= 2")
        for p in (self.p0, self.p1):
            if sorted(p) != list(range(k)):
                raise ValueError(f"{p} is not a permutation of 0..{k - 1}")

    @property
    def n(self) -> int:
        return len(self.p0) - 1

    @cached_property
    def a0(self) -> IntMatrix:
        return mat_mul(generators(self.n).N, perm_matrix(self.p0))

    @cached_property
    def a1(self) -> IntMatrix:
        return mat_mul(generators(self.n).L, perm_matrix(self.p1))

    @property
    def matrices(self) -> tuple[IntMatrix, IntMatrix]:
        return self.a0, self.a1

    @cached_property
    def ifs(self) -> Ifs:
        return Ifs(self.matrices, self.name)

    @classmethod
    def from_matrices(cls, a0: IntMatrix, a1: IntMatrix, name: str = "") -> "SplitPair":
        g = generators(a0.order - 1)
        p0 = perm_of_matrix(mat_mul(inverse_unimodular(g.N), a0))
        p1 = perm_of_matrix(mat_mul(inverse_unimodular(g.L), a1))
        return cls(p0, p1, name)

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.p0, self.p1


def pair_from_perms(n: int, p0: Sequence[int], p1: Sequence[int]) -> SplitPair:
    if len(p0) != n + 1:
        raise ValueError(f"permutation length {len(p0)} does not match n={n}")
    return SplitPair(tuple(p0), tuple(p1))


def monkemeyer(n: int) -> SplitPair:
    g = generators(n)
    m0 = g.N @ g.F @ g.R
    m1 = g.L @ g.R
    return SplitPair.from_matrices(m0, m1, "monkemeyer")


VARIANTS = ("mono", "op", "or")


def farey_variants(n: int) -> dict[str, SplitPair]:
    """The three contractive algorithms: (M0,M1), (M0,M1F), (M0F,M1)."""
    g = generators(n)
    m = monkemeyer(n)
    return {
        "mono": m,
        "op": SplitPair.from_matrices(m.a0, m.a1 @ g.F, "op"),
        "or": SplitPair.from_matrices(m.a0 @ g.F, m.a1, "or"),
    }


def example5() -> Ifs:
    # The middle matrix has bottom row (0, 1, 1): this is the branch on
    # {x1 smallest}, which makes the three cylinders tile the triangle.
    a0 = IntMatrix(((1, 0, 0), (1, 1, 0), (1, 0, 1)))
    a1 = IntMatrix(((1, 1, 0), (0, 1, 0), (0, 1, 1)))
    a2 = IntMatrix(((1, 0, 1), (0, 1, 1), (0, 0, 1)))
    return Ifs((a0, a1, a2), "example5")


def sign(v: int) -> int:
    return (v > 0) - (v < 0)


def orientation(pair: SplitPair) -> tuple[int, int]:
    """Determinant signs of the branches (the G-branches are the inverses)."""
    return sign(det(pair.a0)), sign(det(pair.a1))


def shared_face_vertices(n: int) -> list[tuple[int, ...]]:
    """Integer vectors spanning the common face of N[simplex] and L[simplex]."""
    k = n + 1
    mid = tuple(1 if i < 2 else 0 for i in range(k))
    return [mid] + [tuple(int(i == j) for i in range(k)) for j in range(2, k)]


def is_continuous(pair: SplitPair) -> bool:
    """Whether both inverse branches agree on the face shared by the two cylinders.

    Inverse images of the face vertices are unit vectors, so projective and
    linear agreement coincide and checking vertices suffices.
    """
    inv0, inv1 = pair.ifs.inverses
    for w in shared_face_vertices(pair.n):
        x = SimplexPoint.normalize(w)
        if project(inv0, x) != project(inv1, x):
            return False
    return True


def unit_interval_embed(x) -> SimplexPoint:
    """[0,1] -> 1-simplex, inverse of (x0, x1) -> 1 - x0."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{x} not in [0, 1]")
    return SimplexPoint((1 - x, x))


def unit_interval_project(p: SimplexPoint) -> Fraction:
    if len(p) != 2:
        raise ValueError("the unit-interval identification needs n = 1")
    return 1 - p[0]


def partial_quotients_from_digits(w: Sequence[int]) -> list[int]:
    """Decode a 1-D Farey itinerary ``0^(a1-1) 1 0^(a2-1) 1 ...`` into [a1, a2, ...].

    Only blocks closed by a 1 are decoded; the trailing run of zeros is the
    fixed tail at the vertex e0.
    """
    out = []
    run = 0
    for a in w:
        if a == 0:
            run += 1
        else:
            out.append(run + 1)
            run = 0
    return out
