"""Exact integer linear algebra for nonnegative unimodular matrices.

Matrices act on the standard simplex projectively, ``x -> Ax / |Ax|_1``.
Everything here is exact: entries are Python ints, points carry
``fractions.Fraction`` coordinates.  Floats never enter this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class NotUnimodularError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix, rows and columns indexed ``0..n``."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        k = len(rows)
        if k < 2:
            raise ValueError("matrix order must be at least 2")
        if any(len(r) != k for r in rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, order: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(order)) for i in range(order)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        k = len(columns)
        return cls(tuple(tuple(columns[j][i] for j in range(k)) for i in range(k)))

    @property
    def order(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.order)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def apply(self, x: Sequence) -> tuple:
        return tuple(sum(a * b for a, b in zip(r, x)) for r in self.rows)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for r in self.rows for v in r)

    def is_permutation(self) -> bool:
        if not all(v in (0, 1) for r in self.rows for v in r):
            return False
        return all(sum(r) == 1 for r in self.rows) and all(
            sum(c) == 1 for c in zip(*self.rows)
        )

    def in_sigma(self) -> bool:
        """Membership in the monoid of nonnegative matrices of determinant +-1."""
        return self.is_nonnegative() and det(self) in (1, -1)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_mul(self, other)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows) + "]"


def as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix(tuple(tuple(r) for r in a))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")
    cols = list(zip(*b.rows))
    return IntMatrix(
        tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a.rows)
    )


def mat_prod(mats: Iterable[IntMatrix], order: int) -> IntMatrix:
    return reduce(mat_mul, mats, IntMatrix.identity(order))


def det(a: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    m = [list(r) for r in a.rows]
    k = len(m)
    sign = 1
    prev = 1
    for i in range(k - 1):
        if m[i][i] == 0:
            for r in range(i + 1, k):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[i][i]
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                m[r][c] = (m[r][c] * piv - m[r][i] * m[i][c]) // prev
        prev = piv
    return sign * m[k - 1][k - 1]


def _minor(rows, i, j):
    return [r[:j] + r[j + 1:] for idx, r in enumerate(rows) if idx != i]


def inverse_unimodular(a: IntMatrix) -> IntMatrix:
    """Integer inverse of a determinant +-1 matrix, as adjugate / det."""
    d = det(a)
    if d not in (1, -1):
        raise NotUnimodularError(f"determinant {d} is not +-1")
    rows = [list(r) for r in a.rows]
    k = a.order
    adj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = _minor(rows, i, j)
            cof = (-1) ** (i + j) * (det(IntMatrix(minor)) if k > 2 else minor[0][0])
            adj[j][i] = cof
    return IntMatrix(tuple(tuple(v * d for v in r) for r in adj))


@dataclass(frozen=True)
class SimplexPoint:
    """Exact point of the standard simplex: nonnegative rationals summing to 1."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if any(c < 0 for c in coords):
            raise ValueError(f"negative coordinate in {self}")
        if sum(coords) != 1:
            raise ValueError(f"coordinates of {self} do not sum to 1")

    @classmethod
    def vertex(cls, i: int, order: int) -> "SimplexPoint":
        return cls(tuple(Fraction(int(j == i)) for j in range(order)))

    @classmethod
    def normalize(cls, v: Sequence) -> "SimplexPoint":
        s = sum(v)
        if s == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(Fraction(x) / s for x in v))

    @classmethod
    def parse(cls, text: str) -> "SimplexPoint":
        """Parse ``"1/3,1/3,1/3"``; floats are rejected."""
        parts = [p.strip() for p in text.split(",")]
        if any("." in p or "e" in p.lower() for p in parts):
            raise ValueError(f"point {text!r} must use exact fractions")
        return cls(tuple(Fraction(p) for p in parts))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def project(a: IntMatrix, x: SimplexPoint) -> SimplexPoint:
    y = a.apply(x.coords)
    if all(v == 0 for v in y):
        raise ValueError("matrix sends the point to zero")
    if any(v < 0 for v in y):
        raise ValueError("image leaves the nonnegative orthant")
    return SimplexPoint.normalize(y)


def cylinder_vertices(a: IntMatrix) -> list[SimplexPoint]:
    return [SimplexPoint.normalize(c) for c in a.columns()]


def column_sums(a: IntMatrix) -> tuple[int, ...]:
    return tuple(sum(c) for c in zip(*a.rows))


def cylinder_measure(a: IntMatrix) -> Fraction:
    """Lebesgue probability of ``a[simplex]``: 1 / product of column sums."""
    p = 1
    for s in column_sums(a):
        p *= s
    return Fraction(1, p)


def l1_distance(x: Sequence, y: Sequence) -> Fraction:
    return sum((abs(Fraction(a) - Fraction(b)) for a, b in zip(x, y)), Fraction(0))


def cylinder_diameter(a: IntMatrix) -> Fraction:
    # the diameter of a polytope is attained at a pair of vertices
    verts = cylinder_vertices(a)
    best = Fraction(0)
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            best = max(best, l1_distance(verts[i].coords, verts[j].coords))
    return best


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(int(v) for v in self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots_of_unity_cycles(cls, lengths: Iterable[int]) -> "IntPolynomial":
        """prod (x^c - 1) over the given cycle lengths."""
        p = cls((1,))
        for c in lengths:
            p = p * cls((-1,) + (0,) * (c - 1) + (1,))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if not self.coeffs or not other.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)


def char_poly(a: IntMatrix) -> IntPolynomial:
    """det(xI - A) by Faddeev-LeVerrier; every division is exact over Z."""
    k = a.order
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    m = IntMatrix.identity(k)
    ident = m
    c = 1
    for step in range(1, k + 1):
        am = mat_mul(a, m)
        tr = sum(am.rows[i][i] for i in range(k))
        q, r = divmod(-tr, step)
        assert r == 0, "non-integral Faddeev-LeVerrier coefficient"
        c = q
        coeffs[k - step] = c
        m = IntMatrix(
            tuple(
                tuple(am.rows[i][j] + c * ident.rows[i][j] for j in range(k))
                for i in range(k)
            )
        )
    return IntPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class SccComponent:
    nodes: frozenset[int]
    is_trivial: bool
    is_cyclic_permutation: bool
    period: int | None


@dataclass(frozen=True)
class SccDecomposition:
    components: tuple[SccComponent, ...]
    edges: frozenset[tuple[int, int]]  # condensation edges, by component index

    def component_of(self, node: int) -> int:
        for idx, comp in enumerate(self.components):
            if node in comp.nodes:
                return idx
        raise KeyError(node)


def incidence_edges(a: IntMatrix) -> list[tuple[int, int]]:
    """Edges ``j -> i`` for every positive entry in row i, column j."""
    k = a.order
    return [(j, i) for i in range(k) for j in range(k) if a.rows[i][j] > 0]


def _tarjan(k: int, succ: list[list[int]]) -> list[list[int]]:
    index = [None] * k
    low = [0] * k
    on_stack = [False] * k
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(k):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for p in range(pos, len(succ[v])):
                w = succ[v][p]
                if index[w] is None:
                    work.append((v, p + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return out


def _period(nodes: list[int], succ: list[list[int]]) -> int:
    members = set(nodes)
    level = {nodes[0]: 0}
    queue = [nodes[0]]
    g = 0
    for v in queue:
        for w in succ[v]:
            if w not in members:
                continue
            if w not in level:
                level[w] = level[v] + 1
                queue.append(w)
            else:
                g = gcd(g, level[v] + 1 - level[w])
    return abs(g)


def scc(a: IntMatrix) -> SccDecomposition:
    k = a.order
    succ: list[list[int]] = [[] for _ in range(k)]
    for j, i in incidence_edges(a):
        succ[j].append(i)
    comps = _tarjan(k, succ)
    where = {v: idx for idx, comp in enumerate(comps) for v in comp}
    result = []
    for comp in comps:
        members = set(comp)
        internal = [(j, i) for j in comp for i in succ[j] if i in members]
        trivial = len(comp) == 1 and not internal
        cyclic = (
            not trivial
            and len(internal) == len(comp)
            and all(a.rows[i][j] == 1 for j, i in internal)
        )
        period = None if trivial else _period(comp, succ)
        result.append(SccComponent(frozenset(comp), trivial, cyclic, period))
    cond = frozenset(
        (where[j], where[i]) for j in range(k) for i in succ[j] if where[j] != where[i]
    )
    return SccDecomposition(tuple(result), cond)


def spectral_radius_gt_one(a: IntMatrix) -> bool:
    """Exact test of rho(a) > 1 for a nonnegative integer matrix.

    rho is the max over strongly connected blocks.  An irreducible
    nonnegative integer block has rho <= 1 exactly when it is a 0/1
    single-cycle permutation block; any extra edge or entry >= 2 pushes
    rho above 1.
    """
    return any(not c.is_trivial and not c.is_cyclic_permutation for c in scc(a).components)


def fixed_vertices(a: IntMatrix) -> frozenset[int]:
    """Indices j whose vertex e_j is projectively fixed (column j is c*e_j, c > 0)."""
    out = []
    for j, col in enumerate(a.columns()):
        if col[j] > 0 and all(v == 0 for i, v in enumerate(col) if i != j):
            out.append(j)
    return frozenset(out)


def support_components(a: IntMatrix) -> list[frozenset[int]]:
    """Connected components of the undirected support graph."""
    k = a.order
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j, i in incidence_edges(a):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, set[int]] = {}
    for v in range(k):
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def is_graph_disconnected(a: IntMatrix) -> bool:
    return len(support_components(a)) >= 2
