"""The S2 x S_{n-1} action on split pairs and its orbits.

Permutations are one-line tuples ``p`` with ``P e_j = e_{p[j]}``, so matrix
products correspond to composition ``(p*q)[j] = p[q[j]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .ifs import SplitPair, farey_variants, generators, perm_matrix
from .linalg import mat_mul

Permutation = tuple[int, ...]
PermPair = tuple[Permutation, Permutation]

# pair space for n=5 is 518400; n=6 would be 25.4M
MAX_ENUMERATION_N = 5


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def conjugate(h: Sequence[int], p: Sequence[int]) -> Permutation:
    """h p h^-1."""
    return compose(compose(h, p), inverse(h))


def flip_perm(n: int) -> Permutation:
    return (1, 0) + tuple(range(2, n + 1))


@dataclass(frozen=True)
class SymmetryElement:
    flip: bool
    h: Permutation

    def __post_init__(self):
        if len(self.h) < 2 or self.h[0] != 0 or self.h[1] != 1:
            raise ValueError(f"{self.h} must fix 0 and 1")
        if sorted(self.h) != list(range(len(self.h))):
            raise ValueError(f"{self.h} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "SymmetryElement":
        return cls(False, tuple(range(n + 1)))

    def __mul__(self, other: "SymmetryElement") -> "SymmetryElement":
        # F commutes with every h fixing 0 and 1, so the group is a direct product
        return SymmetryElement(self.flip != other.flip, compose(self.h, other.h))


def symmetry_group(n: int) -> list[SymmetryElement]:
    """All 2 (n-1)! elements, h ranging over permutations of {2..n}."""
    out = []
    for flip in (False, True):
        for tail in permutations(range(2, n + 1)):
            out.append(SymmetryElement(flip, (0, 1) + tail))
    return out


def act(g: SymmetryElement, pair: PermPair) -> PermPair:
    p0, p1 = (conjugate(g.h, p) for p in pair)
    if g.flip:
        f = flip_perm(len(g.h) - 1)
        p0, p1 = conjugate(f, p1), conjugate(f, p0)
    return p0, p1


def act_on_matrices(g: SymmetryElement, pair: SplitPair) -> SplitPair:
    """The same action carried out on the matrices (A0, A1)."""
    n = pair.n
    H = perm_matrix(g.h)
    Hinv = H.transpose()
    a0 = mat_mul(mat_mul(H, pair.a0), Hinv)
    a1 = mat_mul(mat_mul(H, pair.a1), Hinv)
    if g.flip:
        F = generators(n).F
        a0, a1 = mat_mul(mat_mul(F, a1), F), mat_mul(mat_mul(F, a0), F)
    return SplitPair.from_matrices(a0, a1)


def orbit(pair: PermPair) -> set[PermPair]:
    n = len(pair[0]) - 1
    return {act(g, pair) for g in symmetry_group(n)}


def canonical(pair: PermPair) -> PermPair:
    return min(orbit(pair))


def equivalent(p: PermPair, q: PermPair) -> bool:
    return canonical(p) == canonical(q)


def farey_orbit_ids(n: int) -> dict[str, PermPair]:
    return {k: canonical(v.key()) for k, v in farey_variants(n).items()}


@dataclass(frozen=True)
class OrbitReport:
    n: int
    count: int
    representatives: tuple[PermPair, ...]
    sizes: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "count": self.count,
            "orbits": [
                {"p0": list(p0), "p1": list(p1), "size": s}
                for (p0, p1), s in zip(self.representatives, self.sizes)
            ],
        }


def enumerate_orbits(n: int, max_n: int = MAX_ENUMERATION_N) -> OrbitReport:
    """Full orbit decomposition of S_{n+1}^2.

    Permutations are indexed in lexicographic order, so scanning pair ids
    upward meets each orbit first at its lexicographically least member,
    which is taken as the canonical representative.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if n > max_n:
        raise MemoryError(
            f"n={n} exceeds the enumeration cap {max_n}: "
            f"{math.factorial(n + 1) ** 2} pairs"
        )
    perms = list(permutations(range(n + 1)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    f = flip_perm(n)
    flip_table = [index[conjugate(f, p)] for p in perms]
    h_tables = [
        [index[conjugate(g.h, p)] for p in perms]
        for g in symmetry_group(n)
        if not g.flip
    ]
    seen = bytearray(size * size)
    reps = []
    sizes = []
    for pid in range(size * size):
        if seen[pid]:
            continue
        a, b = divmod(pid, size)
        members = set()
        for t in h_tables:
            ha, hb = t[a], t[b]
            members.add(ha * size + hb)
            members.add(flip_table[hb] * size + flip_table[ha])
        for m in members:
            seen[m] = 1
        reps.append((perms[a], perms[b]))
        sizes.append(len(members))
    return OrbitReport(n, len(reps), tuple(reps), tuple(sizes))

