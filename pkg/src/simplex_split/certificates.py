"""Incidence graphs of split pairs and non-contractivity certificates.

Graph arrows follow the graph-directed IFS convention: a c-edge ``i -> j``
means branch c sends the vertex e_j to e_i.  A path spelling the word v from
i to j therefore says that column j of A_v is exactly e_i.

Certificates come in four kinds, each a finite witness that some nested
cylinder chain keeps two distinct points:

* ``C1``: one word whose matrix fixes two vertices.
* ``C2``: two incomparable words whose matrices fix the same vertex.
* ``C3``: one word whose matrix fixes a vertex and has spectral radius > 1.
* ``C4``: one word whose matrix has a disconnected support graph.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .ifs import Ifs, SplitPair, Word, incomparable, word_str
from .linalg import (
    IntMatrix,
    fixed_vertices,
    is_graph_disconnected,
    mat_mul,
    scc,
    spectral_radius_gt_one,
    support_components,
)

DEFAULT_DEPTH = 20
DEFAULT_EPSILON = Fraction(1, 16)
MAX_CYLINDERS = 2**23
_CHUNK = 2**15


def default_max_word_len(n: int) -> int:
    return 2 * (n + 1)


# --- incomplete incidence graph -------------------------------------------


@dataclass(frozen=True)
class IncompleteGraph:
    n: int
    succ: tuple[tuple[int | None, ...], tuple[int | None, ...]]
    h: tuple[int, int]

    def edges(self, color: int) -> set[tuple[int, int]]:
        return {(i, j) for i, j in enumerate(self.succ[color]) if j is not None}

    def completed_edges(self, color: int) -> set[tuple[int, int]]:
        return self.edges(color) | {(0, self.h[color]), (1, self.h[color])}

    def walk(self, i: int, v: Sequence[int]) -> int | None:
        for a in v:
            i = self.succ[a][i]
            if i is None:
                return None
        return i


def _branch_edges(a: IntMatrix) -> tuple[tuple[int | None, ...], int]:
    k = a.order
    h = None
    succ: list[int | None] = [None] * k
    for j, col in enumerate(a.columns()):
        support = [i for i, v in enumerate(col) if v]
        if len(support) == 1 and col[support[0]] == 1:
            succ[support[0]] = j
        elif h is None:
            h = j
        else:
            raise ValueError(f"{a} has more than one non-unit column")
    if h is None:
        raise ValueError(f"{a} is a permutation matrix")
    return tuple(succ), h


def incomplete_graph(pair: SplitPair) -> IncompleteGraph:
    s0, h0 = _branch_edges(pair.a0)
    s1, h1 = _branch_edges(pair.a1)
    return IncompleteGraph(pair.n, (s0, s1), (h0, h1))


def occurs(g: IncompleteGraph, i: int, v: Sequence[int], j: int) -> bool:
    return g.walk(i, v) == j


def loops_for_word(g: IncompleteGraph, v: Sequence[int]) -> set[int]:
    return {i for i in range(g.n + 1) if g.walk(i, v) == i}


# --- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    kind: str
    words: tuple[Word, ...]
    nodes: tuple[int, ...] = ()
    justification: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "words": [word_str(w) for w in self.words],
            "nodes": list(self.nodes),
            "justification": self.justification,
        }


def _graph_levels(g: IncompleteGraph, max_len: int):
    """Yield (word, positions) by increasing length, then lexicographically.

    ``positions[i]`` is where the path from node i ends, None if it dies.
    Words along which every path has died are pruned.
    """
    level = [((), tuple(range(g.n + 1)))]
    for _ in range(max_len):
        nxt = []
        for w, pos in level:
            for a in (0, 1):
                moved = tuple(None if p is None else g.succ[a][p] for p in pos)
                if any(p is not None for p in moved):
                    nxt.append((w + (a,), moved))
        yield from nxt
        level = nxt


def find_c1(g: IncompleteGraph, max_len: int) -> Certificate | None:
    for w, pos in _graph_levels(g, max_len):
        loops = [i for i, p in enumerate(pos) if p == i]
        if len(loops) >= 2:
            return Certificate(
                "C1", (w,), tuple(loops[:2]), {"loop_nodes": loops}
            )
    return None


def find_c2(g: IncompleteGraph, max_len: int) -> Certificate | None:
    loops: dict[int, list[Word]] = {}
    for w, pos in _graph_levels(g, max_len):
        for i, p in enumerate(pos):
            if p == i:
                loops.setdefault(i, []).append(w)
    best = None
    for i, ws in loops.items():
        for x in range(len(ws)):
            for y in range(x + 1, len(ws)):
                v, w = ws[x], ws[y]
                if not incomparable(v, w):
                    continue
                key = (len(v) + len(w), (len(v), v), (len(w), w), i)
                if best is None or key < best[0]:
                    best = (key, v, w, i)
    if best is None:
        return None
    _, v, w, i = best
    return Certificate("C2", (v, w), (i,), {"common_prefix": _lcp(v, w)})


def _lcp(v: Sequence[int], w: Sequence[int]) -> str:
    k = 0
    while k < min(len(v), len(w)) and v[k] == w[k]:
        k += 1
    return word_str(v[:k])


def _as_ifs(obj: Union[SplitPair, Ifs]) -> Ifs:
    return obj.ifs if isinstance(obj, SplitPair) else obj


def _matrix_levels(ifs: Ifs, max_len: int):
    level = [((), IntMatrix.identity(ifs.n + 1))]
    for _ in range(max_len):
        level = [
            (w + (a,), mat_mul(m, b))
            for w, m in level
            for a, b in enumerate(ifs.branches)
        ]
        yield from level


def _c3_witness(w: Word, m: IntMatrix) -> Certificate | None:
    fixed = fixed_vertices(m)
    if fixed and spectral_radius_gt_one(m):
        bad = [
            sorted(c.nodes)
            for c in scc(m).components
            if not c.is_trivial and not c.is_cyclic_permutation
        ]
        node = min(fixed)
        return Certificate("C3", (w,), (node,), {"fixed_vertex": node, "expanding_scc": bad[0]})
    return None


def _c4_witness(w: Word, m: IntMatrix) -> Certificate | None:
    if is_graph_disconnected(m):
        parts = [sorted(p) for p in support_components(m)]
        return Certificate("C4", (w,), (), {"parts": parts})
    return None


def find_c3(obj: Union[SplitPair, Ifs], max_len: int) -> Certificate | None:
    for w, m in _matrix_levels(_as_ifs(obj), max_len):
        cert = _c3_witness(w, m)
        if cert:
            return cert
    return None


def find_c4(obj: Union[SplitPair, Ifs], max_len: int) -> Certificate | None:
    for w, m in _matrix_levels(_as_ifs(obj), max_len):
        cert = _c4_witness(w, m)
        if cert:
            return cert
    return None


def word_certificate(obj: Union[SplitPair, Ifs], w: Sequence[int]) -> Certificate | None:
    """Matrix-level witness that the chain of w^t cylinders keeps two points."""
    w = tuple(w)
    m = _as_ifs(obj).cylinder_of_word(w)
    fixed = sorted(fixed_vertices(m))
    if len(fixed) >= 2:
        return Certificate("C1", (w,), tuple(fixed[:2]), {"loop_nodes": fixed})
    return _c4_witness(w, m) or _c3_witness(w, m)


def certify_noncontractive(pair: SplitPair, max_len: int) -> Certificate | None:
    """Cheapest first: C1 and C2 on the graph, then C4 and C3 on matrices."""
    g = incomplete_graph(pair)
    return (
        find_c1(g, max_len)
        or find_c2(g, max_len)
        or find_c4(pair, max_len)
        or find_c3(pair, max_len)
    )


def verify_certificate(obj: Union[SplitPair, Ifs], cert: Certificate) -> bool:
    """Re-check a certificate from freshly multiplied matrices, ignoring graphs."""
    ifs = _as_ifs(obj)
    mats = [ifs.cylinder_of_word(w) for w in cert.words]
    if any(len(w) == 0 for w in cert.words):
        return False
    if cert.kind == "C1":
        i, j = cert.nodes
        return i != j and {i, j} <= fixed_vertices(mats[0])
    if cert.kind == "C2":
        (i,) = cert.nodes
        v, w = cert.words
        if not incomparable(v, w):
            return False
        k = len(_lcp(v, w))
        # cylinders of v and w sit inside the disjoint branch cylinders v[k] != w[k]
        if not ifs.is_simplex_splitting() or v[k] == w[k]:
            return False
        return i in fixed_vertices(mats[0]) and i in fixed_vertices(mats[1])
    if cert.kind == "C3":
        (i,) = cert.nodes
        return i in fixed_vertices(mats[0]) and spectral_radius_gt_one(mats[0])
    if cert.kind == "C4":
        return is_graph_disconnected(mats[0])
    return False


# --- diameter evidence ------------------------------------------------------


def _level_max(mats: np.ndarray) -> Fraction:
    s = mats.sum(axis=1)  # column sums, shape (batch, k)
    k = mats.shape[1]
    nums, dens, vals = [], [], []
    for i in range(k):
        for j in range(i + 1, k):
            si, sj = s[:, i], s[:, j]
            num = np.abs(mats[:, :, i] * sj[:, None] - mats[:, :, j] * si[:, None]).sum(axis=1)
            den = si * sj
            nums.append(num)
            dens.append(den)
            vals.append(num.astype(float) / den.astype(float))
    vals = np.stack(vals)
    top = vals.max()
    # exact comparison among the float near-maxima
    cand = np.argwhere(vals >= top * (1 - 1e-9))
    return max(Fraction(int(nums[p][b]), int(dens[p][b])) for p, b in cand)


def diameter_profile(obj: Union[SplitPair, Ifs], depth: int) -> list[Fraction]:
    """Max cylinder diameter at each depth 0..depth (entry 0 is the simplex)."""
    ifs = _as_ifs(obj)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if ifs.m**depth > MAX_CYLINDERS:
        raise MemoryError(f"{ifs.m}^{depth} cylinders exceed the cap {MAX_CYLINDERS}")
    k = ifs.n + 1
    colmax = max(max(sum(c) for c in b.columns()) for b in ifs.branches)
    exact_ok = 2 * k * colmax ** (2 * depth) < 2**62
    dtype = np.int64 if exact_ok else object
    branches = [np.array(b.tolist(), dtype=dtype) for b in ifs.branches]
    best: list[Fraction | None] = [None] * (depth + 1)

    def walk(batch: np.ndarray, d: int):
        top = _level_max(batch)
        if best[d] is None or top > best[d]:
            best[d] = top
        if d == depth:
            return
        children = np.concatenate([batch @ b for b in branches])
        for start in range(0, len(children), _CHUNK):
            walk(children[start:start + _CHUNK], d + 1)

    walk(np.eye(k, dtype=dtype)[None, :, :], 0)
    return best


def is_non_increasing(profile: Sequence[Fraction]) -> bool:
    return all(b <= a for a, b in zip(profile, profile[1:]))


# --- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    tag: str  # "NonContractive" | "ContractiveEvidence" | "Unknown"
    certificate: Certificate | None
    profile: tuple[Fraction, ...] | None
    max_word_len: int
    depth: int
    epsilon: Fraction

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "diameter_profile": [str(x) for x in self.profile] if self.profile else None,
            "parameters": {
                "max_word_len": self.max_word_len,
                "depth": self.depth,
                "epsilon": str(self.epsilon),
            },
        }


def classify(
    pair: SplitPair,
    max_len: int | None = None,
    depth: int = DEFAULT_DEPTH,
    epsilon: Fraction = DEFAULT_EPSILON,
) -> Verdict:
    if max_len is None:
        max_len = default_max_word_len(pair.n)
    cert = certify_noncontractive(pair, max_len)
    if cert is not None:
        return Verdict("NonContractive", cert, None, max_len, depth, epsilon)
    profile = tuple(diameter_profile(pair, depth))
    ok = is_non_increasing(profile) and profile[-1] < epsilon
    return Verdict(
        "ContractiveEvidence" if ok else "Unknown", None, profile, max_len, depth, epsilon
    )


# --- shapes -----------------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    labels: tuple[str, str]
    chain0: tuple[int, ...]  # from the head h0 to node 1
    chain1: tuple[int, ...]  # from the head h1 to node 0
    k: tuple[int, ...]  # k_2..k_n: nodes >= 2 along chain1, read from its end
    relabeling: tuple[int, ...]
    backtracks: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "chain0": list(self.chain0),
            "chain1": list(self.chain1),
            "k": list(self.k),
            "relabeling": list(self.relabeling),
            "backtracks": [list(e) for e in self.backtracks],
        }


def _chain(succ: Sequence[int | None], head: int) -> list[int]:
    out = [head]
    seen = {head}
    while succ[out[-1]] is not None:
        nxt = succ[out[-1]]
        if nxt in seen:
            break
        out.append(nxt)
        seen.add(nxt)
    return out


def _label(succ, head, end, other, prefix) -> str:
    """'p' for chain plus an isolated loop at ``other``, 'h' for a full chain."""
    chain = _chain(succ, head)
    k = len(succ)
    if chain[-1] != end or succ[end] is not None:
        return "nonstandard"
    if len(chain) == k:
        return prefix + "h"
    if len(chain) == k - 1 and other not in chain and succ[other] == other:
        return prefix + "p"
    return "nonstandard"


def shape(pair: SplitPair) -> Shape:
    """Shape labels after relabeling 2..n to decrease along the 0-chain."""
    from .symmetry import SymmetryElement, act

    n = pair.n
    g = incomplete_graph(pair)
    chain0 = _chain(g.succ[0], g.h[0])
    order = [v for v in chain0 if v >= 2]
    relabel = list(range(n + 1))
    if sorted(order) == list(range(2, n + 1)):
        for pos, v in enumerate(order):
            relabel[v] = n - pos
    h = tuple(relabel)
    pair = SplitPair(*act(SymmetryElement(False, h), pair.key()))
    g = incomplete_graph(pair)
    lab0 = _label(g.succ[0], g.h[0], 1, 0, "0")
    lab1 = _label(g.succ[1], g.h[1], 0, 1, "1")
    chain0 = tuple(_chain(g.succ[0], g.h[0]))
    chain1 = tuple(_chain(g.succ[1], g.h[1]))
    k = tuple(v for v in reversed(chain1) if v >= 2)
    backtracks = tuple(
        (i, j) for i, j in sorted(g.edges(1)) if i >= 2 and j >= 2 and i < j
    )
    return Shape((lab0, lab1), chain0, chain1, k, h, backtracks)


# --- exhaustive verification ------------------------------------------------


def _classify_rep(args):
    rep, max_len, depth = args
    pair = SplitPair(*rep)
    cert = certify_noncontractive(pair, max_len)
    if cert is not None:
        return rep, cert, verify_certificate(pair, cert), None
    return rep, None, None, diameter_profile(pair, depth)


def worker_count() -> int:
    env = os.environ.get("SIMPLEX_SPLIT_THREADS")
    if env:
        return max(1, int(env))
    return 1


def verify_theorem(
    n: int,
    max_len: int | None = None,
    depth: int = DEFAULT_DEPTH,
    epsilon: Fraction = DEFAULT_EPSILON,
    workers: int | None = None,
) -> dict:
    """Certify every orbit of split pairs; report the ones no certificate kills."""
    from .symmetry import enumerate_orbits, farey_orbit_ids

    if max_len is None:
        max_len = default_max_word_len(n)
    report = enumerate_orbits(n)
    jobs = [(rep, max_len, depth) for rep in report.representatives]
    workers = workers or worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_classify_rep, jobs, chunksize=8))
    else:
        results = [_classify_rep(j) for j in jobs]

    certified, survivors = [], []
    for rep, cert, ok, profile in results:
        canon = {"p0": list(rep[0]), "p1": list(rep[1])}
        if cert is not None:
            certified.append({"canonical_pair": canon, "certificate": cert.to_json(), "reverified": ok})
        else:
            tag = (
                "ContractiveEvidence"
                if is_non_increasing(profile) and profile[-1] < epsilon
                else "Unknown"
            )
            survivors.append(
                {
                    "canonical_pair": canon,
                    "diameter_profile": [str(x) for x in profile],
                    "verdict": tag,
                }
            )
    farey = farey_orbit_ids(n)
    survivor_set = {(tuple(s["canonical_pair"]["p0"]), tuple(s["canonical_pair"]["p1"])) for s in survivors}
    return {
        "schema_version": 1,
        "n": n,
        "orbit_count": report.count,
        "certified": certified,
        "survivors": survivors,
        "farey_orbits": {k: {"p0": list(v[0]), "p1": list(v[1])} for k, v in farey.items()},
        "survivors_match_farey": survivor_set == set(farey.values()),
        "all_certificates_reverified": all(c["reverified"] for c in certified),
        "parameters": {"max_word_len": max_len, "depth": depth, "epsilon": str(epsilon)},
    }
