from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings

from simplex_split import certificates as cert
from simplex_split.ifs import Ifs, SplitPair, example5, farey_variants, monkemeyer
from simplex_split.linalg import IntMatrix
from simplex_split.symmetry import enumerate_orbits, farey_orbit_ids

from conftest import perm_pairs

COUNTEREXAMPLE = SplitPair((1, 2, 0), (2, 1, 0))

# n=2 pairs whose cheapest certificate is of the given kind
C1_PAIR = SplitPair((0, 1, 2), (0, 1, 2))
C2_PAIR = SplitPair((1, 2, 0), (1, 2, 0))
C4_PAIR = SplitPair((0, 2, 1), (1, 0, 2))


def np_mat(m: IntMatrix):
    return np.array(m.tolist(), dtype=float)


def float_diameter(a):
    cols = a / a.sum(axis=0)
    k = a.shape[0]
    return max(np.abs(cols[:, i] - cols[:, j]).sum() for i in range(k) for j in range(i + 1, k))


def persistent_floor(m: IntMatrix, steps=40):
    """Smallest diameter of the cylinders of w, w^2, ..., w^steps (float)."""
    a = np_mat(m)
    p = np.eye(a.shape[0])
    out = 2.0
    for _ in range(steps):
        p = a @ p
        p = p / p.sum(axis=0)  # column scaling does not move the cylinder
        out = min(out, float_diameter(p))
    return out


class TestIncompleteGraph:
    EXPECTED = {
        "mono": ({(0, 0), (4, 3), (3, 2), (2, 1)}, {(4, 3), (3, 2), (2, 1), (1, 0)}),
        "op": ({(0, 0), (4, 3), (3, 2), (2, 1)}, {(4, 3), (3, 2), (2, 0), (1, 1)}),
        "or": ({(4, 3), (3, 2), (2, 0), (0, 1)}, {(4, 3), (3, 2), (2, 1), (1, 0)}),
    }

    @pytest.mark.parametrize("variant", ["mono", "op", "or"])
    def test_n4_drawings(self, variant):
        g = cert.incomplete_graph(farey_variants(4)[variant])
        assert (g.edges(0), g.edges(1)) == self.EXPECTED[variant]

    def test_occurs(self):
        g = cert.incomplete_graph(monkemeyer(4))
        assert cert.occurs(g, 4, (0, 0), 2)
        assert not cert.occurs(g, 4, (0, 0), 1)

    def test_completed_m1_loop(self):
        # full loop through every node plus the shortcut from 1 to the head
        g = cert.incomplete_graph(monkemeyer(4))
        assert g.h[1] == 4
        assert g.completed_edges(1) == {(4, 3), (3, 2), (2, 1), (1, 0), (0, 4), (1, 4)}

    @given(perm_pairs())
    @settings(max_examples=100, deadline=None)
    def test_matches_matrix_columns(self, pp):
        _, p0, p1 = pp
        pair = SplitPair(p0, p1)
        g = cert.incomplete_graph(pair)
        k = pair.n + 1
        for length in range(1, 7):
            for v in product((0, 1), repeat=length):
                m = pair.ifs.cylinder_of_word(v)
                for i in range(k):
                    for j in range(k):
                        unit = tuple(int(r == i) for r in range(k))
                        assert cert.occurs(g, i, v, j) == (m.column(j) == unit)

    def test_loops_for_word(self):
        g = cert.incomplete_graph(monkemeyer(3))
        assert cert.loops_for_word(g, (0,)) == {0}


class TestSearch:
    def test_c1(self):
        c = cert.find_c1(cert.incomplete_graph(C1_PAIR), 6)
        assert c.kind == "C1" and c.words == ((0,),) and set(c.nodes) == {0, 2}
        assert cert.verify_certificate(C1_PAIR, c)

    def test_c2(self):
        g = cert.incomplete_graph(C2_PAIR)
        assert cert.find_c1(g, 6) is None
        c = cert.find_c2(g, 6)
        assert c.kind == "C2" and c.words == ((0, 0, 1), (0, 1, 1))
        assert cert.verify_certificate(C2_PAIR, c)

    def test_c4(self):
        c = cert.certify_noncontractive(C4_PAIR, 6)
        assert c.kind == "C4" and c.justification["parts"] == [[0, 1], [2]]
        assert cert.verify_certificate(C4_PAIR, c)

    def test_c3_counterexample(self):
        c = cert.certify_noncontractive(COUNTEREXAMPLE, 6)
        assert c.kind == "C3" and c.words == ((0, 1),)
        assert c.nodes == (0,) and c.justification["expanding_scc"] == [1, 2]
        assert COUNTEREXAMPLE.ifs.cylinder_of_word((0, 1)) == IntMatrix(((1, 0, 1), (0, 0, 1), (0, 1, 1)))
        assert cert.verify_certificate(COUNTEREXAMPLE, c)

    def test_farey_have_no_certificate(self):
        for n in (2, 3):
            for pair in farey_variants(n).values():
                assert cert.certify_noncontractive(pair, cert.default_max_word_len(n)) is None

    def test_forged_certificates_rejected(self):
        m = monkemeyer(2)
        assert not cert.verify_certificate(m, cert.Certificate("C1", ((0,),), (0, 2)))
        assert not cert.verify_certificate(m, cert.Certificate("C2", ((0,), (0, 0)), (0,)))
        assert not cert.verify_certificate(m, cert.Certificate("C3", ((0,),), (0,)))
        assert not cert.verify_certificate(m, cert.Certificate("C4", ((1, 0),)))
        assert not cert.verify_certificate(m, cert.Certificate("C9", ((1,),)))

    def test_word_certificate_example5(self):
        c = cert.word_certificate(example5(), (0, 1))
        assert c is not None and c.kind == "C3"
        assert cert.verify_certificate(example5(), c)


@pytest.mark.parametrize("n", [2, 3])
def test_certificates_sound(n):
    """Every orbit's certificate checked with floats, independently of the library."""
    for rep in enumerate_orbits(n).representatives:
        pair = SplitPair(*rep)
        c = cert.certify_noncontractive(pair, cert.default_max_word_len(n))
        if c is None:
            continue
        mats = [np_mat(pair.ifs.cylinder_of_word(w)) for w in c.words]
        if c.kind == "C2":
            (i,) = c.nodes
            assert all(np.array_equal(a[:, i], np.eye(n + 1)[i]) for a in mats)
            v, w = c.words
            assert not (v == w[: len(v)] or w == v[: len(w)])
            continue
        # C1, C3, C4: the cylinders of w^t never shrink below a positive floor
        assert persistent_floor(pair.ifs.cylinder_of_word(c.words[0])) > 1e-3, (rep, c)
        if c.kind == "C3":
            a = mats[0]
            assert max(abs(np.linalg.eigvals(a))) > 1 + 1e-6
            (i,) = c.nodes
            assert np.array_equal(a[:, i], np.eye(n + 1)[i])


class TestShape:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_farey(self, n):
        v = farey_variants(n)
        expect = {"mono": ("0p", "1h"), "op": ("0p", "1p"), "or": ("0h", "1h")}
        for name, pair in v.items():
            s = cert.shape(pair)
            assert s.labels == expect[name]
            assert s.k == tuple(range(2, n + 1))
            assert s.backtracks == ()
        assert cert.shape(v["mono"]).chain1[-3:] == (2, 1, 0)
        assert cert.shape(v["or"]).chain0[-3:] == (2, 0, 1)

    def test_counterexample(self):
        assert cert.shape(COUNTEREXAMPLE).labels == ("0h", "1p")


def fraction_profile(ifs, depth):
    out = []
    level = [IntMatrix.identity(ifs.n + 1)]
    for d in range(depth + 1):
        best = Fraction(0)
        for m in level:
            cols = m.columns()
            pts = [[Fraction(x, sum(c)) for x in c] for c in cols]
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    best = max(best, sum(abs(a - b) for a, b in zip(pts[i], pts[j])))
        out.append(best)
        level = [m @ b for m in level for b in ifs.branches]
    return out


class TestDiameterProfile:
    @pytest.mark.parametrize("obj", [monkemeyer(2), monkemeyer(3), COUNTEREXAMPLE, example5(), farey_variants(3)["or"]])
    def test_matches_fraction_oracle(self, obj):
        ifs = obj.ifs if isinstance(obj, SplitPair) else obj
        assert cert.diameter_profile(obj, 6) == fraction_profile(ifs, 6)

    def test_monkemeyer_non_increasing(self):
        prof = cert.diameter_profile(monkemeyer(2), 14)
        assert prof[0] == 2 and cert.is_non_increasing(prof)

    def test_cap(self):
        with pytest.raises(MemoryError):
            cert.diameter_profile(monkemeyer(2), 40)
        with pytest.raises(ValueError):
            cert.diameter_profile(monkemeyer(2), -1)

    def test_object_dtype_fallback(self):
        # column sums of 10^6 overflow int64 by depth 3, forcing exact Python ints
        big = Ifs([IntMatrix(((1, 10**6), (0, 1))), IntMatrix(((1, 0), (10**6, 1)))])
        assert cert.diameter_profile(big, 3) == fraction_profile(big, 3)


class TestClassify:
    def test_certified(self):
        v = cert.classify(C1_PAIR)
        assert v.tag == "NonContractive" and v.profile is None

    def test_survivor_unknown_at_defaults(self):
        v = cert.classify(monkemeyer(2))
        assert v.tag == "Unknown" and len(v.profile) == cert.DEFAULT_DEPTH + 1

    def test_survivor_evidence_with_loose_epsilon(self):
        v = cert.classify(monkemeyer(2), depth=12, epsilon=Fraction(1, 1))
        assert v.tag == "ContractiveEvidence"
        assert v.to_json()["parameters"]["epsilon"] == "1"


@pytest.mark.parametrize("n,orbits", [(1, 3), (2, 21), (3, 160)])
def test_verify(n, orbits):
    doc = cert.verify_theorem(n, cert.default_max_word_len(n), 10, cert.DEFAULT_EPSILON)
    assert doc["orbit_count"] == orbits
    assert len(doc["survivors"]) == 3
    assert len(doc["certified"]) == orbits - 3
    assert doc["survivors_match_farey"] and doc["all_certificates_reverified"]
    got = {(tuple(s["canonical_pair"]["p0"]), tuple(s["canonical_pair"]["p1"])) for s in doc["survivors"]}
    assert got == set(farey_orbit_ids(n).values())


def test_verify_parallel_matches_serial():
    serial = cert.verify_theorem(2, None, 6, cert.DEFAULT_EPSILON, workers=1)
    pooled = cert.verify_theorem(2, None, 6, cert.DEFAULT_EPSILON, workers=2)
    assert pooled == serial
