import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import posets, spectral_maps
from ttg import spaces as S
from ttg.errors import (CapExceeded, HypothesisFailed, NonT0Error, NotMonotoneError,
                        PreconditionError, TTGError, UnknownPointError)
from ttg.fixtures import chain, fixtures, three_point_affinization, weak_not_spectral


def test_closure_is_taken_on_construction():
    X = S.FiniteSpectralSpace("abc", [("a", "b"), ("b", "c")])
    assert X.specializes("a", "c")
    assert X.closure(["b"]) == {"b", "c"}
    assert X.generalization(["b"]) == {"a", "b"}
    assert X.closed_points() == ["c"] and X.generic_points() == ["a"]
    assert X.covers() == [("a", "b"), ("b", "c")]


def test_non_t0_names_the_pair():
    with pytest.raises(NonT0Error) as e:
        S.FiniteSpectralSpace("ab", [("a", "b"), ("b", "a")])
    assert set(e.value.pair) == {"a", "b"}


def test_bad_inputs():
    with pytest.raises(TTGError):
        S.FiniteSpectralSpace(["a", "a"])
    with pytest.raises(UnknownPointError):
        S.FiniteSpectralSpace("ab", [("a", "z")])
    X = chain("a", "b")
    with pytest.raises(NotMonotoneError) as e:
        S.SpectralMap(X, chain("u", "v"), {"a": "v", "b": "u"})
    assert e.value.pair == ("a", "b")
    with pytest.raises(TTGError):
        S.SpectralMap(X, X, {"a": "a"})


def test_open_closed_convex_on_a_vee():
    # two generics over a common closed point
    V = S.FiniteSpectralSpace("abc", [("a", "c"), ("b", "c")])
    assert V.is_closed({"c"}) and not V.is_open({"c"})
    assert V.is_open({"a"}) and V.is_convex({"a", "c"})
    assert sorted(sorted(u) for u in V.up_sets()) == [[], ["a", "b", "c"], ["a", "c"], ["b", "c"], ["c"]]
    assert len(list(V.down_sets())) == 5


def test_connected_components():
    V = S.FiniteSpectralSpace("abcd", [("a", "c"), ("b", "c")])
    assert S.connected_components(V, V.points) == [frozenset("abc"), frozenset("d")]
    assert not S.is_connected(V) and S.is_connected(V, "ac")


# ---------------------------------------------------------------- fixtures


def test_weak_not_spectral_fixture():
    m = weak_not_spectral()
    assert S.is_weak_spectral_quotient(m)
    assert not S.is_spectral_quotient(m)
    assert not S.is_heritable_weak_spectral_quotient(m)
    assert not S.has_weak_lifting(m, "r", "q")
    assert S.strong_quotient_verdicts(m) == dict.fromkeys(S.STRONG_METHODS, False)


def test_weak_not_spectral_corestriction():
    c = fixtures()["weak_not_spectral_corestriction"]
    assert set(c.codomain.points) == {"r", "q"}
    assert not S.is_weak_spectral_quotient(c)


def test_three_point_affinization():
    m = three_point_affinization()
    assert S.is_topological_quotient(m)
    assert S.is_heritable_weak_spectral_quotient(m)
    bad = S.disconnected_fibers(m)
    assert list(bad) == ["(t)"] and sorted(map(sorted, bad["(t)"])) == [["q1"], ["q2"]]
    assert not S.fibers_connected(m)


def test_weak_lifting_precondition():
    m = weak_not_spectral()
    with pytest.raises(PreconditionError):
        S.has_weak_lifting(m, "q", "r")


def test_cap(monkeypatch):
    n = 17
    Y = S.FiniteSpectralSpace([str(i) for i in range(n)])
    m = S.SpectralMap(Y, Y, {p: p for p in Y.points})
    with pytest.raises(CapExceeded):
        S.is_weak_spectral_quotient(m)
    monkeypatch.setenv("TTG_MAX_POINTS", "20")
    assert S.is_weak_spectral_quotient(m)


# ---------------------------------------------------------------- predicates against oracles


def _agree(m):
    lx, ly, a = oracles.plain(m)
    assert S.is_topological_quotient(m) == oracles.quotient(lx, ly, a)
    assert S.is_weak_spectral_quotient(m) == oracles.weak(lx, ly, a)
    assert S.is_heritable_weak_spectral_quotient(m) == oracles.heritable_weak(lx, ly, a)
    assert S.has_weak_lifting_property(m) == oracles.weak_lifting_property(lx, ly, a)
    assert S.strong_by_corestriction(m) == oracles.strong(lx, ly, a)


def test_predicates_match_oracles_on_small_corpus(small_corpus):
    for _, m in small_corpus:
        _agree(m)


@given(spectral_maps())
def test_predicates_match_oracles_random(m):
    _agree(m)


@given(spectral_maps(max_domain=6, max_codomain=5))
def test_quotient_iff_heritable_weak_random(m):
    assert S.is_topological_quotient(m) == S.is_heritable_weak_spectral_quotient(m)
    v = S.strong_quotient_verdicts(m)
    assert len(set(v.values())) == 1


@given(spectral_maps(max_domain=5, max_codomain=4))
def test_weak_lifting_pairs_match_oracle(m):
    lx, _, a = oracles.plain(m)
    Y = m.codomain
    for y in Y.points:
        for y2 in Y.points:
            if Y.specializes(y, y2):
                assert S.has_weak_lifting(m, y, y2) == oracles.weak_lifting(lx, a, Y.index(y), Y.index(y2))


def test_homeomorphism_iff_injective_quotient(small_corpus):
    # a bijective spectral map is a homeomorphism exactly when it is a quotient
    for _, m in small_corpus:
        if m.is_injective():
            iso = np.array_equal(m.domain.leq, m.codomain.leq[np.ix_(m.assign, m.assign)])
            assert S.is_topological_quotient(m) == iso


@given(posets())
def test_components_match_oracle(X):
    got = sorted(sorted(X.index(p) for p in c) for c in S.connected_components(X, X.points))
    want = sorted(sorted(c) for c in oracles.components(X.leq.tolist(), range(len(X))))
    assert got == want


# ---------------------------------------------------------------- quotients and corestriction


def test_quotient_space_vee_collapse():
    V = S.FiniteSpectralSpace("abc", [("a", "c"), ("b", "c")])
    Q, proj = S.quotient_space(V, [("a", "b"), ("c",)])
    assert Q.points == ("a|b", "c")
    assert Q.specializes("a|b", "c")
    assert S.is_topological_quotient(proj)


def test_quotient_space_rejects_non_t0():
    X = chain("a", "b", "c")
    with pytest.raises(NonT0Error):
        S.quotient_space(X, [("a", "c"), ("b",)])


def test_partition_validation():
    X = chain("a", "b")
    with pytest.raises(TTGError):
        S.PointPartition(X, (("a",),))
    with pytest.raises(TTGError):
        S.PointPartition(X, (("a", "b"), ("b",)))


@given(posets(max_size=5))
def test_quotient_by_random_partition_is_quotient(X):
    # glue consecutive points of a linear extension in pairs; keep it when T0
    order = [X.points[i] for i in X.linear_extension()]
    blocks = [tuple(order[i:i + 2]) for i in range(0, len(order), 2)]
    try:
        Q, proj = S.quotient_space(X, blocks)
    except NonT0Error:
        return
    assert S.is_topological_quotient(proj)


def test_corestriction_and_compose():
    m = weak_not_spectral()
    c = m.corestrict({"r", "q"})
    assert set(c.domain.points) == {"b", "c"}
    ident = S.SpectralMap(m.codomain, m.codomain, {p: p for p in m.codomain.points})
    assert m.compose(ident).as_dict() == m.as_dict()


# ---------------------------------------------------------------- section lemma


def test_section_lemma_on_chain_collapse():
    # x0 ~> x1 ~> x2 onto y0 ~> y1; the section picks the most special point of each fiber
    X = chain("x0", "x1", "x2")
    Y = chain("y0", "y1")
    g = S.SpectralMap(X, Y, {"x0": "y0", "x1": "y1", "x2": "y1"})
    rep = S.check_section_lemma(g, {"y0": "x0", "y1": "x2"})
    assert rep.ok and rep.closed_quotient and rep.section_embedding and rep.image_is_preimage


def test_section_lemma_hypotheses():
    X = chain("x0", "x1", "x2")
    Y = chain("y0", "y1")
    g = S.SpectralMap(X, Y, {"x0": "y0", "x1": "y1", "x2": "y1"})
    with pytest.raises(HypothesisFailed) as e:
        S.check_section_lemma(g, {"y0": "x0", "y1": "x1"})
    assert e.value.which == "ii" and e.value.witness == "x2"
    with pytest.raises(PreconditionError):
        S.check_section_lemma(g, {"y0": "x1", "y1": "x1"})
    V = S.FiniteSpectralSpace(["a", "b", "c"], [("a", "c")])
    h = S.SpectralMap(V, Y, {"a": "y0", "b": "y0", "c": "y1"})
    with pytest.raises(HypothesisFailed) as e:
        S.check_section_lemma(h, {"y0": "b", "y1": "c"})
    assert e.value.which == "i"


def test_section_lemma_exhaustive(small_corpus):
    # whenever the hypotheses hold, all three conclusions hold
    checked = 0
    for _, g in small_corpus:
        fibers = g.fibers()
        for choice in _sections(fibers, g.codomain.points):
            try:
                rep = S.check_section_lemma(g, choice)
            except HypothesisFailed:
                continue
            checked += 1
            assert rep.ok, rep.failures
    assert checked >= 50


def _sections(fibers, ys):
    import itertools
    for pick in itertools.product(*(sorted(fibers[y]) for y in ys)):
        yield dict(zip(ys, pick))
