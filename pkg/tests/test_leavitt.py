"""Leavitt path algebra rewriting, grading and CK2 factorizations."""

import random

import pytest

from grady.coeff import CoeffRing
from grady.groups import cyclic_group
from grady.leavitt import (
    GraphError,
    LeavittPathAlgebra,
    Monomial,
    UnverifiedSearch,
    directed_graph,
    lpa_z4_fixture,
    lpa_z8_fixture,
)


@pytest.fixture(scope="module")
def lpa4():
    return lpa_z4_fixture()


@pytest.fixture(scope="module")
def lpa8():
    return lpa_z8_fixture()


def mono(alg, word):
    return alg.from_word(word)


# -- graph validation -----------------------------------------------------------


def test_graph_validation():
    with pytest.raises(GraphError):
        directed_graph(["v", "v"], [])
    with pytest.raises(GraphError):
        directed_graph(["v"], [("e", "v", "w")])
    with pytest.raises(GraphError):
        directed_graph(["v"], [("e", "v", "v"), ("e", "v", "v")])


def test_acyclicity_flags(lpa4, lpa8):
    assert lpa4.acyclic and lpa4.longest_path == 1
    assert not lpa8.acyclic


# -- defining relations -----------------------------------------------------------


def test_relations_normalize_to_zero(lpa4, lpa8):
    for alg in (lpa4, lpa8):
        one = alg.coeff.one
        for e in alg.edge_ids:
            s, r = alg.src[e], alg.dst[e]
            f = alg.edge(e)
            fs = alg.ghost(e)
            # (i) s(f) f = f = f r(f)
            assert alg.multiply(alg.vertex(s), f) == f
            assert alg.multiply(f, alg.vertex(r)) == f
            # (ii) r(f) f* = f* = f* s(f)
            assert alg.multiply(alg.vertex(r), fs) == fs
            assert alg.multiply(fs, alg.vertex(s)) == fs
            # (iii) f* f' = delta r(f)
            for e2 in alg.edge_ids:
                prod = alg.multiply(fs, alg.edge(e2))
                expected = alg.vertex(r) if e2 == e else alg.zero_elem()
                assert prod == expected
        # (iv) v = sum of f f* over the out-edges, for every regular vertex
        for v in alg.vertices:
            if not alg.out_edges[v]:
                continue
            acc = alg.vertex(v)
            for e in alg.out_edges[v]:
                acc = alg.sub(acc, alg.multiply(alg.edge(e), alg.ghost(e)))
            assert alg.is_zero(acc)


def test_ghost_real_contraction(lpa4):
    assert mono(lpa4, ["f*", "f"]) == lpa4.vertex("v2")
    assert lpa4.is_zero(mono(lpa4, ["f*", "g"]))


def test_single_out_edge_collapses(lpa8):
    assert mono(lpa8, ["f", "f*"]) == lpa8.vertex("v2")
    assert mono(lpa8, ["h", "h*"]) == lpa8.vertex("v1")


# -- monomial products --------------------------------------------------------------


def test_vertex_acts_by_source(lpa4):
    fg_star = mono(lpa4, ["f", "g*"])
    assert lpa4.multiply(lpa4.vertex("v1"), fg_star) == fg_star
    assert lpa4.is_zero(lpa4.multiply(lpa4.vertex("v2"), fg_star))


def test_fg_star_is_a_single_monomial(lpa4):
    el = mono(lpa4, ["f", "g*"])
    assert len(el.terms) == 1
    m, c = el.terms[0]
    assert m == Monomial(("f",), ("g",), "v2")
    assert c == lpa4.coeff.one


def test_incomposable_product_is_zero(lpa4):
    assert lpa4.is_zero(mono(lpa4, ["f", "g"]))


# -- degrees --------------------------------------------------------------------------


def test_degrees(lpa8):
    assert lpa8.degree_of(Monomial((), (), "v1")) == 0
    assert lpa8.degree_of(Monomial(("f", "g"), (), "v2")) == 4
    assert lpa8.degree_of(Monomial((), ("f",), "v3")) == 6


# -- path degree table -----------------------------------------------------------------


def test_degree_table_single_edge():
    graph = directed_graph(["a", "b"], [("x", "a", "b")])
    alg = LeavittPathAlgebra(graph, cyclic_group(4), {"x": 2}, CoeffRing((2,)))
    table = alg.path_degree_table()
    assert table[("a", "b")] == frozenset({2})
    assert table[("a", "a")] == frozenset({0})
    assert ("b", "a") not in table


def test_degree_table_cycle(lpa8):
    table = lpa8.path_degree_table()
    assert table[("v2", "v2")] == frozenset({0, 4})
    assert table[("v2", "v3")] == frozenset({2, 6})
    assert table[("v1", "v1")] == frozenset({0, 4})


def test_isolated_vertex_reaches_nothing(lpa8):
    table = lpa8.path_degree_table()
    targets = {w for (v, w) in table if v == "v4"}
    assert targets == {"v4"}


# -- component support --------------------------------------------------------------------


def test_support_lpa4(lpa4):
    assert lpa4.component_support(2) == ("v1", "v2", "v3")
    assert lpa4.component_support(1) == ()
    assert lpa4.component_support(3) == ()
    assert lpa4.component_support(0) == ("v1", "v2", "v3", "v4")
    assert lpa4.support() == (0, 2)


def test_support_lpa8(lpa8):
    assert lpa8.component_support(2) == ("v2", "v3")
    assert lpa8.component_support(4) == ("v1", "v2", "v3")
    assert lpa8.component_support(6) == ("v2", "v3")
    for g in (1, 3, 5, 7):
        assert lpa8.component_support(g) == ()
    assert lpa8.support() == (0, 2, 4, 6)


# -- monomials of a degree --------------------------------------------------------------------


def test_monomials_of_degree_lpa4(lpa4):
    monos, complete = lpa4.monomials_of_degree(2, 4)
    rendered = {lpa4.format_monomial(m) for m in monos}
    assert rendered == {"f", "g", "f*", "g*"}
    assert complete

    monos0, complete0 = lpa4.monomials_of_degree(0, 4)
    rendered0 = {lpa4.format_monomial(m) for m in monos0}
    assert rendered0 == {"v1", "v2", "v3", "v4", "f.g*", "g.f*"}
    assert complete0


def test_monomials_of_degree_lpa8(lpa8):
    monos, complete = lpa8.monomials_of_degree(2, 5)
    rendered = {lpa8.format_monomial(m) for m in monos}
    assert {"f", "g", "f.g.f.g.f"} <= rendered
    assert not complete


def test_monomials_of_empty_degree(lpa8):
    monos, complete = lpa8.monomials_of_degree(1, 6)
    assert monos == []
    assert complete


# -- CK2 factorizations ----------------------------------------------------------------------


def test_ck2_single_out_edge(lpa8):
    leaves = lpa8.ck2_factorization("v2", 2)
    assert [lpa8.format_monomial(m) for m in leaves] == ["f"]
    leaves = lpa8.ck2_factorization("v1", 4)
    assert [lpa8.format_monomial(m) for m in leaves] == ["h"]


def test_ck2_sink_uses_ghost_completion(lpa4):
    leaves = lpa4.ck2_factorization("v2", 2)
    assert [lpa4.format_monomial(m) for m in leaves] == ["f*"]
    el = lpa4.monomial_element(leaves[0])
    star = lpa4.monomial_element(lpa4.star(leaves[0]))
    assert lpa4.multiply(el, star) == lpa4.vertex("v2")


def test_ck2_reverifies_and_is_homogeneous(lpa4, lpa8):
    for alg in (lpa4, lpa8):
        for g in alg.support():
            for v in alg.component_support(g):
                leaves = alg.ck2_factorization(v, g)
                total = alg.zero_elem()
                for m in leaves:
                    assert alg.degree_of(m) == g
                    assert alg.mono_source(m) == v
                    total = alg.add(
                        total,
                        alg.multiply(
                            alg.monomial_element(m), alg.monomial_element(alg.star(m))
                        ),
                    )
                assert total == alg.vertex(v)


def test_ck2_depth_bound(lpa8):
    with pytest.raises(UnverifiedSearch):
        lpa8.ck2_factorization("v2", 2, depth_bound=0)


def test_ck2_rejects_unsupported_vertex(lpa8):
    with pytest.raises(ValueError):
        lpa8.ck2_factorization("v4", 2)


# -- randomized soundness ----------------------------------------------------------------------


def _random_element(alg, rng, max_len=3):
    pool = []
    for g in alg.group.elements():
        ms, _ = alg.monomials_of_degree(g, max_len)
        pool.extend(ms)
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        m = rng.choice(pool)
        terms[m] = alg.coeff.from_int(rng.randrange(1, 4))
    return alg.element({m: c for m, c in terms.items() if c != alg.coeff.zero})


def test_random_associativity(lpa4, lpa8):
    rng = random.Random(91)
    for alg in (lpa4, lpa8):
        elems = [_random_element(alg, rng) for _ in range(40)]
        for _ in range(1000):
            a, b, c = rng.choice(elems), rng.choice(elems), rng.choice(elems)
            left = alg.multiply(alg.multiply(a, b), c)
            right = alg.multiply(a, alg.multiply(b, c))
            assert left == right


def test_random_degree_additivity(lpa4, lpa8):
    rng = random.Random(92)
    for alg in (lpa4, lpa8):
        pool = []
        for g in alg.group.elements():
            ms, _ = alg.monomials_of_degree(g, 4)
            pool.extend(ms)
        for _ in range(1000):
            m1, m2 = rng.choice(pool), rng.choice(pool)
            prod = alg.mono_mul(m1, m2)
            want = alg.group.op(alg.degree_of(m1), alg.degree_of(m2))
            for m in prod:
                assert alg.degree_of(m) == want


def test_component_generators_protocol(lpa4):
    gens, complete = lpa4.component_generators(2)
    assert complete
    assert len(gens) == 4
    for el in gens:
        assert len(el.terms) == 1


def test_word_and_normal_form_helpers(lpa4):
    c1 = lpa4.coeff.one
    el = lpa4.normal_form([(["v2"], c1), (["f*", "f"], c1)])
    assert lpa4.is_zero(el)  # characteristic 2: v2 + v2 = 0
    assert lpa4.from_word(["f", "f"]) == lpa4.zero_elem()
