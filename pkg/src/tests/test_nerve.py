"""
Tests for posets, finite categories and their nerves
"""

import pytest

from decompspace.corpus import corpus_space
from decompspace.exceptions import DocumentError, PreconditionError
from decompspace.incidence import certify_finiteness, epsilon, moebius
from decompspace.nerve import (
    FiniteCategory,
    Poset,
    chain_poset,
    discrete_poset,
    element_of,
    nerve,
    nerve_category,
    vertex_names,
)
from decompspace.sset import Provenance, principal_edges, validate


def test_cycle_rejected():
    with pytest.raises(DocumentError, match="cycle"):
        Poset.from_relations(["a", "b"], [("a", "b"), ("b", "a")])


@pytest.mark.parametrize("names", [["a,b"], ["(a)"], [" a"], [""], ["a", "a"]])
def test_bad_element_names(names):
    with pytest.raises(DocumentError):
        Poset.from_relations(names, [])


def test_unknown_element_in_relation():
    with pytest.raises(DocumentError) as exc:
        Poset.from_relations(["a"], [("a", "z")])
    assert exc.value.location == "relations[0]"


def test_order_kind_checks():
    """Test that a full order must be reflexive and transitive"""
    names = ["a", "b", "c"]
    reflexive = [(x, x) for x in names]
    with pytest.raises(DocumentError, match="reflexive"):
        Poset.from_relations(names, [("a", "b")], "order")
    with pytest.raises(DocumentError, match="transitive"):
        Poset.from_relations(names, reflexive + [("a", "b"), ("b", "c")], "order")
    full = Poset.from_relations(names, reflexive + [("a", "b"), ("b", "c"), ("a", "c")], "order")
    covers = Poset.from_relations(names, [("a", "b"), ("b", "c")])
    assert all(full.leq(x, y) == covers.leq(x, y) for x in names for y in names)
    with pytest.raises(DocumentError):
        Poset.from_relations(names, [], "lattice")


def test_poset_queries():
    P = chain_poset(3)
    assert P.chain_bound == 3
    assert P.above("2") == ["2", "3"]
    assert P.interval("1", "3") == ["1", "2", "3"]
    assert discrete_poset(["p", "q"]).chain_bound == 0


def test_chain_counts():
    """Test the number of weakly increasing chains in 0 < 1 < 2"""
    X = nerve(chain_poset(2))
    assert X.cap == 3
    assert [len(X.level(n)) for n in range(4)] == [3, 6, 10, 15]
    assert X.provenance is Provenance.NERVE
    assert X.chain_bound == 2
    assert validate(X).valid


def test_nerve_cap_floor():
    assert nerve(discrete_poset(["p"])).cap == 2
    with pytest.raises(PreconditionError):
        nerve(chain_poset(1), cap=1)


def test_antichain_moebius_is_unit():
    X = corpus_space("antichain2")
    assert moebius(X, certify_finiteness(X)) == epsilon(X)


def test_category_nerve_matches_poset_nerve():
    """Test the nerve of a poset viewed as a category against the poset nerve"""
    category = corpus_space("chain3-category")
    poset = corpus_space("delta2")
    assert [len(category.level(n)) for n in range(4)] == [len(poset.level(n)) for n in range(4)]
    assert category.provenance is Provenance.NERVE
    assert category.chain_bound == 2

    mu_c = moebius(category, certify_finiteness(category))
    mu_p = moebius(poset, certify_finiteness(poset))
    for x in "012":
        for y in "012":
            if x <= y:
                assert mu_c(f"{x} -{x}<={y}-> {y}") == mu_p(f"({x},{y})")


def test_declared_bound_checked():
    """Test that a false declared bound leaves the nerve raw"""
    C = chain_poset(2).as_category()
    X = nerve_category(C, cap=3, declared_bound=1)
    assert X.provenance is Provenance.RAW
    assert X.chain_bound is None
    with pytest.raises(PreconditionError):
        nerve_category(C, cap=1)


def test_category_validation():
    objects = ["*"]
    morphisms = {"e": ("*", "*"), "g": ("*", "*")}
    with pytest.raises(DocumentError, match="identity"):
        FiniteCategory(objects, morphisms, {}, {})
    partial = {("e", "e"): "e", ("g", "e"): "g", ("e", "g"): "g"}
    with pytest.raises(DocumentError, match="composite"):
        FiniteCategory(objects, morphisms, {"*": "e"}, partial)
    with pytest.raises(DocumentError, match="malformed"):
        FiniteCategory(objects, {"a->b": ("*", "*")}, {"*": "a->b"}, {})


def test_vertex_names(b2):
    assert vertex_names(b2, ["a", "(b)"]) == ["(a)", "(b)"]
    with pytest.raises(DocumentError):
        vertex_names(b2, ["z"])
    assert element_of("(a)") == "a"
    assert element_of("*") == "*"


def test_discrete_category_nerve():
    """Test that two objects with only identities give two disjoint points"""
    C = FiniteCategory(
        ["p", "q"],
        {"1p": ("p", "p"), "1q": ("q", "q")},
        {"p": "1p", "q": "1q"},
        {("1p", "1p"): "1p", ("1q", "1q"): "1q"},
    )
    X = nerve_category(C, cap=2, declared_bound=0)
    assert [len(X.level(n)) for n in range(3)] == [2, 2, 2]
    assert X.nondegenerate(1) == () and X.nondegenerate(2) == ()
    assert X.provenance is Provenance.NERVE


@pytest.mark.parametrize("name", ["chain3-category", "z2"])
def test_category_nerve_unique_fillers(name):
    """Test that every string of composable edges has exactly one filler"""
    X = corpus_space(name)
    for n in range(2, X.cap + 1):
        spines = [principal_edges(X, n, cell) for cell in X.level(n)]
        assert len(set(spines)) == len(spines)
        composable = [(e,) for e in X.level(1)]
        for _ in range(n - 1):
            composable = [
                s + (e,) for s in composable for e in X.level(1) if X.d(0, 1, s[-1]) == X.d(1, 1, e)
            ]
        assert set(spines) == set(composable)
