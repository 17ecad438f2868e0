"""
Tests for truncated simplicial sets, simplicial maps and the pullback checker
"""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decompspace.corpus import corpus_space
from decompspace.delta import MonotoneMap, monotone_maps
from decompspace.exceptions import (
    ArityError,
    InvalidMapError,
    NonCommutingSquareError,
    PreconditionError,
    SimplicialIdentityError,
)
from decompspace.sset import (
    Provenance,
    SimplicialMap,
    Square,
    SubSSet,
    TruncatedSSet,
    act,
    diagonal_square,
    fiber_product,
    is_degenerate,
    is_effective,
    is_injective,
    is_mono_on_objects,
    is_pullback,
    long_edge,
    paste,
    principal_edges,
    terminal,
    validate,
    vertices,
)

from .strategies import finite_functions


def _with_corrupt_face(X: TruncatedSSet) -> TruncatedSSet:
    faces = {key: dict(table) for key, table in X.faces.items()}
    faces[(2, 0)]["(0,1,2)"] = "(0,2)"
    return TruncatedSSet(X.cap, X.cells, faces, X.degeneracies, validate=False)


def test_nerve_levels(chain2):
    """Test level sizes of the nerve of 0 < 1"""
    assert len(chain2.level(0)) == 2
    assert len(chain2.level(1)) == 3
    assert chain2.nondegenerate(1) == ("(0,1)",)
    assert validate(chain2).valid


def test_corrupted_face_reported(delta2):
    """Test that a single corrupted entry names the failing identity"""
    report = validate(_with_corrupt_face(delta2))
    assert not report.valid
    assert any(v.identity == "d_0 d_2 = d_1 d_0" and v.cell == "(0,1,2)" for v in report.violations)
    with pytest.raises(SimplicialIdentityError):
        TruncatedSSet(delta2.cap, delta2.cells, _with_corrupt_face(delta2).faces, delta2.degeneracies)


def test_empty_sset_is_valid():
    faces = {(n, i): {} for n in (1, 2) for i in range(n + 1)}
    degeneracies = {(n, i): {} for n in (0, 1) for i in range(n + 1)}
    empty = TruncatedSSet(2, [[], [], []], faces, degeneracies)
    assert empty.is_empty()
    assert validate(empty).valid


def test_broken_identity_rejected():
    """Test d_1 s_0 = id is enforced at construction"""
    with pytest.raises(SimplicialIdentityError) as exc:
        TruncatedSSet(
            1,
            [["x", "y"], ["a", "b"]],
            {(1, 0): {"a": "x", "b": "y"}, (1, 1): {"a": "x", "b": "x"}},
            {(0, 0): {"x": "a", "y": "b"}},
        )
    assert exc.value.violations


def test_missing_table_rejected_even_unvalidated():
    with pytest.raises(SimplicialIdentityError):
        TruncatedSSet(1, [["x"], ["e"]], {(1, 0): {"e": "x"}}, {(0, 0): {"x": "e"}}, validate=False)


def test_act_examples(chain3):
    """Test the action of d^1 and s^0 on the nerve of 0 < 1 < 2"""
    assert act(chain3, MonotoneMap.coface(1, 2))["(0,1,2)"] == "(0,2)"
    assert act(chain3, MonotoneMap.codegeneracy(0, 0))["(1)"] == "(1,1)"
    identity = act(chain3, MonotoneMap.identity(2))
    assert all(identity[c] == c for c in chain3.level(2))


def test_act_matches_structure_maps(delta2):
    for n in range(1, delta2.cap + 1):
        for i in range(n + 1):
            assert act(delta2, MonotoneMap.coface(i, n)) == delta2.faces[(n, i)]
    for n in range(delta2.cap):
        for i in range(n + 1):
            assert act(delta2, MonotoneMap.codegeneracy(i, n)) == delta2.degeneracies[(n, i)]


def test_act_beyond_cap(chain2):
    with pytest.raises(ArityError):
        act(chain2, MonotoneMap.identity(3))
    with pytest.raises(ArityError):
        chain2.s(0, 2, "(0,0,1)")


@pytest.mark.parametrize("name", ["chain3", "b2", "dupdegen"])
def test_act_is_functorial(name):
    """Test act(psi . phi) = act(phi) . act(psi) for arities up to 3"""
    X = corpus_space(name)
    top = min(X.cap, 3)
    for l, m, n in product(range(top + 1), repeat=3):
        for phi in monotone_maps(l, m):
            for psi in monotone_maps(m, n):
                composite = act(X, psi.compose(phi))
                stepwise = act(X, phi)
                first = act(X, psi)
                assert all(composite[c] == stepwise[first[c]] for c in X.level(n))


def test_degeneracy_detection(chain2, chain3):
    assert is_degenerate(chain2, 1, chain2.s(0, 0, "(0)"))
    assert not is_degenerate(chain3, 2, "(0,1,2)")
    assert is_degenerate(chain2, 2, "(0,0,1)")
    with pytest.raises(PreconditionError):
        is_degenerate(chain2, 0, "(0)")


def test_long_edge_and_spine(chain3):
    """Test long edges, vertices and principal edges of (0,1,2)"""
    assert long_edge(chain3, 2, "(0,1,2)") == "(0,2)"
    assert long_edge(chain3, 1, "(0,1)") == "(0,1)"
    assert long_edge(chain3, 0, "(1)") == "(1,1)"
    assert vertices(chain3, 2, "(0,1,2)") == ("(0)", "(1)", "(2)")
    assert principal_edges(chain3, 2, "(0,1,2)") == ("(0,1)", "(1,2)")
    assert is_effective(chain3, 2, "(0,1,2)")
    assert not is_effective(chain3, 2, "(0,0,1)")


@pytest.mark.parametrize("name", ["chain3", "b2", "delta2"])
def test_degenerate_iff_some_principal_edge_degenerate(name):
    """Test that nondegenerate cells of nerves have only nondegenerate principal edges"""
    X = corpus_space(name)
    for n in range(1, X.cap + 1):
        for cell in X.level(n):
            assert is_degenerate(X, n, cell) == (not is_effective(X, n, cell))


def test_terminal():
    point = terminal(3)
    assert [len(point.level(n)) for n in range(4)] == [1, 1, 1, 1]
    assert is_degenerate(point, 1, "*1")


def test_pullback_examples():
    """Test the identity square, disjoint points and the missing filler"""
    ident = {0: 0, 1: 1}
    assert is_pullback(Square([0, 1], [0, 1], [0, 1], [0, 1], ident, ident, ident, ident))

    const = {0: 0}
    assert is_pullback(Square([], [0], [0], ["p", "q"], {}, {}, {0: "p"}, {0: "q"}))

    verdict = is_pullback(Square([], [0], [0], [0], {}, {}, const, const))
    assert not verdict
    assert verdict.witness.kind == "missing"
    assert verdict.witness.pair == (0, 0)


def test_collision_witness():
    square = Square(["p", "q"], [0], [0], [0], {"p": 0, "q": 0}, {"p": 0, "q": 0}, {0: 0}, {0: 0})
    verdict = is_pullback(square)
    assert verdict.witness.kind == "collision"
    assert set(verdict.witness.elements) == {"p", "q"}


def test_non_commuting_square_raises():
    with pytest.raises(NonCommutingSquareError):
        is_pullback(Square([0], [0], [0], [0, 1], {0: 0}, {0: 0}, {0: 0}, {0: 1}))


@settings(max_examples=50, deadline=None)
@given(finite_functions())
def test_mono_iff_diagonal_pullback(data):
    """Test f injective iff its diagonal square is a pullback"""
    domain, codomain, table = data
    assert bool(is_pullback(diagonal_square(table, domain, codomain))) == is_injective(table, domain)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_prism_property(data):
    """Test that pasting onto a pullback square preserves and reflects pullbacks"""
    sizes = st.integers(min_value=0, max_value=4)
    A = list(range(data.draw(sizes)))
    C = list(range(data.draw(sizes)))
    D = list(range(1 + data.draw(sizes)))
    B = list(range(data.draw(sizes)))
    f = {a: data.draw(st.sampled_from(D)) for a in A}
    h = {c: data.draw(st.sampled_from(D)) for c in C}
    g = {b: data.draw(st.sampled_from(C)) for b in B} if C else {}
    if B and not C:
        B = []
    right_p = fiber_product(A, C, f, h)
    right = Square(right_p, A, C, D, lambda p: p[0], lambda p: p[1], f, h, "right")
    assert is_pullback(right)

    # a left square over B that may or may not be a pullback
    left_p = fiber_product(right_p, B, lambda p: p[1], g)
    if left_p and data.draw(st.booleans()):
        left_p = left_p + [left_p[0]]
    left_p = list(enumerate(left_p))
    left = Square(
        left_p,
        right_p,
        B,
        C,
        {k: p[0] for k, p in left_p},
        {k: p[1] for k, p in left_p},
        lambda p: p[1],
        g,
        "left",
    )
    assert bool(is_pullback(left)) == bool(is_pullback(paste(left, right)))


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_base_change_along_mono(data):
    """Test that fibre products over T and over S agree for injective T -> S"""
    T = list(range(1 + data.draw(st.integers(0, 4))))
    S = list(range(len(T) + data.draw(st.integers(0, 2))))
    f = dict(zip(T, data.draw(st.permutations(S))[: len(T)]))
    X = list(range(data.draw(st.integers(0, 5))))
    Y = list(range(data.draw(st.integers(0, 5))))
    g = {x: data.draw(st.sampled_from(T)) for x in X}
    h = {y: data.draw(st.sampled_from(T)) for y in Y}
    over_t = fiber_product(X, Y, g, h)
    over_s = fiber_product(X, Y, lambda x: f[g[x]], lambda y: f[h[y]])
    assert over_t == over_s


@pytest.mark.parametrize("source,target", [("delta02", "delta2"), ("discrete2", "chain2")])
def test_product_against_fibre_product(source, target):
    """Test the square of composable pairs inside all pairs for a map mono on objects"""
    Y, X = corpus_space(source), corpus_space(target)
    f = SimplicialMap.from_vertex_map(Y, X, {v: v for v in Y.level(0)})
    assert is_mono_on_objects(f)
    f1 = f.components[1]
    composable = lambda Z: [(a, b) for a in Z.level(1) for b in Z.level(1) if Z.d(0, 1, a) == Z.d(1, 1, b)]
    pairs = lambda Z: list(product(Z.level(1), repeat=2))
    both = lambda p: (f1[p[0]], f1[p[1]])
    square = Square(composable(Y), pairs(Y), composable(X), pairs(X), lambda p: p, both, both, lambda p: p)
    assert is_pullback(square)


def test_simplicial_map_checks(chain2, delta2, delta02):
    with pytest.raises(InvalidMapError, match="mismatched caps"):
        SimplicialMap(chain2, delta2, {})
    identity = SimplicialMap.identity(delta2)
    assert identity(2, "(0,1,2)") == "(0,1,2)"
    bad = {n: dict(identity.components[n]) for n in range(delta2.cap + 1)}
    bad[1]["(0,1)"] = "(1,2)"
    with pytest.raises(InvalidMapError):
        SimplicialMap(delta2, delta2, bad)
    to_point = SimplicialMap.to_terminal(delta02)
    assert not is_mono_on_objects(to_point)


def test_subsset_closure(chain2):
    """Test that a selection must be closed under faces and degeneracies"""
    with pytest.raises(InvalidMapError):
        SubSSet(chain2, [frozenset(), frozenset({"(0,1)"}), frozenset()])
    whole = SubSSet.whole(chain2)
    assert whole.as_sset().level(1) == chain2.level(1)
    assert is_mono_on_objects(whole.inclusion())
    empty = SubSSet.empty(chain2)
    assert empty.is_empty() and empty.as_sset().is_empty()


def test_unvalidated_corrupt_fixture(corrupt_complete):
    assert corrupt_complete.provenance is Provenance.RAW
    assert not validate(corrupt_complete).valid
