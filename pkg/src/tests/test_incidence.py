"""
Tests for the incidence algebra, Möbius inversion and finiteness certificates
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decompspace.axioms import full_hull, is_complete, is_decomposition_space
from decompspace.corpus import NEGATIVES, corpus_document, corpus_space, names
from decompspace.documents import sset_document, space_from_document
from decompspace.exceptions import ArityError, CertificateError, CorruptionError, PreconditionError
from decompspace.incidence import (
    Functional,
    certify_finiteness,
    check_inversion,
    convolve,
    epsilon,
    length,
    length_table,
    moebius,
    phi,
    pushforward,
    zeta,
)
from decompspace.nerve import chain_name, chain_poset, nerve
from decompspace.sset import Provenance, TruncatedSSet

from .oracles import poset_moebius
from .strategies import functionals, posets


def test_moebius_on_chains(chain2, chain3):
    """Test mu on 0 < 1 and 0 < 1 < 2"""
    mu = moebius(chain2, certify_finiteness(chain2))
    assert [mu(e) for e in ("(0,0)", "(0,1)", "(1,1)")] == [1, -1, 1]

    mu = moebius(chain3, certify_finiteness(chain3))
    assert mu("(0,1)") == -1
    assert mu("(1,2)") == -1
    assert mu("(0,2)") == 0


def test_moebius_on_boolean_lattice(b2):
    mu = moebius(b2, certify_finiteness(b2))
    assert mu("(0,1)") == 1
    assert mu("(0,a)") == -1
    assert mu("(a,1)") == -1
    assert mu.is_integral()


def test_phi_values(b2):
    """Test Phi_n counts nondegenerate simplices by long edge"""
    assert phi(b2, 2)("(0,1)") == 2
    assert phi(b2, 1)("(0,1)") == 1
    assert phi(b2, 1)("(0,0)") == 0
    assert phi(b2, 0) == epsilon(b2)
    assert phi(b2, 3).is_zero()
    with pytest.raises(ArityError):
        phi(b2, b2.cap + 1)


def test_chain_bound_certificate(chain3):
    """Test the certificate of a nerve and its length table"""
    cert = certify_finiteness(chain3)
    assert cert.reason == "chain-bound"
    assert cert.moebius_ok and cert.locally_finite
    assert cert.length_table["(0,2)"] == 2
    assert length(chain3, "(0,2)") == 2
    assert length(chain3, "(0,0)") == 0
    assert set(length_table(chain3)) == set(chain3.level(1))


def test_truncation_relative_certificate(chain3):
    cert = certify_finiteness(chain3, Provenance.RAW)
    assert cert.truncation_relative


def test_raw_certificate_denied():
    """Test that a group has nondegenerate simplices in every degree"""
    z2 = corpus_space("z2")
    with pytest.raises(CertificateError) as exc:
        certify_finiteness(z2)
    assert exc.value.witness_edge == "* -g-> *"


def _claiming_bound(X, bound):
    return TruncatedSSet(X.cap, X.cells, X.faces, X.degeneracies, Provenance.NERVE, bound)


def test_false_chain_bound_is_corruption():
    with pytest.raises(CorruptionError):
        certify_finiteness(_claiming_bound(nerve(chain_poset(3), cap=3), 1))


def test_false_chain_bound_below_a_vanishing_cap():
    """Test that a false bound is caught even when Phi at the cap is zero"""
    X = _claiming_bound(nerve(chain_poset(2), cap=3), 0)
    assert phi(X, X.cap).is_zero()
    with pytest.raises(CorruptionError, match="Phi_1"):
        certify_finiteness(X)


def test_table_documents_never_claim_a_chain_bound():
    """Test that a nerve written out as tables loads back raw"""
    X = space_from_document(sset_document(nerve(chain_poset(2), cap=3)))
    assert X.provenance is Provenance.RAW
    assert X.chain_bound is None
    assert certify_finiteness(X).truncation_relative


def test_moebius_needs_certificate(chain2, chain3):
    with pytest.raises(CertificateError):
        moebius(chain2, None)
    with pytest.raises(CertificateError):
        moebius(chain2, certify_finiteness(chain3))


def test_epsilon_needs_completeness(corrupt_complete):
    with pytest.raises(PreconditionError):
        epsilon(corrupt_complete)


def test_functional_edge_checks(chain2, chain3):
    with pytest.raises(PreconditionError):
        Functional(chain2, {"(0,2)": 1})
    with pytest.raises(PreconditionError):
        zeta(chain2) + zeta(chain3)
    half = Functional(chain2, {"(0,1)": Fraction(1, 2)})
    assert not half.is_integral()
    assert half.to_table(full=False) == [("(0,1)", 1, 2)]


@settings(max_examples=50, deadline=None)
@given(posets(max_size=8))
def test_moebius_matches_poset_recursion(poset):
    """Test mu against the classical recursion on random posets"""
    X = nerve(poset)
    mu = moebius(X, certify_finiteness(X))
    expected = poset_moebius(poset.elements, poset.leq)
    for (x, y), value in expected.items():
        assert mu(chain_name([x, y])) == value


@settings(max_examples=50, deadline=None)
@given(posets(max_size=8))
def test_inversion_on_random_posets(poset):
    X = nerve(poset)
    report = check_inversion(X, certify_finiteness(X))
    assert report.passed


@pytest.mark.parametrize("name", ["chain3", "b2", "delta2", "chain3-category"])
def test_inversion_on_corpus(name):
    X = corpus_space(name)
    report = check_inversion(X, certify_finiteness(X))
    assert report.passed
    assert report.first_failure is None
    assert [c.name for c in report.checks][:2] == ["mu*zeta = eps", "zeta*mu = eps"]


COMPLETE_SPACES = [n for n in names() if n not in NEGATIVES and corpus_document(n).type != "map"]


@pytest.mark.parametrize("name", COMPLETE_SPACES)
def test_phi_powers(name):
    """Test Phi_p * Phi_q = Phi_{p+q} within the cap"""
    X = corpus_space(name)
    assert is_decomposition_space(X) and is_complete(X).passed
    for p in range(X.cap + 1):
        for q in range(X.cap + 1 - p):
            assert convolve(phi(X, p), phi(X, q)) == phi(X, p + q)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_convolution_associative_and_unital(data):
    X = corpus_space("b2")
    F, G, H = (data.draw(functionals(X)) for _ in range(3))
    assert convolve(convolve(F, G), H) == convolve(F, convolve(G, H))
    eps = epsilon(X)
    assert convolve(eps, F) == F
    assert convolve(F, eps) == F


def test_convolution_needs_level_two(corrupt_complete):
    F = Functional(corrupt_complete)
    with pytest.raises(ArityError):
        convolve(F, F)


@settings(max_examples=25, deadline=None)
@given(posets(max_size=8), st.data())
def test_pushforward_multiplicative_not_unital(poset, data):
    """Test that pushing forward along a full inclusion preserves convolution but not the unit"""
    X = nerve(poset)
    chosen = data.draw(st.sets(st.sampled_from(list(X.level(0)))))
    K = full_hull(X, chosen)
    u = K.inclusion()
    Y = K.as_sset()
    F, G = data.draw(functionals(Y)), data.draw(functionals(Y))
    assert pushforward(u, convolve(F, G)) == convolve(pushforward(u, F), pushforward(u, G))
    unit = pushforward(u, epsilon(Y))
    assert (unit == epsilon(X)) == (len(chosen) == len(X.level(0)))


def test_pushforward_wrong_base(chain2, chain3):
    u = full_hull(chain3, ["(0)"]).inclusion()
    with pytest.raises(PreconditionError):
        pushforward(u, zeta(chain2))
