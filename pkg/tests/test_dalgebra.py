"""Algebra actions, their underlying multicategories, and comparison maps."""

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmcat.catoperad import associativity_operad, barratt_eccles
from gmcat.dalgebra import (DAlgebra, free_algebra, kappa, kappa_report,
                            terminal_algebra, underlying, validate_algebra,
                            z2_discrete_algebra)
from gmcat.dmulticat import enumerate_M2, validate_multicat
from gmcat.fincat import terminal_category
from gmcat.opmonad import eta, melem, mu

BE = barratt_eccles(4)
ASS = associativity_operad(4)


def test_z2_algebra_valid():
    rep = validate_algebra(z2_discrete_algebra(BE), arity_bound=3)
    assert rep["ok"], rep["failures"][:3]
    assert rep["bounded"] == 0


def test_z2_action_values():
    A = z2_discrete_algebra(BE)
    assert A.xi0(melem(BE, 0, (1, 2), (1, 1))) == 0
    assert A.xi0(melem(BE, 0, (1, 2, 3), (1, 1, 1))) == 1
    assert A.xi0(melem(BE, 0, (), ())) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=1), max_size=4))
def test_z2_action_is_parity(bits):
    A = z2_discrete_algebra(BE)
    n = len(bits)
    e = melem(BE, 0, tuple(range(1, n + 1)), tuple(bits))
    assert A.xi0(e) == sum(bits) % 2


def test_terminal_algebra_valid():
    rep = validate_algebra(terminal_algebra(ASS), arity_bound=3)
    assert rep["ok"]


def test_free_algebra_valid():
    A = free_algebra(BE, terminal_category(), carrier_bound=2)
    rep = validate_algebra(A, arity_bound=2)
    assert rep["ok"], rep["failures"][:3]
    # the flattening action leaves the truncated carrier on some inputs;
    # those instances are reported, not silently passed
    assert rep["bounded"] > 0


def test_projection_action_breaks_associativity():
    # replacing the sum with first-coordinate projection keeps the unit law
    # but loses compatibility with flattening once a nullary slot shows up
    A = z2_discrete_algebra(BE)
    bad = replace(A, xi0=lambda e: e.xs[0] if e.xs else 0)
    rep = validate_algebra(bad, arity_bound=2)
    assert not rep["ok"]
    assert any(kind == "action associativity fails" for kind, _ in rep["failures"])


def test_underlying_z2_multimorphisms():
    U = underlying(z2_discrete_algebra(BE), bound=3)
    # one multimorphism per bit list of length <= 3; the target is its parity
    assert len(U.morphisms) == 1 + 2 + 4 + 8
    for h, X in U.morphisms:
        assert h == ("id", sum(X.xs) % 2)


def test_underlying_z2_is_multicat():
    U = underlying(z2_discrete_algebra(BE), bound=3)
    rep = validate_multicat(U)
    assert rep["ok"], rep["failures"][:3]
    assert rep["m2"] > 0 and rep["m3"] > 0


def test_underlying_terminal_is_nonsymmetric_terminal():
    U = underlying(terminal_algebra(ASS), bound=3)
    assert len(U.morphisms) == 4  # one per arity 0..3
    rep = validate_multicat(U)
    assert rep["ok"], rep["failures"][:3]
    for (f, Phi), out in U.composition.items():
        assert out[1].n == sum(X.n for _, X in Phi.xs)


def test_underlying_sources_evaluate_to_carrier_sources():
    A = z2_discrete_algebra(BE)
    U = underlying(A, bound=2)
    for h, X in U.morphisms:
        assert A.carrier.src[h] == A.xi0(X)


def test_kappa_identity_and_projection():
    A = z2_discrete_algebra(BE)
    U = underlying(A, bound=2)
    k0, k1 = kappa(A, 0), kappa(A, 1)
    assert all(k0(x) == x for x in U.objects)
    assert all(k1(w) == w[0] for w in U.morphisms)


def test_kappa2_concrete_pair():
    A = z2_discrete_algebra(BE)
    U = underlying(A, bound=2)
    w = (("id", 0), melem(BE, 0, (1, 2), (1, 1)))
    leaf = (("id", 1), melem(BE, 0, (1,), (1,)))
    Phi = melem(BE, 0, (1, 2), (leaf, leaf))
    assert (w, Phi) in enumerate_M2(U)
    assert kappa(A, 2)((w, Phi)) == (("id", 0), ("id", 0))


def test_kappa_rejects_deep_levels():
    with pytest.raises(Exception):
        kappa(z2_discrete_algebra(BE), 4)


def test_kappa_squares_z2():
    rep = kappa_report(z2_discrete_algebra(BE), bound=2)
    assert rep["ok"], rep["failures"][:3]
    assert rep["m2"] > 0 and rep["m3"] > 0


def test_kappa_squares_terminal():
    rep = kappa_report(terminal_algebra(ASS), bound=3)
    assert rep["ok"], rep["failures"][:3]


def test_unit_laws_of_action():
    A = z2_discrete_algebra(BE)
    assert A.xi0(eta(BE, 0, 1)) == 1
    assert A.xi1(eta(BE, 1, ("id", 0))) == ("id", 0)
