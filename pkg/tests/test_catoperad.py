import time

from hypothesis import given, settings, strategies as st

from gmcat.catoperad import (
    associativity_operad, barratt_eccles, commutative_operad,
    composable_families, freeness_report, is_sigma_free,
    simplicial_degree_operad, validate_operad,
)
from gmcat.finset import Perm, block_perm, block_sum, perms


def corrupted_compose(op, bad_key, bad_value):
    inner = op._compose

    def compose(j, k, x, inners):
        if (j, k, x, inners) == bad_key:
            return bad_value
        return inner(j, k, x, inners)
    op._compose = compose
    return op


# -- builtins -----------------------------------------------------------------

def test_barratt_eccles_level_sizes():
    op = barratt_eccles(3)
    assert len(op.level(3).objects) == 6
    assert len(op.level(3).morphisms) == 36
    for n in (0, 1):
        assert len(op.level(n).objects) == 1 and len(op.level(n).morphisms) == 1
    assert op.unit == (1,)


def test_barratt_eccles_validates_and_is_free():
    op = barratt_eccles(3)
    rep = validate_operad(op)
    assert rep["ok"], rep["failures"][:3]
    assert is_sigma_free(op)


def test_barratt_eccles_deeper_families():
    # widen the family bound so two binary morphisms compose under an outer swap
    rep = validate_operad(barratt_eccles(3), total_arity=6)
    assert rep["ok"], rep["failures"][:3]
    assert rep["checked"]["families"] > 1000


def test_associativity_operad_shape():
    op = associativity_operad(4)
    assert len(op.level(2).objects) == 2
    assert op.level(2).morphisms == op.level(2).objects  # identities only
    swap = (2, 1)
    assert op.compose(0, 2, swap, ((1, (1,)), (1, (1,)))) == swap
    rep = validate_operad(op, total_arity=6)
    assert rep["ok"]
    assert is_sigma_free(op)


def test_commutative_operad_axioms_hold_but_not_free():
    op = commutative_operad(3)
    assert validate_operad(op)["ok"]
    assert not is_sigma_free(op)
    rep = freeness_report(op)
    w = rep["witnesses"][0]
    assert w["level"] == 2 and w["sigma"] == (2, 1) and w["fixed_point"] == "*"


def test_corrupted_composition_names_the_tuple():
    op = associativity_operad(3)
    bad_key = (0, 2, (2, 1), ((1, (1,)), (1, (1,))))
    corrupted_compose(op, bad_key, (1, 2))
    rep = validate_operad(op)
    assert not rep["ok"]
    named = [w for _, w in rep["failures"] if (2, 0, (2, 1)) == w or (2, 1) in str(w)]
    assert named, rep["failures"][:5]


def test_equivariance_matches_block_calculus():
    op = barratt_eccles(3)
    for k, a, inners in composable_families(op, 1, 4):
        sizes = tuple(n for n, _ in inners)
        gab = op.compose(1, k, a, inners)
        for s in perms(k):
            lhs = op.compose(1, k, op.act(1, k, s, a), s.permuted(inners))
            bp = block_perm(s, s.permuted(sizes))
            assert lhs == op.act(1, sum(sizes), bp, gab)


@given(st.data())
@settings(max_examples=100)
def test_inner_equivariance_sampled(data):
    op = barratt_eccles(4)
    k = data.draw(st.integers(1, 2))
    profile = tuple(data.draw(st.integers(0, 2)) for _ in range(k))
    a = data.draw(st.sampled_from(op.elements(1, k)))
    inners = tuple((n, data.draw(st.sampled_from(op.elements(1, n)))) for n in profile)
    taus = tuple(data.draw(st.sampled_from(perms(n))) for n in profile)
    gab = op.compose(1, k, a, inners)
    moved = tuple((n, op.act(1, n, t, x)) for (n, x), t in zip(inners, taus))
    assert op.compose(1, k, a, moved) == op.act(1, sum(profile), block_sum(taus), gab)


def test_nerve_degrees_form_set_operads():
    op = barratt_eccles(3)
    for degree in (0, 1):
        rep = validate_operad(simplicial_degree_operad(op, degree))
        assert rep["ok"], (degree, rep["failures"][:3])


def test_level4_validation_within_budget():
    start = time.monotonic()
    op = barratt_eccles(4)
    rep = validate_operad(op)
    assert rep["ok"], rep["failures"][:3]
    assert is_sigma_free(op)
    assert time.monotonic() - start < 10.0
