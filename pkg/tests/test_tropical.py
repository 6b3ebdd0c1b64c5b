from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gammasite.tropical import (
    BOTTOM, WHOLE, ConvexPLFunction, CofiniteOpen, RationalSet, convexity_obstruction, cover_witness,
    distance_sum, open_of, phi, trop_add, trop_cover_check, trop_divides, trop_mul,
    validate_tropical_partition,
)
from oracles import divides_by_difference, sup_agrees

inner = st.fractions(min_value=F(1, 50), max_value=F(49, 50), max_denominator=50)


@st.composite
def pl_functions(draw, max_breaks=3):
    pts = sorted(set(draw(st.lists(inner, max_size=max_breaks))))
    mults = [draw(st.integers(1, 3)) for _ in pts]
    return ConvexPLFunction.make(list(zip(pts, mults)), draw(st.integers(-3, 3)),
                                 draw(st.fractions(min_value=-2, max_value=2, max_denominator=8)))


def test_phi_values():
    f = phi(F(1, 4), F(1, 2))
    assert f(F(1, 8)) == F(1, 8) and f(F(1, 3)) == 0 and f(F(3, 4)) == F(1, 4)


def test_phi_join():
    assert trop_add(phi(F(1, 4), F(1, 2)), phi(F(1, 2), F(3, 4))) == phi(F(1, 2), F(1, 2))


def test_bottom_is_additive_zero():
    f = phi(F(1, 3), F(2, 3))
    assert trop_add(BOTTOM, f) == f and trop_mul(BOTTOM, f) == BOTTOM
    assert open_of(BOTTOM).is_empty


def test_invalid_function_rejected():
    with pytest.raises(ValueError):
        ConvexPLFunction(((F(1, 2), 0),))
    with pytest.raises(ValueError):
        ConvexPLFunction(((F(3, 2), 1),))


@settings(max_examples=200, deadline=None)
@given(f=pl_functions(), g=pl_functions())
def test_trop_add_is_pointwise_max(f, g):
    assert sup_agrees(trop_add(f, g), [f, g])


@given(f=pl_functions(), g=pl_functions(), h=pl_functions())
def test_semiring_laws(f, g, h):
    assert trop_add(f, g) == trop_add(g, f)
    assert trop_add(trop_add(f, g), h) == trop_add(f, trop_add(g, h))
    assert trop_add(f, f) == f
    assert trop_mul(f, trop_add(g, h)) == trop_add(trop_mul(f, g), trop_mul(f, h))


@settings(max_examples=300)
@given(f=pl_functions(), g=pl_functions())
def test_divisibility_by_multiplicity(f, g):
    assert trop_divides(g, f) == divides_by_difference(g, f)
    assert trop_divides(g, trop_mul(f, g))


def test_power_divisibility_uses_corner_sets():
    g = distance_sum([F(1, 3)])
    f = ConvexPLFunction.make([(F(1, 3), 1)])
    assert not trop_divides(g, f) and trop_divides(g, f, power=True)


def test_cofinite_components():
    U = CofiniteOpen.minus(F(1, 3), F(2, 3))
    assert U.components() == [(0, F(1, 3)), (F(1, 3), F(2, 3)), (F(2, 3), 1)]
    assert U.subset_of(WHOLE) and not WHOLE.subset_of(U)


def test_cover_check_and_witness():
    target = CofiniteOpen.minus(F(1, 2))
    fam = [CofiniteOpen.minus(F(1, 4), F(1, 2)), CofiniteOpen.minus(F(1, 2), F(3, 4))]
    assert trop_cover_check(fam, target)
    w = cover_witness(fam, target)
    assert w is not None and validate_tropical_partition(w, fam, target)
    assert not trop_cover_check([CofiniteOpen.minus(F(1, 4), F(1, 2))], target)


def test_member_outside_target_raises():
    with pytest.raises(ValueError):
        trop_cover_check([WHOLE], CofiniteOpen.minus(F(1, 2)))


def test_empty_target_is_covered_by_nothing():
    from gammasite.tropical import EMPTY_OPEN
    assert trop_cover_check([], EMPTY_OPEN)
    assert not trop_cover_check([], WHOLE)


def test_convexity_obstruction_on_two_points():
    v = convexity_obstruction(F(1, 4), F(1, 2), F(3, 4), RationalSet(frozenset({F(1, 4), F(3, 4)})))
    assert v.label == "FAILS"
    U, fam = v.witness
    assert U == CofiniteOpen.minus(F(1, 2)) and trop_cover_check(list(fam), U)


def test_interval_is_continuous():
    v = convexity_obstruction(F(1, 4), F(1, 2), F(3, 4), RationalSet(intervals=((F(1, 3), F(2, 3)),)))
    assert v.continuous and v.covers_checked > 0
