from fractions import Fraction

import pytest

from gammasite import H, SM, norm_ball_HQ1, product, quotient, sphere
from gammasite.families import check_unit_subgroup, diagonal_units, pair_index, unit_group
from gammasite.gamma_core import PointedMap, validate_salgebra
from gammasite.structures import nil_monoid, prime_field, product_semiring, zmod


def test_H_levels_are_tuples():
    A = H(zmod(3))
    assert len(A.level(2)) == 9
    assert A.act(PointedMap.sigma(2), (1, 2)) == (0,)
    assert A.mul((2,), 1, (1, 2), 2) == (2, 1)


def test_SM_levels():
    S = SM(nil_monoid())
    assert len(S.level(3)) == 1 + 2 * 3
    assert S.mul(S.embed(2), 1, S.embed(2), 1) == S.base(1)
    assert len(sphere().level(2)) == 3


def test_quotient_orbits_use_minimum():
    A = H(zmod(6))
    Q = quotient(A, [(1,), (5,)])
    assert Q.canon((5,), 1) == (1,)
    assert Q.canon((2, 4), 2) == (2, 4)
    assert Q.canon((4, 2), 2) == (2, 4)
    assert len(Q.level(1)) == 4


def test_unit_subgroup_check():
    A = H(zmod(6))
    assert sorted(unit_group(A)) == [(1,), (5,)]
    with pytest.raises(ValueError):
        quotient(A, [(2,)])
    assert check_unit_subgroup(A, [(1,), (5,)])


def test_diagonal_units_over_F3():
    K = prime_field(3)
    KK = product_semiring(K, K)
    G = diagonal_units(K)
    assert sorted(G) == sorted([(pair_index(K, 1, 1),), (pair_index(K, 2, 2),)])
    Q = quotient(H(KK), G)
    assert len(Q.level(1)) == 5


def test_product_algebra_is_algebra():
    P = product([H(zmod(2)), SM(nil_monoid())])
    assert len(P.level(1)) == 2 * 3
    assert validate_salgebra(P, 2) == []


def test_norm_ball_membership():
    B = norm_ball_HQ1()
    assert B.contains((Fraction(1, 2), Fraction(-1, 2)), 2)
    assert not B.contains((Fraction(2, 3), Fraction(2, 3)), 2)
    assert B.divides_power((Fraction(1, 2),), (Fraction(1),))
    assert not B.divides_power((Fraction(1),), (Fraction(1, 2),))
