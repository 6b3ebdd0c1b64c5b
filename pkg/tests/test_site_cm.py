import itertools

import pytest

from gammasite.site_cm import (
    CMCat, Morphism, divides_power, hom_exists_F, ideal_from_sieve, is_ideal, is_sieve, power_sequence,
    sieve_from_ideal,
)
from gammasite.structures import all_monoids, monoid_ideals, zmod


class Mult:
    def __init__(self, R):
        self.elements = list(R.elements)
        self.product = lambda a, b: R.mul[a][b]
        self.one = R.one


def test_power_sequence_of_two_mod_12():
    R = zmod(12)
    assert power_sequence(2, lambda a, b: R.mul[a][b]) == [2, 4, 8]


def test_divides_power_mod_6():
    M = Mult(zmod(6))
    assert divides_power(2, 4, M)
    assert not divides_power(2, 3, M)
    assert divides_power(0, 3, M)
    assert hom_exists_F(2, 4, M)


@pytest.mark.parametrize("M", all_monoids(4), ids=lambda M: ",".join(M.names))
def test_composition_is_associative_and_unital(M):
    C = CMCat(M)
    for f, g, h in itertools.product(M.elements, repeat=3):
        for a in C.hom(f, g):
            assert C.compose(C.identity(g), a) == a == C.compose(a, C.identity(f))
            for b in C.hom(g, h):
                for c in C.hom(h, h):
                    assert C.compose(c, C.compose(b, a)) == C.compose(C.compose(c, b), a)


@pytest.mark.parametrize("M", all_monoids(4), ids=lambda M: ",".join(M.names))
def test_sieves_on_one_are_ideals(M):
    for I in monoid_ideals(M):
        assert is_ideal(M, I)
        S = sieve_from_ideal(M, I, M.one)
        assert is_sieve(M, S, M.one)
        assert ideal_from_sieve(M, S) == I


def test_non_ideal_is_rejected():
    M = all_monoids(3)[-1]
    with pytest.raises(ValueError):
        sieve_from_ideal(M, {M.one}, M.one)


def test_morphism_labels_witness_divisibility():
    M = all_monoids(3)[0]
    C = CMCat(M)
    for f, g in itertools.product(M.elements, repeat=2):
        assert all(M.product(m.label, g) == f for m in C.hom(f, g))
    assert Morphism(0, 0, 0) in C.hom(0, 0)
