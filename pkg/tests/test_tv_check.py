import pytest

from gammasite.structures import boolean, gf4, prime_field, zmod
from gammasite.tv_check import (
    build_counterexample, default_catalog, square_commutes, verify_not_faithful, verify_pushout,
)


@pytest.fixture(scope="module")
def f3():
    return build_counterexample(prime_field(3))


def test_sizes_over_F3(f3):
    assert len(f3.A_prime.level(1)) == 5
    assert len(f3.apex.level(1)) == 2
    assert square_commutes(f3)


def test_rejects_small_or_non_fields():
    with pytest.raises(ValueError):
        build_counterexample(prime_field(2))
    with pytest.raises(ValueError):
        build_counterexample(zmod(4))
    with pytest.raises(ValueError):
        build_counterexample(boolean())


def test_catalog_is_large_enough(f3):
    cat = default_catalog(f3)
    assert len(cat) >= 10
    assert len({label for label, _ in cat}) == len(cat)


def test_pushout_factorizations_unique(f3):
    rep = verify_pushout(f3, default_catalog(f3, max_semiring=5, max_monoid=3))
    assert rep.ok and rep.status == "catalog-verified"
    apex = next(e for e in rep.entries if e.label == "apex")
    assert apex.commuting_pairs >= 1


def test_base_change_kills_the_unit(f3):
    rep = verify_not_faithful(f3, 2)
    assert rep.differs_from_identity and rep.moves_level1
    assert rep.order == 2 and rep.power_is_identity
    assert rep.base_change_identity == {1: True, 2: True}


def test_unit_one_is_rejected(f3):
    with pytest.raises(ValueError):
        verify_not_faithful(f3, 1)


def test_second_projection_over_F4():
    D = build_counterexample(gf4(), j=2)
    assert len(D.apex.level(1)) == 2
    for u in gf4().units():
        if u != gf4().one:
            rep = verify_not_faithful(D, u)
            assert rep.differs_from_identity and all(rep.base_change_identity.values())
            assert rep.order == 3
