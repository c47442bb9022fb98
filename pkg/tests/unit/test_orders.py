import pytest

from buraulab.orders import (
    LevelFactorization,
    gamma_prime_quotient_order,
    gamma_quotient_order,
    predicted_braid_quotient_order,
    predicted_reduced_quotient_order,
    sp_order,
    stab_order,
    unimodular_count,
)


@pytest.mark.parametrize(
    ("g", "level", "expected"),
    [(1, 2, 6), (1, 3, 24), (1, 4, 48), (2, 2, 720), (2, 3, 51840), (1, 12, 1152)],
)
def test_sp_order(g, level, expected):
    assert sp_order(g, level) == expected


def test_sp_order_is_multiplicative_over_coprime_levels():
    for g in (1, 2, 3):
        assert sp_order(g, 12) == sp_order(g, 4) * sp_order(g, 3)
        assert sp_order(g, 10) == sp_order(g, 2) * sp_order(g, 5)


def test_stabilizer_orders():
    assert unimodular_count(2, 3) == 80
    assert stab_order(2, 3) == 648
    assert stab_order(2, 4) == 3072
    assert stab_order(1, 7) == 7


def test_level_factorization():
    split = LevelFactorization.of(12)
    assert split.two_part == 2
    assert split.odd_part == 3
    assert split.prime_powers == ((2, 2), (3, 1))
    assert LevelFactorization.of(1).prime_powers == ()
    with pytest.raises(ValueError):
        LevelFactorization.of(0)


def test_gamma_quotient_orders():
    assert gamma_quotient_order(1, 7) == 7
    assert gamma_quotient_order(2, 12) == 1152
    assert gamma_quotient_order(3, 3) == 648
    assert gamma_prime_quotient_order(4, 3) == 216
    assert gamma_prime_quotient_order(5, 3) == 51840
    with pytest.raises(ValueError):
        gamma_quotient_order(0, 3)


@pytest.mark.parametrize(
    ("n", "level", "expected"),
    [(2, 7, 7), (3, 6, 144), (3, 12, 1152), (4, 2, 24), (4, 4, 1536), (4, 6, 15552)],
)
def test_predicted_braid_quotient_order(n, level, expected):
    assert predicted_braid_quotient_order(n, level) == expected


def test_predicted_reduced_quotient_order():
    assert predicted_reduced_quotient_order(2, 5) == 1
    assert predicted_reduced_quotient_order(4, 3) == 216
    assert predicted_reduced_quotient_order(5, 3) == 51840
    assert predicted_reduced_quotient_order(4, 2) == 24


def test_index_identity_for_gcd_and_lcm():
    first, second, common, modulus = 4, 6, 2, 12
    for n_minus_1 in (2, 3, 4):
        def order(level, n_minus_1=n_minus_1):
            return gamma_quotient_order(n_minus_1, level)

        assert order(first) // order(common) == order(modulus) // order(second)


def test_genus_must_be_positive():
    with pytest.raises(ValueError):
        sp_order(0, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_doubling_index_does_not_depend_on_the_odd_level(n):
    ratios = {
        gamma_quotient_order(n - 1, 2 * level) // gamma_quotient_order(n - 1, level)
        for level in (1, 3, 5)
    }
    assert ratios == {gamma_quotient_order(n - 1, 2)}
