import random

import pytest

pytest.importorskip("numpy")

from buraulab.groups.engine import (  # noqa: E402
    ModMatrix,
    gamma_prime_quotient_group,
    gamma_quotient_group,
    reduce,
    sp_group,
    stabilizer_subgroup,
)
from buraulab.lifting import (  # noqa: E402
    LiftFamily,
    LiftRequest,
    NotSymplecticError,
    StabilizerShapeError,
    crt_lift,
    gamma_lift,
    gamma_prime_lift,
    lift,
    sp_lift,
    stab_lift,
)
from buraulab.matrices import DimensionError, IntMatrix  # noqa: E402
from buraulab.symplectic import (  # noqa: E402
    FormSpec,
    MembershipError,
    SubgroupSpec,
    in_gamma,
    is_isometry,
)


def _assert_symplectic_lift(lifted: IntMatrix, target: ModMatrix) -> None:
    assert reduce(lifted, target.modulus) == target
    assert is_isometry(FormSpec.standard(lifted.dim), lifted)


def _random_sl2(rng: random.Random, steps: int = 6) -> IntMatrix:
    matrix = IntMatrix.identity(2)
    for _ in range(steps):
        t = rng.randint(-3, 3)
        step = [[1, t], [0, 1]] if rng.random() < 0.5 else [[1, 0], [t, 1]]
        matrix = matrix @ IntMatrix.from_rows(step)
    return matrix


@pytest.mark.parametrize("modulus", [2, 3, 4, 5, 6])
def test_every_sp2_residue_lifts(modulus):
    for element in sp_group(1, modulus).elements():
        _assert_symplectic_lift(sp_lift(element, 1), element)


def test_every_sp4_residue_mod_2_lifts():
    for element in sp_group(2, 2).elements():
        _assert_symplectic_lift(sp_lift(element, 2), element)


@pytest.mark.slow
def test_every_sp4_residue_mod_3_lifts():
    group = sp_group(2, 3)
    assert group.order == 51840
    for element in group.elements():
        _assert_symplectic_lift(sp_lift(element, 2), element)


def test_sp_lift_handles_large_first_columns():
    target = ModMatrix.from_rows(
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], 9
    )
    _assert_symplectic_lift(sp_lift(target, 2), target)


def test_stabilizer_residues_lift_mod_2():
    group = stabilizer_subgroup(sp_group(2, 2), (1, 0, 0, 0))
    assert group.order == 48
    for element in group.elements():
        lifted = stab_lift(element, 2)
        _assert_symplectic_lift(lifted, element)
        assert lifted.column(0) == (1, 0, 0, 0)


@pytest.mark.slow
def test_stabilizer_residues_lift_mod_3():
    group = stabilizer_subgroup(sp_group(2, 3), (1, 0, 0, 0))
    for element in group.elements():
        _assert_symplectic_lift(stab_lift(element, 2), element)


def test_modulus_one_lifts_to_identity():
    assert sp_lift(ModMatrix.identity(2, 1), 1).is_identity()
    assert gamma_lift(ModMatrix.identity(3, 1), 3).is_identity()


def test_sp_lift_rejects_non_symplectic_residues():
    with pytest.raises(NotSymplecticError):
        sp_lift(ModMatrix.from_rows([[2, 0], [0, 1]], 5), 1)
    with pytest.raises(DimensionError):
        sp_lift(ModMatrix.identity(3, 5), 1)


def test_stab_lift_requires_the_stabilizer_layout():
    rotation = ModMatrix.from_rows([[0, 1], [-1, 0]], 3)
    with pytest.raises(StabilizerShapeError):
        stab_lift(rotation, 1)


@pytest.mark.parametrize(("first", "second"), [(3, 4), (5, 2), (9, 4), (7, 3)])
def test_crt_lift_meets_both_congruences(first, second):
    rng = random.Random(29 * first + second)
    for _ in range(50):
        matrix = _random_sl2(rng)
        lifted = crt_lift(matrix, first, second, LiftFamily.SP)
        assert is_isometry(FormSpec.standard(2), lifted)
        assert reduce(lifted, first) == reduce(matrix, first)
        assert reduce(lifted, second) == ModMatrix.identity(2, second)


def test_crt_lift_needs_identity_modulo_the_gcd():
    matrix = IntMatrix.from_rows([[2, -1], [1, 0]])
    with pytest.raises(MembershipError):
        crt_lift(matrix, 4, 6, LiftFamily.SP)
    square = IntMatrix.from_rows([[3, -2], [2, -1]])
    lifted = crt_lift(square, 4, 6, LiftFamily.SP)
    assert reduce(lifted, 4) == reduce(square, 4)
    assert lifted.is_congruent_identity(6)


@pytest.mark.parametrize(("n", "modulus"), [(3, 3), (4, 2), (5, 2)])
def test_gamma_residues_lift_into_gamma(n, modulus):
    for element in gamma_quotient_group(n, modulus).elements():
        lifted = gamma_lift(element, n)
        assert in_gamma(lifted, SubgroupSpec.gamma(n))
        assert reduce(lifted, modulus) == element


@pytest.mark.parametrize(("n", "modulus"), [(3, 3), (4, 2)])
def test_gamma_prime_residues_lift_into_gamma_prime(n, modulus):
    for element in gamma_prime_quotient_group(n, modulus).elements():
        lifted = gamma_prime_lift(element, n)
        assert in_gamma(lifted, SubgroupSpec.gamma_prime(n))
        assert reduce(lifted, modulus) == element


def test_gamma_lift_rejects_foreign_residues():
    swap = ModMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]], 3)
    with pytest.raises(MembershipError):
        gamma_lift(swap, 3)


def test_lift_dispatches_on_family():
    target = ModMatrix.from_rows([[2, 4], [1, 0]], 5)
    assert lift(LiftRequest(target, LiftFamily.SP)) == sp_lift(target, 1)
    residue = gamma_quotient_group(3, 3)
    element = next(residue.elements())
    assert lift(LiftRequest(element, LiftFamily.GAMMA)) == gamma_lift(element, 3)


def test_lift_with_levels_uses_crt():
    target = ModMatrix.from_rows([[2, 4], [1, 0]], 5)
    lifted = lift(LiftRequest(target, LiftFamily.SP, levels=(5, 3)))
    assert reduce(lifted, 5) == target
    assert lifted.is_congruent_identity(3)
