import pytest

np = pytest.importorskip("numpy")

from buraulab.braids import burau_sigma  # noqa: E402
from buraulab.groups.engine import (  # noqa: E402
    EnumerationLimitError,
    ModMatrix,
    NonInvertibleError,
    all_of,
    braid_image,
    close,
    congruence_kernel,
    filter_matrices,
    fixes_mask,
    gamma_prime_quotient_group,
    gamma_quotient_group,
    intersection,
    is_elementary_abelian_2,
    is_internal_direct_product,
    isometry_mask,
    reduce,
    set_product,
    sp_group,
    stabilizer_subgroup,
)
from buraulab.orders import (  # noqa: E402
    gamma_prime_quotient_order,
    gamma_quotient_order,
    sp_order,
)
from buraulab.symplectic import BasisData, FormSpec  # noqa: E402


def test_mod_matrix_arithmetic():
    sigma = reduce(burau_sigma(2, 1), 5)
    assert sigma.rows == ((2, 4), (1, 0))
    assert (sigma @ sigma.inverse()).is_identity()
    assert sigma.balanced_lift().rows == ((2, -1), (1, 0))
    assert sigma.reduce(1).is_identity()


def test_mod_matrix_rejects_unreduced_entries():
    with pytest.raises(ValueError):
        ModMatrix(2, 3, (0, 1, 2, 3))


def test_non_invertible_generator():
    singular = ModMatrix.from_rows([[2, 0], [0, 1]], 4)
    with pytest.raises(NonInvertibleError):
        singular.inverse()
    with pytest.raises(NonInvertibleError):
        close([singular])


def test_closure_of_the_identity_is_trivial():
    group = close([ModMatrix.identity(3, 5)])
    assert group.order == 1
    assert ModMatrix.identity(3, 5) in group


def test_arnold_image_has_factorial_order():
    group = braid_image(4, 2)
    assert group.order == 24
    assert group.verify_closed()
    assert reduce(burau_sigma(4, 2), 2) in group


def test_pure_braid_kernel_is_elementary_abelian():
    group = braid_image(4, 4)
    assert group.order == 1536
    kernel = congruence_kernel(group, 2)
    assert kernel.order == 64
    assert is_elementary_abelian_2(kernel)
    assert not is_elementary_abelian_2(group)


def test_congruence_kernel_needs_a_divisor():
    with pytest.raises(ValueError):
        congruence_kernel(braid_image(3, 4), 3)


def test_kernels_multiply_to_the_gcd_kernel():
    group = braid_image(3, 12)
    assert group.order == 1152
    four, six = congruence_kernel(group, 4), congruence_kernel(group, 6)
    assert set_product(four, six).same_elements(congruence_kernel(group, 2))
    assert intersection(four, six).order == 1


def test_internal_direct_products():
    group = braid_image(3, 6)
    assert group.order == 144
    three, two = congruence_kernel(group, 3), congruence_kernel(group, 2)
    assert is_internal_direct_product(group, three, two)
    assert is_internal_direct_product(group, group, congruence_kernel(group, 6))

    smaller = braid_image(3, 4)
    half = congruence_kernel(smaller, 2)
    assert not is_internal_direct_product(smaller, half, half)


@pytest.mark.parametrize(
    ("g", "modulus"), [(1, level) for level in range(2, 10)] + [(2, 2)]
)
def test_sp_group_orders(g, modulus):
    assert sp_group(g, modulus).order == sp_order(g, modulus)


def test_stabilizer_of_e1():
    group = sp_group(1, 2)
    assert stabilizer_subgroup(group, (1, 0)).order == 2
    with pytest.raises(ValueError):
        stabilizer_subgroup(group, (2, 0))


@pytest.mark.parametrize("modulus", [2, 3])
def test_filter_matches_closure(modulus):
    mask = isometry_mask(FormSpec.standard(2).gram, modulus)
    brute = filter_matrices(2, modulus, mask)
    assert brute.order == sp_order(1, modulus)
    assert brute.same_elements(sp_group(1, modulus))


def test_filter_counts_gamma_prime_residues():
    mask = all_of(
        isometry_mask(FormSpec.reduced(3).gram, 3),
        fixes_mask(BasisData(4).v_prime, 3),
    )
    assert filter_matrices(3, 3, mask).order == 216


def test_gamma_quotient_groups_match_closed_forms():
    for n, modulus in [(2, 5), (3, 3), (4, 2)]:
        group = gamma_quotient_group(n, modulus)
        assert group.order == gamma_quotient_order(n - 1, modulus)
        assert group.verify_closed()
    assert gamma_prime_quotient_group(3, 3).order == gamma_prime_quotient_order(3, 3)


def test_enumeration_respects_the_memory_cap():
    with pytest.raises(EnumerationLimitError):
        braid_image(4, 12, mem_cap_mb=1)


@pytest.mark.slow
def test_sp4_mod_3_and_its_stabilizer():
    group = sp_group(2, 3)
    assert group.order == 51840
    assert stabilizer_subgroup(group, (1, 0, 0, 0)).order == 648


@pytest.mark.slow
def test_b5_mod_3():
    assert braid_image(5, 3).order == 51840


@pytest.mark.slow
def test_stabilizer_of_sp4_mod_4():
    group = sp_group(2, 4)
    assert stabilizer_subgroup(group, (1, 0, 0, 0)).order == 3072


@pytest.mark.slow
def test_gamma_prime_residues_for_four_strands():
    assert gamma_quotient_group(4, 3).order == 648
    assert gamma_prime_quotient_group(4, 3).order == 216
