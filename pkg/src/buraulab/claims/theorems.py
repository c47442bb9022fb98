"""Finite-quotient checks of the braid congruence theorems.

Each check enumerates the relevant residue groups and compares what it sees
with the closed-form prediction. Statements about the infinite groups are
checked at the requested finite level only.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from math import comb, factorial, gcd, lcm
from typing import Any

from ..groups.engine import (
    EnumerationLimitError,
    GroupSet,
    ModMatrix,
    congruence_kernel,
    intersection,
    is_elementary_abelian_2,
    is_internal_direct_product,
    reduce,
    set_product,
)
from ..groups.permutations import (
    default_presentation,
    find_presentation_section,
    permutation_image,
    section_targets,
)
from ..lifting import gamma_lift, gamma_prime_lift, in_gamma_residue
from ..matrices import DimensionError, IntMatrix
from ..orders import (
    LevelFactorization,
    gamma_prime_quotient_order,
    gamma_quotient_order,
    predicted_braid_quotient_order,
    predicted_reduced_quotient_order,
    sp_order,
)
from ..symplectic import SubgroupSpec, in_gamma
from .base import ReportStatus, VerificationReport, Workbench, Witness

logger = logging.getLogger(__name__)

# largest Sp group the Gamma enumerations may build without --allow-big
MAX_DESK_ELEMENTS = 3_000_000

Outcome = tuple[Any, Any, ReportStatus, list[Witness] | None]


def within_envelope(n: int, level: int) -> bool:
    """Desk-scale sizes: n <= 5 with l <= 6, n <= 4 with l <= 12, n <= 6 with l = 2."""
    return (
        (n <= 5 and level <= 6) or (n <= 4 and level <= 12) or (n <= 6 and level <= 2)
    )


def _envelope_reason(n: int, level: int, bench: Workbench) -> str | None:
    if bench.allow_big or within_envelope(n, level):
        return None
    return (
        f"n = {n}, level = {level} is outside the desk-scale envelope; "
        "pass --allow-big"
    )


def _gamma_reason(n: int, level: int, bench: Workbench) -> str | None:
    reason = _envelope_reason(n, level, bench)
    if reason or bench.allow_big:
        return reason
    if sp_order(n // 2, level) > MAX_DESK_ELEMENTS:
        return f"enumerating Gamma_{n - 1} mod {level} needs --allow-big"
    return None


def _run_claim(
    claim: str,
    params: Mapping[str, Any],
    reason: str | None,
    body: Callable[[], Outcome],
) -> VerificationReport:
    started = time.perf_counter()

    def elapsed() -> int:
        return int((time.perf_counter() - started) * 1000)

    if reason is not None:
        return VerificationReport.skipped(claim, params, reason)
    try:
        predicted, observed, status, witness = body()
    except EnumerationLimitError as exc:
        logger.warning("%s skipped: %s", claim, exc)
        return VerificationReport.skipped(claim, params, str(exc), elapsed())
    return VerificationReport(
        claim=claim,
        params=dict(params),
        predicted=predicted,
        observed=observed,
        status=status,
        witness=witness,
        elapsed_ms=elapsed(),
    )


def _compare(predicted: Any, observed: Any, group: GroupSet) -> Outcome:
    if predicted == observed:
        return predicted, observed, ReportStatus.VERIFIED, None
    return predicted, observed, ReportStatus.REFUTED, list(group.generators) or [
        next(group.elements())
    ]


def _bench(bench: Workbench | None) -> Workbench:
    return bench if bench is not None else Workbench()


def _order_oracle(reduced: bool) -> Callable[[int, int], int]:
    if reduced:
        return predicted_reduced_quotient_order
    return predicted_braid_quotient_order


def verify_theorem_a(
    n: int, level: int, *, reduced: bool = False, bench: Workbench | None = None
) -> VerificationReport:
    """Order of B_n mod level and its structure.

    Mixed levels also check the 2-part / odd-part direct product; level 4
    with n >= 4 checks that kernel(2) is elementary abelian of order
    2^(n choose 2).
    """
    bench = _bench(bench)
    params = {"n": n, "level": level, "reduced": reduced}
    if reduced and n < 3:
        return VerificationReport.skipped(
            "theorem_a", params, "the reduced representation is zero for n = 2"
        )

    def body() -> Outcome:
        group = bench.store.braid_image(n, level, reduced=reduced)
        oracle = _order_oracle(reduced)
        predicted: dict[str, Any] = {"order": oracle(n, level)}
        observed: dict[str, Any] = {"order": group.order}
        split = LevelFactorization.of(level)
        if split.two_part and split.odd_part > 1:
            two_kernel = congruence_kernel(group, 2**split.two_part)
            odd_kernel = congruence_kernel(group, split.odd_part)
            predicted["direct_product"] = True
            observed["direct_product"] = is_internal_direct_product(
                group, odd_kernel, two_kernel
            )
        if not reduced and n >= 4 and level == 4:
            pure = congruence_kernel(group, 2)
            predicted["kernel_mod_2"] = {
                "order": 2 ** comb(n, 2),
                "elementary_abelian": True,
            }
            observed["kernel_mod_2"] = {
                "order": pure.order,
                "elementary_abelian": is_elementary_abelian_2(pure),
            }
        return _compare(predicted, observed, group)

    return _run_claim("theorem_a", params, _envelope_reason(n, level, bench), body)


def _permutation_bijective(group: GroupSet, n: int) -> bool:
    images = [permutation_image(element.reduce(2)) for element in group.elements()]
    if any(image is None for image in images):
        return False
    return len(set(images)) == len(images) == factorial(n)


def _standard_bijective(group: GroupSet, n: int, bench: Workbench) -> bool:
    """Reduction mod 2 maps the group one-to-one onto S_n acting on F_2^(n-1)."""
    standard = bench.store.braid_image(n, 2, reduced=True)
    images = group.matrices() % 2
    if not standard.contains_arrays(images).all():
        return False
    distinct = len(set(standard.codec.encode(images).tolist()))
    return distinct == group.order == standard.order == factorial(n)


def _fills_ratio(n: int, level: int, *, reduced: bool) -> int:
    if reduced:
        return gamma_prime_quotient_order(n, 2 * level) // gamma_prime_quotient_order(
            n, level
        )
    return gamma_quotient_order(n - 1, 2 * level) // gamma_quotient_order(
        n - 1, level
    )


def verify_theorem_b(
    n: int, level: int, *, reduced: bool = False, bench: Workbench | None = None
) -> VerificationReport:
    """The image of B_n[level] seen inside B_n mod 2*level.

    With ``reduced`` the reduced representation is used, and for odd levels
    the mod 2 image is compared with the standard representation of S_n.
    """
    bench = _bench(bench)
    params = {"n": n, "level": level, "reduced": reduced}
    modulus = 2 * level
    if reduced and n < 3:
        return VerificationReport.skipped(
            "theorem_b", params, "the reduced representation is zero for n = 2"
        )

    def body() -> Outcome:
        group = bench.store.braid_image(n, modulus, reduced=reduced)
        kernel = congruence_kernel(group, level)
        if level % 2 and n >= 4:
            mod_two = "standard_bijective" if reduced else "permutation_bijective"
            bijective = (
                _standard_bijective(kernel, n, bench)
                if reduced
                else _permutation_bijective(kernel, n)
            )
            predicted = {
                "case": "odd",
                "kernel_order": factorial(n),
                mod_two: True,
            }
            observed = {
                "case": "odd",
                "kernel_order": kernel.order,
                mod_two: bijective,
            }
        else:
            ratio = _fills_ratio(n, level, reduced=reduced)
            predicted = {"case": "fills", "kernel_order": ratio}
            observed = {"case": "fills", "kernel_order": kernel.order}
        return _compare(predicted, observed, group)

    return _run_claim("theorem_b", params, _envelope_reason(n, modulus, bench), body)


@dataclass(slots=True)
class MembershipResult:
    member: bool
    explanation: list[str] = field(default_factory=list)


def _subgroup(n: int, reduced: bool) -> SubgroupSpec:
    return SubgroupSpec.gamma_prime(n) if reduced else SubgroupSpec.gamma(n)


def _mod_two_admissible(
    element: ModMatrix, n: int, reduced: bool, bench: Workbench
) -> bool:
    """Permutation matrix mod 2, or the standard S_n image when reduced."""
    residue = element.reduce(2)
    if reduced:
        return residue in bench.store.braid_image(n, 2, reduced=True)
    return permutation_image(residue) is not None


def member(
    matrix: IntMatrix,
    n: int,
    level: int,
    *,
    reduced: bool = False,
    bench: Workbench | None = None,
) -> MembershipResult:
    """Decide M in rho(B_n[level]) from the characterisation of the image.

    ``reduced`` asks the same question for the reduced representation, where
    M is (n-1)x(n-1) and Gamma' replaces Gamma.
    """
    dim = n - 1 if reduced else n
    if reduced and n < 3:
        raise ValueError("the reduced representation needs n >= 3")
    if matrix.dim != dim:
        raise DimensionError(
            f"expected an {dim}x{dim} matrix, got {matrix.dim}x{matrix.dim}"
        )
    name = f"Gamma'_{n - 1}" if reduced else f"Gamma_{n - 1}"
    reasons: list[str] = []
    if not in_gamma(matrix, _subgroup(n, reduced)):
        reasons.append(f"not in {name}")
    if not matrix.is_congruent_identity(level):
        reasons.append(f"not congruent to the identity mod {level}")
    if level % 2 and n >= 4:
        if not _mod_two_admissible(reduce(matrix, 2), n, reduced, _bench(bench)):
            target = "the standard S_n image" if reduced else "a permutation matrix"
            reasons.append(f"reduction mod 2 is not {target}")
    if reasons:
        return MembershipResult(False, reasons)
    return MembershipResult(
        True, [f"in {name}[{level}] with an admissible mod 2 image"]
    )


def member_residue(
    element: ModMatrix,
    n: int,
    level: int,
    *,
    reduced: bool = False,
    bench: Workbench | None = None,
) -> bool:
    """Residue-level shadow of :func:`member` for an element of a Gamma quotient."""
    if element.modulus % level or (level % 2 and n >= 4 and element.modulus % 2):
        raise ValueError(
            f"modulus {element.modulus} cannot see level {level} and mod 2"
        )
    if not in_gamma_residue(element, _subgroup(n, reduced)):
        return False
    if not element.reduce(level).is_identity():
        return False
    if level % 2 and n >= 4:
        return _mod_two_admissible(element, n, reduced, _bench(bench))
    return True


def find_nonbraid_gamma_element(
    n: int, bench: Workbench | None = None, *, reduced: bool = False
) -> IntMatrix | None:
    """An element of Gamma_{n-1} (Gamma'_{n-1}) whose mod 2 image no braid reaches."""
    bench = _bench(bench)
    if reduced:
        for element in bench.store.gamma_prime_group(n, 2).elements():
            if not _mod_two_admissible(element, n, True, bench):
                return gamma_prime_lift(element, n)
        return None
    for element in bench.store.gamma_group(n, 2).elements():
        if permutation_image(element) is None:
            return gamma_lift(element, n)
    return None


def verify_multiplicativity(
    n: int, first: int, second: int, *, bench: Workbench | None = None
) -> VerificationReport:
    """kernel(l) * kernel(m) = kernel(gcd); kernel(l) meets kernel(m) in kernel(lcm)."""
    bench = _bench(bench)
    params = {"n": n, "l": first, "m": second}
    common, modulus = gcd(first, second), lcm(first, second)

    def body() -> Outcome:
        group = bench.store.braid_image(n, modulus)
        left = congruence_kernel(group, first)
        right = congruence_kernel(group, second)
        product = set_product(left, right)
        meet = intersection(left, right)
        predicted = {
            "group_order": predicted_braid_quotient_order(n, modulus),
            "product_is_gcd_kernel": True,
            "intersection_order": 1,
        }
        observed = {
            "group_order": group.order,
            "product_is_gcd_kernel": product.same_elements(
                congruence_kernel(group, common)
            ),
            "intersection_order": meet.order,
        }
        return _compare(predicted, observed, group)

    reason = _envelope_reason(n, modulus, bench)
    return _run_claim("multiplicativity", params, reason, body)


def verify_nonsplit(
    n: int, k: int, *, reduced: bool = False, bench: Workbench | None = None
) -> VerificationReport:
    """Search for a splitting of B_n mod 2^k onto S_n through a presentation."""
    bench = _bench(bench)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    params = {"n": n, "k": k, "reduced": reduced}
    modulus = 2**k
    if reduced and n < 3:
        return VerificationReport.skipped(
            "nonsplit", params, "the reduced representation is zero for n = 2"
        )

    def body() -> Outcome:
        group = bench.store.braid_image(n, modulus, reduced=reduced)
        presentation = default_presentation(n)
        targets = section_targets(presentation, reduced=reduced)
        section = find_presentation_section(group, presentation, targets)
        observed = "split" if section is not None else "non-split"
        witness = list(section) if section is not None else None
        if reduced or n < 4:
            return None, observed, ReportStatus.FINDING, witness
        predicted = "split" if k <= 1 else "non-split"
        if predicted == observed:
            return predicted, observed, ReportStatus.VERIFIED, witness
        witness = witness or list(group.generators)
        return predicted, observed, ReportStatus.REFUTED, witness

    return _run_claim("nonsplit", params, _envelope_reason(n, modulus, bench), body)


def quotient(
    n: int, level: int, *, reduced: bool = False, bench: Workbench | None = None
) -> VerificationReport:
    """Enumerate the image of B_n mod level and compare with the predicted order."""
    bench = _bench(bench)
    params = {"n": n, "level": level, "reduced": reduced}
    if reduced and n < 3:
        return VerificationReport.skipped(
            "quotient", params, "the reduced representation is zero for n = 2"
        )

    def body() -> Outcome:
        group = bench.store.braid_image(n, level, reduced=reduced)
        oracle = _order_oracle(reduced)
        return _compare(oracle(n, level), group.order, group)

    return _run_claim("quotient", params, _envelope_reason(n, level, bench), body)


def verify_arnold(n: int, *, bench: Workbench | None = None) -> VerificationReport:
    """The image of B_n mod 2 is exactly the set of permutation matrices."""
    bench = _bench(bench)
    params = {"n": n}

    def body() -> Outcome:
        group = bench.store.braid_image(n, 2)
        predicted = {"order": factorial(n), "permutation_matrices": True}
        observed = {
            "order": group.order,
            "permutation_matrices": _permutation_bijective(group, n),
        }
        return _compare(predicted, observed, group)

    return _run_claim("arnold", params, _envelope_reason(n, 2, bench), body)


def verify_index(
    n: int, first: int, second: int, *, bench: Workbench | None = None
) -> VerificationReport:
    """|Gamma[gcd] / Gamma[l]| = |Gamma[m] / Gamma[lcm]| inside Gamma mod lcm."""
    bench = _bench(bench)
    params = {"n": n, "l": first, "m": second}
    common, modulus = gcd(first, second), lcm(first, second)

    def body() -> Outcome:
        group = bench.store.gamma_group(n, modulus)

        def size(divisor: int) -> int:
            return congruence_kernel(group, divisor).order

        expected = gamma_quotient_order(n - 1, first) // gamma_quotient_order(
            n - 1, common
        )
        predicted = {"gcd_over_l": expected, "m_over_lcm": expected}
        observed = {
            "gcd_over_l": size(common) // size(first),
            "m_over_lcm": size(second) // size(modulus),
        }
        return _compare(predicted, observed, group)

    return _run_claim("index", params, _gamma_reason(n, modulus, bench), body)


def run_safely(
    check: Callable[[], VerificationReport], claim: str, params: Mapping[str, Any]
) -> VerificationReport:
    """Turn library errors raised by a check into a skipped report."""
    try:
        return check()
    except ValueError as exc:
        logger.warning("%s skipped: %s", claim, exc)
        return VerificationReport.skipped(claim, params, str(exc))
