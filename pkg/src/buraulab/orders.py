"""Closed-form orders of the finite groups behind the braid quotients."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from math import factorial, prod

import sympy


@dataclass(frozen=True, slots=True)
class LevelFactorization:
    """level = 2**two_part * odd_part, plus the full prime-power split."""

    level: int
    two_part: int
    odd_part: int
    prime_powers: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, level: int) -> LevelFactorization:
        if level < 1:
            raise ValueError(f"level must be >= 1, got {level}")
        powers = tuple(sorted(sympy.factorint(level).items()))
        two_part = dict(powers).get(2, 0)
        return cls(level, two_part, level >> two_part, powers)


def _check_genus(g: int) -> None:
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")


def sp_order(g: int, level: int) -> int:
    """|Sp_2g(Z/level)|, multiplicative over the prime powers of the level."""
    _check_genus(g)
    total = 1
    for p, e in LevelFactorization.of(level).prime_powers:
        field_order = p ** (g * g) * prod(p ** (2 * i) - 1 for i in range(1, g + 1))
        total *= p ** ((2 * g * g + g) * (e - 1)) * field_order
    return total


def unimodular_count(g: int, level: int) -> int:
    """Vectors of (Z/level)^2g with an entry generating the unit ideal."""
    _check_genus(g)
    return prod(
        p ** (2 * g * (e - 1)) * (p ** (2 * g) - 1)
        for p, e in LevelFactorization.of(level).prime_powers
    )


def stab_order(g: int, level: int) -> int:
    """Order of the e_1-stabilizer; Sp acts transitively on unimodular vectors."""
    return sp_order(g, level) // unimodular_count(g, level)


def gamma_quotient_order(n_minus_1: int, level: int) -> int:
    """|Gamma_{n-1} / Gamma_{n-1}[level]|.

    Gamma_1 is the e_1-stabilizer in Sp_2, which is infinite cyclic, so the
    odd branch already gives ``level`` there.
    """
    if n_minus_1 < 1:
        raise ValueError(f"n - 1 must be >= 1, got {n_minus_1}")
    if n_minus_1 % 2 == 0:
        return sp_order(n_minus_1 // 2, level)
    return stab_order((n_minus_1 + 1) // 2, level)


def gamma_prime_quotient_order(n: int, level: int) -> int:
    """|Gamma'_{n-1} / Gamma'_{n-1}[level]|; Sp_{2g-2} |x Z^{2g-2} for even n = 2g."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2:
        return 1
    if n % 2:
        return sp_order((n - 1) // 2, level)
    g = n // 2
    if g == 1:
        return 1
    return sp_order(g - 1, level) * level ** (2 * g - 2)


def _two_power_factor(n: int, k: int, quotient_order: Callable[[int], int]) -> int:
    if k == 0:
        return 1
    if k == 1:
        return factorial(n)
    return factorial(n) * quotient_order(2**k) // quotient_order(2)


def predicted_braid_quotient_order(n: int, level: int) -> int:
    """|B_n / B_n[level]| as the structure theorem predicts it."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n in (2, 3):
        return gamma_quotient_order(n - 1, level)
    split = LevelFactorization.of(level)

    def gamma(value: int) -> int:
        return gamma_quotient_order(n - 1, value)

    return _two_power_factor(n, split.two_part, gamma) * gamma(split.odd_part)


def predicted_reduced_quotient_order(n: int, level: int) -> int:
    """|B_n / B'_n[level]| for the reduced representation; 1 when n = 2."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2:
        return 1
    if n == 3:
        return gamma_prime_quotient_order(3, level)
    split = LevelFactorization.of(level)

    def gamma(value: int) -> int:
        return gamma_prime_quotient_order(n, value)

    return _two_power_factor(n, split.two_part, gamma) * gamma(split.odd_part)
