"""Braid words and the integral (reduced) Burau representation at t = -1."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache, reduce

from .matrices import IntMatrix


class WordError(ValueError):
    """Raised for malformed braid words or out-of-range generator indices."""


@dataclass(frozen=True, slots=True)
class BraidWord:
    """Word in the Artin generators; ``k > 0`` is sigma_k, ``k < 0`` its inverse."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise WordError(f"braid words need at least 2 strands, got {self.strands}")
        for letter in self.letters:
            _check_index(self.strands, letter)

    @classmethod
    def of(cls, strands: int, letters: Iterable[int]) -> BraidWord:
        return cls(strands, tuple(int(letter) for letter in letters))

    def __len__(self) -> int:
        return len(self.letters)

    def concat(self, other: BraidWord) -> BraidWord:
        if other.strands != self.strands:
            raise WordError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        inverted = tuple(-letter for letter in reversed(self.letters))
        return BraidWord(self.strands, inverted)

    def power(self, exponent: int) -> BraidWord:
        base = self if exponent >= 0 else self.inverse()
        return BraidWord(self.strands, base.letters * abs(exponent))

    def __str__(self) -> str:
        return " ".join(str(letter) for letter in self.letters)


def _check_index(n: int, index: int) -> None:
    if index == 0 or abs(index) > n - 1:
        raise WordError(
            f"generator index {index} out of range for {n} strands "
            f"(allowed 1..{n - 1} and their negatives)"
        )


def parse_word(text: str, n: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices."""
    if n < 2:
        raise WordError(f"braid words need at least 2 strands, got {n}")
    letters: list[int] = []
    for token in text.split():
        try:
            letters.append(int(token))
        except ValueError as exc:
            raise WordError(f"not an integer letter: {token!r}") from exc
    return BraidWord(n, tuple(letters))


@lru_cache(maxsize=None)
def burau_sigma(n: int, i: int) -> IntMatrix:
    """rho(sigma_i): the 2x2 block [[2, -1], [1, 0]] at rows/columns i, i+1."""
    if n < 2:
        raise WordError(f"the Burau representation needs n >= 2, got {n}")
    _check_index(n, i)
    if i < 0:
        return burau_sigma(n, -i).inverse()
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    k = i - 1
    rows[k][k], rows[k][k + 1] = 2, -1
    rows[k + 1][k], rows[k + 1][k + 1] = 1, 0
    return IntMatrix.from_rows(rows)


@lru_cache(maxsize=None)
def reduced_burau_sigma(n: int, i: int) -> IntMatrix:
    """rho-bar(sigma_i) on the c-basis of W = ker(w_n^T), dimension n - 1."""
    if n < 3:
        raise WordError(f"the reduced representation is zero for n = {n}; need n >= 3")
    _check_index(n, i)
    if i < 0:
        return reduced_burau_sigma(n, -i).inverse()
    m = n - 1
    rows = [[1 if r == c else 0 for c in range(m)] for r in range(m)]
    # 0-based: column i of the coordinate vector is c_{i+1}
    if i > 1:
        rows[i - 1][i - 2] = -1
    if i < n - 1:
        rows[i - 1][i] = 1
    return IntMatrix.from_rows(rows)


def _product(dim: int, matrices: Sequence[IntMatrix]) -> IntMatrix:
    return reduce(lambda acc, factor: acc @ factor, matrices, IntMatrix.identity(dim))


def burau(word: BraidWord) -> IntMatrix:
    """rho(w), multiplying generator matrices left to right."""
    n = word.strands
    return _product(n, [burau_sigma(n, letter) for letter in word.letters])


def reduced_burau(word: BraidWord) -> IntMatrix:
    """rho-bar(w) for n >= 3."""
    n = word.strands
    if n < 3:
        raise WordError(f"the reduced representation is zero for n = {n}; need n >= 3")
    return _product(n - 1, [reduced_burau_sigma(n, letter) for letter in word.letters])


def burau_generators(n: int) -> list[IntMatrix]:
    return [burau_sigma(n, i) for i in range(1, n)]


def reduced_burau_generators(n: int) -> list[IntMatrix]:
    return [reduced_burau_sigma(n, i) for i in range(1, n)]
