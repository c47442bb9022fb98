import random

import pytest

from buraulab.braids import (
    BraidWord,
    WordError,
    burau,
    burau_sigma,
    parse_word,
    reduced_burau,
    reduced_burau_sigma,
)
from buraulab.matrices import IntMatrix
from buraulab.symplectic import SubgroupSpec, in_gamma, psi


def _random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    letters = [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    return BraidWord.of(n, letters)


def test_parse_word_reads_signed_letters():
    word = parse_word("1 2 -1", 3)
    assert word.letters == (1, 2, -1)
    assert word.strands == 3


def test_parse_word_accepts_empty_text():
    assert len(parse_word("", 4)) == 0


@pytest.mark.parametrize(
    ("text", "n"),
    [("3", 3), ("0", 3), ("x", 3), ("1", 1)],
)
def test_parse_word_rejects_bad_input(text, n):
    with pytest.raises(WordError):
        parse_word(text, n)


def test_burau_sigma_matches_the_block_formula():
    assert burau_sigma(2, 1) == IntMatrix.from_rows([[2, -1], [1, 0]])
    assert burau_sigma(3, 2) == IntMatrix.from_rows([[1, 0, 0], [0, 2, -1], [0, 1, 0]])
    assert burau_sigma(2, -1) == IntMatrix.from_rows([[0, 1], [-1, 2]])


def test_power_formula_for_sigma_one():
    for m in range(1, 6):
        word = BraidWord.of(2, [1] * m)
        assert burau(word) == IntMatrix.from_rows([[m + 1, -m], [m, 1 - m]])
        assert burau(word).is_congruent_identity(m)


def test_empty_word_is_identity():
    assert burau(BraidWord(4)).is_identity()
    assert reduced_burau(BraidWord(5)) == IntMatrix.identity(4)


@pytest.mark.parametrize("n", range(3, 9))
def test_braid_relations_hold(n):
    for i in range(1, n - 1):
        for sigma in (burau_sigma, reduced_burau_sigma):
            left = sigma(n, i) @ sigma(n, i + 1) @ sigma(n, i)
            right = sigma(n, i + 1) @ sigma(n, i) @ sigma(n, i + 1)
            assert left == right
    for i in range(1, n):
        for j in range(i + 2, n):
            for sigma in (burau_sigma, reduced_burau_sigma):
                assert sigma(n, i) @ sigma(n, j) == sigma(n, j) @ sigma(n, i)


def test_generators_have_determinant_one_and_lie_in_gamma():
    for n in range(2, 9):
        for i in range(1, n):
            assert burau_sigma(n, i).determinant() == 1
            assert in_gamma(burau_sigma(n, i), SubgroupSpec.gamma(n))


def test_reduced_generators_lie_in_gamma_prime():
    for n in range(3, 9):
        for i in range(1, n):
            assert in_gamma(reduced_burau_sigma(n, i), SubgroupSpec.gamma_prime(n))


def test_reduced_generator_displays():
    assert reduced_burau_sigma(3, 1) == IntMatrix.from_rows([[1, 1], [0, 1]])
    assert reduced_burau_sigma(3, 2) == IntMatrix.from_rows([[1, 0], [-1, 1]])
    assert reduced_burau_sigma(4, 2) == IntMatrix.from_rows(
        [[1, 0, 0], [-1, 1, 1], [0, 0, 1]]
    )


def test_reduced_burau_needs_three_strands():
    with pytest.raises(WordError):
        reduced_burau(BraidWord.of(2, [1]))


def test_burau_is_a_homomorphism():
    rng = random.Random(7)
    for n in (3, 4, 5):
        u, v = _random_word(rng, n, 8), _random_word(rng, n, 8)
        assert burau(u.concat(v)) == burau(u) @ burau(v)
        assert (burau(u) @ burau(u.inverse())).is_identity()


def test_reduced_burau_is_psi_of_burau():
    rng = random.Random(11)
    for n in range(3, 9):
        for _ in range(100):
            word = _random_word(rng, n, rng.randint(0, 30))
            assert psi(burau(word), n) == reduced_burau(word)
