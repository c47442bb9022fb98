"""Permutation matrices, presentations of S_n and splitting searches."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from math import factorial

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from ..matrices import IntMatrix
from ..symplectic import restrict_to_w
from .codec import MatrixCodec
from .engine import GroupSet, ModMatrix, close, reduce

logger = logging.getLogger(__name__)


class PresentationError(ValueError):
    """Raised when a presentation or projection does not describe S_n."""


def permutation_image(matrix: ModMatrix) -> Permutation | None:
    """The permutation pi with M e_j = e_pi(j), if M is a permutation matrix mod 2."""
    if matrix.modulus != 2:
        raise ValueError(f"permutation_image needs modulus 2, got {matrix.modulus}")
    array = matrix.to_array()
    if not ((array.sum(axis=0) == 1).all() and (array.sum(axis=1) == 1).all()):
        return None
    return Permutation(array.argmax(axis=0).tolist())


def permutation_int_matrix(perm: Permutation, size: int | None = None) -> IntMatrix:
    size = size or perm.size
    images = Permutation(perm.array_form, size=size).array_form
    rows = [[0] * size for _ in range(size)]
    for column, row in enumerate(images):
        rows[row][column] = 1
    return IntMatrix.from_rows(rows)


def permutation_matrix(
    perm: Permutation, size: int | None = None, modulus: int = 2
) -> ModMatrix:
    return reduce(permutation_int_matrix(perm, size), modulus)


Word = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Presentation:
    """Generators of S_n with positive relator words (1-based generator indices)."""

    n: int
    generators: tuple[Permutation, ...]
    relations: tuple[Word, ...]
    name: str = ""

    def __post_init__(self) -> None:
        for word in self.relations:
            for letter in word:
                if not 1 <= letter <= len(self.generators):
                    raise PresentationError(
                        f"relator letter {letter} outside 1..{len(self.generators)}"
                    )


def pair_presentation() -> Presentation:
    """S_4 = < a, b | a^2, b^3, (ab)^4 > with a = (1 2), b = (2 3 4)."""
    a = Permutation(0, 1, size=4)
    b = Permutation(1, 2, 3, size=4)
    return Presentation(4, (a, b), ((1, 1), (2, 2, 2), (1, 2) * 4), name="pair")


def coxeter_presentation(n: int) -> Presentation:
    """Adjacent transpositions with the Coxeter relations."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    generators = tuple(Permutation(i, i + 1, size=n) for i in range(n - 1))
    relations: list[Word] = []
    for i in range(1, n):
        relations.append((i, i))
        if i + 1 < n:
            relations.append((i, i + 1) * 3)
        relations.extend((i, j) * 2 for j in range(i + 2, n))
    return Presentation(n, generators, tuple(relations), name="coxeter")


def default_presentation(n: int) -> Presentation:
    return pair_presentation() if n == 4 else coxeter_presentation(n)


def _word_product(
    word: Word, matrices: Sequence[np.ndarray], modulus: int
) -> np.ndarray:
    result = np.eye(matrices[0].shape[-1], dtype=np.int64)
    for letter in word:
        result = (result @ matrices[letter - 1]) % modulus
    return result


def validate_presentation(presentation: Presentation) -> None:
    """Generators give S_n and the relators present exactly n! elements.

    Raises PresentationError otherwise.
    """
    n = presentation.n
    expected = factorial(n)
    if PermutationGroup(list(presentation.generators)).order() != expected:
        raise PresentationError(f"the generators do not generate S_{n}")
    mats = [permutation_matrix(perm, n).to_array() for perm in presentation.generators]
    identity = np.eye(n, dtype=np.int64)
    for word in presentation.relations:
        if not np.array_equal(_word_product(word, mats, 2), identity):
            raise PresentationError(f"relator {word} fails on the permutations")
    enumerated = close(
        [permutation_matrix(perm, n) for perm in presentation.generators]
    )
    if enumerated.order != expected:
        raise PresentationError(
            f"permutation matrices generate {enumerated.order} elements"
        )
    names = ",".join(f"x{i}" for i in range(len(presentation.generators)))
    free, *symbols = free_group(names)
    relators = []
    for word in presentation.relations:
        element = free.identity
        for letter in word:
            element = element * symbols[letter - 1]
        relators.append(element)
    abstract = FpGroup(free, relators).order()
    if abstract != expected:
        raise PresentationError(
            f"the relators present a group of order {abstract}, not {expected}"
        )


def section_targets(
    presentation: Presentation, *, reduced: bool = False
) -> list[ModMatrix]:
    """Mod-2 images of the generators, restricted to W when ``reduced``."""
    targets = []
    for perm in presentation.generators:
        matrix = permutation_int_matrix(perm, presentation.n)
        if reduced:
            matrix = restrict_to_w(matrix, presentation.n)
        targets.append(reduce(matrix, 2))
    return targets


def find_presentation_section(
    group: GroupSet,
    presentation: Presentation,
    targets: Sequence[ModMatrix] | None = None,
) -> tuple[ModMatrix, ...] | None:
    """Preimages of the targets satisfying every relator, or None when none exist.

    The fibers are the elements of ``group`` reducing mod 2 to each target.
    """
    if group.modulus % 2:
        raise ValueError(
            f"the section search needs an even modulus, got {group.modulus}"
        )
    validate_presentation(presentation)
    targets = list(targets) if targets is not None else section_targets(presentation)
    if len(targets) != len(presentation.generators):
        raise PresentationError("one target per generator is required")

    mats = group.matrices()
    modulus = group.modulus
    residues = mats % 2
    image_size = len(np.unique(MatrixCodec(group.dim, 2).encode(residues)))
    if image_size != factorial(presentation.n):
        raise PresentationError(
            f"reduction mod 2 has {image_size} images, not {factorial(presentation.n)}"
        )

    fibers = []
    for target in targets:
        mask = (residues == target.to_array()).all(axis=(1, 2))
        if not mask.any():
            raise PresentationError("a target generator has an empty fiber")
        fibers.append(mats[mask])
    logger.debug("fiber sizes %s", [len(fiber) for fiber in fibers])

    checks: list[list[Word]] = [[] for _ in targets]
    for word in presentation.relations:
        checks[max(word) - 1].append(word)

    identity = np.eye(group.dim, dtype=np.int64)

    def satisfying(index: int, chosen: list[np.ndarray]) -> np.ndarray:
        candidates = fibers[index]
        mask = np.ones(len(candidates), dtype=bool)
        for word in checks[index]:
            result = np.broadcast_to(identity, candidates.shape).copy()
            for letter in word:
                factor = candidates if letter - 1 == index else chosen[letter - 1]
                result = (result @ factor) % modulus
            mask &= (result == identity).all(axis=(1, 2))
        return candidates[mask]

    def search(chosen: list[np.ndarray]) -> list[np.ndarray] | None:
        index = len(chosen)
        if index == len(fibers):
            return chosen
        for candidate in satisfying(index, chosen):
            found = search([*chosen, candidate])
            if found is not None:
                return found
        return None

    witness = search([])
    if witness is None:
        return None
    return tuple(ModMatrix.from_array(array, modulus) for array in witness)
