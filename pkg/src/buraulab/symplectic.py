"""Alternating forms, distinguished bases and the groups Gamma, Gamma'.

Conventions: matrices act on column vectors, ``n`` is the strand count, so
Gamma_{n-1} lives in GL_n(Z) and Gamma'_{n-1} in GL_{n-1}(Z). Symplectic
coordinates are interleaved pairs (x_1, y_1, x_2, y_2, ...) with
<x_i, y_i> = 1.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property, lru_cache
from itertools import product

from .braids import BraidWord, reduced_burau
from .matrices import DimensionError, IntMatrix, IntVector, block_diagonal, dot


class MembershipError(ValueError):
    """Raised when a matrix is outside the group an operation requires."""


class FormKind(StrEnum):
    UNREDUCED = "unreduced"
    REDUCED = "reduced"
    STANDARD = "standard"


@dataclass(frozen=True, slots=True)
class FormSpec:
    """One of the alternating forms, by kind and ambient dimension."""

    kind: FormKind
    dim: int

    @classmethod
    def unreduced(cls, n: int) -> FormSpec:
        return cls(FormKind.UNREDUCED, n)

    @classmethod
    def reduced(cls, dim: int) -> FormSpec:
        return cls(FormKind.REDUCED, dim)

    @classmethod
    def standard(cls, dim: int) -> FormSpec:
        if dim % 2:
            raise DimensionError(
                f"the standard symplectic form needs even dimension, got {dim}"
            )
        return cls(FormKind.STANDARD, dim)

    @property
    def gram(self) -> IntMatrix:
        return _gram(self.kind, self.dim)


@lru_cache(maxsize=None)
def _gram(kind: FormKind, dim: int) -> IntMatrix:
    rows = [[0] * dim for _ in range(dim)]
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if kind is FormKind.UNREDUCED:
                if i < j:
                    value = (-1) ** (i + j + 1)
                elif i > j:
                    value = (-1) ** (i + j)
                else:
                    value = 0
            elif kind is FormKind.REDUCED:
                value = -1 if j == i + 1 else 1 if j == i - 1 else 0
            elif i % 2 == 1 and j == i + 1:
                value = 1
            elif i % 2 == 0 and j == i - 1:
                value = -1
            else:
                value = 0
            rows[i - 1][j - 1] = value
    return IntMatrix.from_rows(rows)


def form_eval(spec: FormSpec, v: Sequence[int], w: Sequence[int]) -> int:
    """v^T * gram * w."""
    if len(v) != spec.dim or len(w) != spec.dim:
        raise DimensionError(
            f"vectors of length {len(v)} and {len(w)} for a form on Z^{spec.dim}"
        )
    return dot(v, spec.gram.apply(w))


def is_isometry(spec: FormSpec, matrix: IntMatrix) -> bool:
    if matrix.dim != spec.dim:
        raise DimensionError(
            f"{matrix.dim}x{matrix.dim} matrix for a form on Z^{spec.dim}"
        )
    gram = spec.gram
    return matrix.transpose() @ gram @ matrix == gram


def _unit(dim: int, index: int) -> IntVector:
    return tuple(1 if k == index else 0 for k in range(dim))


def _add(*vectors: Sequence[int]) -> IntVector:
    return tuple(sum(parts) for parts in zip(*vectors, strict=True))


def _scale(scalar: int, vector: Sequence[int]) -> IntVector:
    return tuple(scalar * value for value in vector)


@dataclass(frozen=True, slots=True)
class BasisData:
    """Distinguished vectors and bases for n strands (all 0-based tuples)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need n >= 2 strands, got {self.n}")

    @property
    def genus(self) -> int:
        return self.n // 2

    @property
    def v_n(self) -> IntVector:
        return (1,) * self.n

    @property
    def w_n(self) -> IntVector:
        return tuple((-1) ** k for k in range(self.n))

    @property
    def c_basis(self) -> list[IntVector]:
        """c_i = (-1)^(i+1) (e_i + e_{i+1}), i = 1..n-1; a basis of W = ker(w_n^T)."""
        n = self.n
        return [
            _scale((-1) ** (i + 1), _add(_unit(n, i - 1), _unit(n, i)))
            for i in range(1, n)
        ]

    @property
    def ab_basis(self) -> list[tuple[IntVector, IntVector]]:
        """Pairs (a_i, b_i), i = 1..floor(n/2)."""
        n = self.n
        pairs = []
        for i in range(1, n // 2 + 1):
            a = tuple(1 if k < 2 * i else 0 for k in range(n))
            if 2 * i == n:
                b = _unit(n, n - 1)
            else:
                b = _add(_unit(n, 2 * i - 1), _unit(n, 2 * i))
            pairs.append((a, b))
        return pairs

    @property
    def reduced_ab(self) -> list[tuple[IntVector, IntVector | None]]:
        """(a'_i, b'_i) in c-coordinates; b'_g is None for even n."""
        pairs = []
        for a, b in self.ab_basis:
            a_red = w_coordinates(self.n, a)
            b_red = w_coordinates(self.n, b) if dot(self.w_n, b) == 0 else None
            pairs.append((a_red, b_red))
        return pairs

    @property
    def v_prime(self) -> IntVector:
        """v'_n = e_1 + e_3 + ... + e_{n-1}; only defined for even n."""
        if self.n % 2:
            raise ValueError("v'_n is only defined for even n")
        return tuple(1 if k % 2 == 0 else 0 for k in range(self.n - 1))


def w_coordinates(n: int, vector: Sequence[int]) -> IntVector:
    """Coordinates of a vector of W in the c-basis (the left inverse of c)."""
    if len(vector) != n:
        raise DimensionError(f"vector of length {len(vector)} vs n = {n}")
    coords = []
    running = 0
    for k in range(n - 1):
        running += (-1) ** k * vector[k]
        coords.append(running)
    return tuple(coords)


def from_w_coordinates(n: int, coords: Sequence[int]) -> IntVector:
    result = (0,) * n
    for coefficient, c in zip(coords, BasisData(n).c_basis, strict=True):
        result = _add(result, _scale(coefficient, c))
    return result


@lru_cache(maxsize=None)
def c_matrices(n: int) -> tuple[tuple[IntVector, ...], tuple[IntVector, ...]]:
    """(L, C) as row tuples: C is n x (n-1) with columns c_i, L C = I_{n-1}."""
    basis = BasisData(n).c_basis
    c_rows = tuple(tuple(c[r] for c in basis) for r in range(n))
    l_rows = tuple(
        tuple((-1) ** j if j <= k else 0 for j in range(n)) for k in range(n - 1)
    )
    return l_rows, c_rows


class SubgroupFamily(StrEnum):
    GAMMA = "gamma"
    GAMMA_PRIME = "gamma_prime"


@dataclass(frozen=True, slots=True)
class SubgroupSpec:
    """Gamma_{n-1}[level] or Gamma'_{n-1}[level]; level 1 is the full group."""

    family: SubgroupFamily
    n_minus_1: int
    level: int = 1

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if self.n_minus_1 < 1:
            raise ValueError(f"n - 1 must be >= 1, got {self.n_minus_1}")

    @classmethod
    def gamma(cls, n: int, level: int = 1) -> SubgroupSpec:
        return cls(SubgroupFamily.GAMMA, n - 1, level)

    @classmethod
    def gamma_prime(cls, n: int, level: int = 1) -> SubgroupSpec:
        return cls(SubgroupFamily.GAMMA_PRIME, n - 1, level)

    @property
    def strands(self) -> int:
        return self.n_minus_1 + 1

    @property
    def matrix_dim(self) -> int:
        if self.family is SubgroupFamily.GAMMA:
            return self.n_minus_1 + 1
        return self.n_minus_1

    @property
    def form(self) -> FormSpec:
        if self.family is SubgroupFamily.GAMMA:
            return FormSpec.unreduced(self.matrix_dim)
        return FormSpec.reduced(self.matrix_dim)


def in_gamma(matrix: IntMatrix, spec: SubgroupSpec) -> bool:
    if matrix.dim != spec.matrix_dim:
        raise DimensionError(
            f"{matrix.dim}x{matrix.dim} matrix, expected {spec.matrix_dim} "
            f"for {spec.family.value}_{spec.n_minus_1}"
        )
    if not is_isometry(spec.form, matrix):
        return False
    basis = BasisData(spec.strands)
    if spec.family is SubgroupFamily.GAMMA:
        if matrix.apply(basis.v_n) != basis.v_n:
            return False
        if matrix.row_apply(basis.w_n) != basis.w_n:
            return False
    elif spec.strands % 2 == 0 and matrix.apply(basis.v_prime) != basis.v_prime:
        return False
    return matrix.is_congruent_identity(spec.level)


def _require(matrix: IntMatrix, spec: SubgroupSpec) -> None:
    if not in_gamma(matrix, spec):
        raise MembershipError(
            f"matrix is not in {spec.family.value}_{spec.n_minus_1}[{spec.level}]"
        )


@lru_cache(maxsize=None)
def to_symplectic_coords(n: int) -> IntMatrix:
    """Columns a_1, b_1, ..., a_g, b_g (then v_n when n is odd)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    basis = BasisData(n)
    columns: list[IntVector] = []
    for a, b in basis.ab_basis:
        columns.extend((a, b))
    if n % 2:
        columns.append(basis.v_n)
    return IntMatrix.from_columns(columns)


@lru_cache(maxsize=None)
def stabilizer_coords(n: int) -> IntMatrix:
    """Even n: pairs reordered to a_g, b_g, a_1, b_1, ... so that v_n = a_g is e_1."""
    if n % 2:
        raise ValueError("stabilizer coordinates exist only for even n")
    coords = to_symplectic_coords(n)
    order = [n - 2, n - 1, *range(n - 2)]
    return IntMatrix.from_columns([coords.column(j) for j in order])


@lru_cache(maxsize=None)
def _inverse(matrix: IntMatrix) -> IntMatrix:
    return matrix.inverse()


def gamma_coordinate_change(n: int) -> tuple[IntMatrix, IntMatrix]:
    """(Q, Q^-1) such that Q^-1 A Q is in symplectic form for A in Gamma_{n-1}."""
    change = stabilizer_coords(n) if n % 2 == 0 else to_symplectic_coords(n)
    return change, _inverse(change)


def symplectic_block(matrix: IntMatrix, n: int) -> IntMatrix:
    """Image of a Gamma_{n-1} matrix in Sp_{n-1} (odd n) or [Sp_n]_{e_1} (even n)."""
    change, change_inv = gamma_coordinate_change(n)
    conjugate = change_inv @ matrix @ change
    if n % 2 == 0:
        return conjugate
    size = n - 1
    return IntMatrix.from_rows(row[:size] for row in conjugate.rows[:size])


def from_symplectic_block(block: IntMatrix, n: int) -> IntMatrix:
    """Inverse of :func:`symplectic_block`."""
    change, change_inv = gamma_coordinate_change(n)
    if n % 2:
        block = block_diagonal(block, IntMatrix.identity(1))
    return change @ block @ change_inv


def psi(matrix: IntMatrix, n: int) -> IntMatrix:
    """Restriction of a Gamma_{n-1} matrix to W, written in the c-basis."""
    if n < 3:
        raise ValueError(f"psi needs n >= 3, got {n}")
    _require(matrix, SubgroupSpec.gamma(n))
    return restrict_to_w(matrix, n)


def restrict_to_w(matrix: IntMatrix, n: int) -> IntMatrix:
    """L M C without membership checks (also valid on residue lifts)."""
    l_rows, c_rows = c_matrices(n)
    images = [matrix.apply(column) for column in zip(*c_rows, strict=True)]
    return IntMatrix.from_columns([w_coordinates(n, image) for image in images])


def _kappa_pair(n: int) -> tuple[IntVector, IntVector]:
    """(a_g, b_g) for even n."""
    return BasisData(n).ab_basis[-1]


def section_images(matrix: IntMatrix, n: int) -> list[IntVector]:
    """Images of a_1, b_1, ..., a_g, b_g under the section of psi (even n).

    The matrix is only used linearly and through the form, so this works on
    integer representatives of residues as well.
    """
    form = FormSpec.unreduced(n)
    basis = BasisData(n)

    def on_w(vector: IntVector) -> IntVector:
        return from_w_coordinates(n, matrix.apply(w_coordinates(n, vector)))

    a_g, b_g = _kappa_pair(n)
    images: list[IntVector] = []
    correction = (0,) * n
    for a, b in basis.ab_basis[:-1]:
        image_a, image_b = on_w(a), on_w(b)
        images.extend((image_a, image_b))
        correction = _add(
            correction,
            _scale(form_eval(form, b_g, image_a), b),
            _scale(-form_eval(form, b_g, image_b), a),
        )
    images.append(on_w(a_g))
    images.append(_add(b_g, on_w(correction)))
    return images


def psi_section(matrix: IntMatrix, n: int) -> IntMatrix:
    """A preimage under psi: the displayed section for even n, psi^-1 for odd n."""
    if n < 3:
        raise ValueError(f"psi_section needs n >= 3, got {n}")
    _require(matrix, SubgroupSpec.gamma_prime(n))
    return section_lift(matrix, n)


def section_lift(matrix: IntMatrix, n: int) -> IntMatrix:
    """:func:`psi_section` without the membership check."""
    if n % 2:
        basis = BasisData(n)
        frame = IntMatrix.from_columns([*basis.c_basis, basis.v_n])
        return frame @ block_diagonal(matrix, IntMatrix.identity(1)) @ _inverse(frame)
    coords = to_symplectic_coords(n)
    return IntMatrix.from_columns(section_images(matrix, n)) @ _inverse(coords)


@lru_cache(maxsize=None)
def _prime_frame(n: int) -> IntMatrix:
    """Columns a'_1, b'_1, ..., a'_{g-1}, b'_{g-1}, a'_g for even n."""
    columns: list[IntVector] = []
    for a, b in BasisData(n).reduced_ab:
        columns.append(a)
        if b is not None:
            columns.append(b)
    return IntMatrix.from_columns(columns)


def _check_even(n: int) -> None:
    if n % 2 or n < 4:
        raise ValueError(f"the Gamma' semidirect split needs even n >= 4, got {n}")


def gamma_prime_split(matrix: IntMatrix, n: int) -> tuple[IntMatrix, IntVector]:
    """(A-bar in Sp_{n-2}(Z), translation (lambda_1, mu_1, ...)) for Gamma'_{n-1}."""
    _check_even(n)
    _require(matrix, SubgroupSpec.gamma_prime(n))
    frame = _prime_frame(n)
    local = _inverse(frame) @ matrix @ frame
    size = n - 2
    quotient = IntMatrix.from_rows(row[:size] for row in local.rows[:size])
    return quotient, tuple(local.rows[size][:size])


def gamma_prime_join(
    quotient: IntMatrix, translation: Sequence[int], n: int
) -> IntMatrix:
    """Inverse of :func:`gamma_prime_split`."""
    _check_even(n)
    size = n - 2
    if quotient.dim != size or len(translation) != size:
        raise DimensionError(f"expected a {size}x{size} block and {size} translations")
    rows = [list(row) + [0] for row in quotient.rows]
    rows.append([*translation, 1])
    frame = _prime_frame(n)
    return frame @ IntMatrix.from_rows(rows) @ _inverse(frame)


def kernel_generator(n: int) -> IntMatrix:
    """The element fixing a_1, b_1, ..., a_g and sending b_g to b_g + a_g (even n)."""
    if n % 2:
        raise ValueError("the kernel of psi is trivial for odd n")
    coords = to_symplectic_coords(n)
    columns = coords.columns()
    columns[-1] = _add(columns[-1], columns[-2])
    return IntMatrix.from_columns(columns) @ _inverse(coords)


def _short_words(n: int, max_length: int) -> Iterator[BraidWord]:
    letters = [k for i in range(1, n) for k in (i, -i)]
    for length in range(1, max_length + 1):
        for combo in product(letters, repeat=length):
            yield BraidWord(n, combo)


def find_section_defect(
    n: int, max_length: int = 2
) -> tuple[IntMatrix, IntMatrix] | None:
    """Reduced-Burau images B1, B2 where the section fails to be multiplicative."""
    _check_even(n)
    words = _short_words(n, max_length)
    images = list(dict.fromkeys(reduced_burau(word) for word in words))
    lifts = {image: section_lift(image, n) for image in images}
    for first in images:
        for second in images:
            if section_lift(first @ second, n) != lifts[first] @ lifts[second]:
                return first, second
    return None
