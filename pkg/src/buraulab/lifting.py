"""Integral lifts of residue matrices (strong approximation made constructive).

Symplectic matrices use the interleaved standard form: coordinates
(x_1, y_1, ..., x_g, y_g) with <x_i, y_i> = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from math import gcd, lcm, prod

import sympy
from sympy.ntheory.modular import solve_congruence

from .groups.engine import ModMatrix, reduce
from .matrices import DimensionError, IntMatrix, balanced_residue
from .symplectic import (
    BasisData,
    FormSpec,
    MembershipError,
    SubgroupFamily,
    SubgroupSpec,
    from_symplectic_block,
    is_isometry,
    restrict_to_w,
    section_lift,
    symplectic_block,
)


class NotSymplecticError(ValueError):
    """Raised when a residue matrix is not symplectic modulo its modulus."""


class StabilizerShapeError(ValueError):
    """Raised when a residue matrix does not fix e_1 in the stabilizer layout."""


class LiftFamily(StrEnum):
    SP = "sp"
    STAB = "stab"
    GAMMA = "gamma"
    GAMMA_PRIME = "gamma-prime"


def _standard_gram(dim: int) -> IntMatrix:
    return FormSpec.standard(dim).gram


def is_isometry_mod(matrix: ModMatrix, gram: IntMatrix) -> bool:
    """M^T G M = G modulo the matrix's modulus."""
    lifted = matrix.lift()
    pulled = lifted.transpose() @ gram @ lifted
    return reduce(pulled, matrix.modulus) == reduce(gram, matrix.modulus)


def is_symplectic_mod(matrix: ModMatrix) -> bool:
    return is_isometry_mod(matrix, _standard_gram(matrix.dim))


def _require_symplectic(matrix: ModMatrix, g: int) -> None:
    if matrix.dim != 2 * g:
        raise DimensionError(
            f"expected a {2 * g}x{2 * g} matrix, got {matrix.dim}x{matrix.dim}"
        )
    if not is_symplectic_mod(matrix):
        raise NotSymplecticError(f"matrix is not symplectic modulo {matrix.modulus}")


def _check_lift(lifted: IntMatrix, target: ModMatrix) -> IntMatrix:
    if reduce(lifted, target.modulus) != target:
        raise RuntimeError("lift does not reduce to its target")
    if not is_isometry(FormSpec.standard(lifted.dim), lifted):
        raise RuntimeError("lift is not symplectic")
    return lifted


class _Reducer:
    """Integral symplectic row operations recorded as a matrix E."""

    def __init__(self, vector: list[int]) -> None:
        self.vector = vector
        dim = len(vector)
        self.rows = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]

    def _add_row(self, target: int, source: int, factor: int) -> None:
        if factor == 0:
            return
        self.vector[target] += factor * self.vector[source]
        pairs = zip(self.rows[target], self.rows[source], strict=True)
        self.rows[target] = [t + factor * s for t, s in pairs]

    def shear(self, pair: int, factor: int) -> None:
        """x_k += factor * y_k."""
        self._add_row(2 * pair, 2 * pair + 1, factor)

    def rotate(self, pair: int) -> None:
        """(x_k, y_k) -> (-y_k, x_k)."""
        x, y = 2 * pair, 2 * pair + 1
        self.vector[x], self.vector[y] = -self.vector[y], self.vector[x]
        self.rows[x], self.rows[y] = [-v for v in self.rows[y]], self.rows[x]

    def negate(self, pair: int) -> None:
        for index in (2 * pair, 2 * pair + 1):
            self.vector[index] = -self.vector[index]
            self.rows[index] = [-v for v in self.rows[index]]

    def cross(self, target: int, source: int, factor: int) -> None:
        """x_target += factor * x_source, with y_source -= factor * y_target."""
        if factor == 0:
            return
        self._add_row(2 * target, 2 * source, factor)
        self._add_row(2 * source + 1, 2 * target + 1, -factor)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.rows)


def _primitive_lift(column: tuple[int, ...], modulus: int) -> list[int]:
    """Integer vector with gcd 1 congruent to a unimodular residue vector."""
    entries = [balanced_residue(value, modulus) for value in column]
    if gcd(*entries) == 1:
        return entries
    if not any(entries[1:]):
        entries[1] = modulus
    rest = gcd(*entries[1:])
    if gcd(entries[0], rest) == 1:
        return entries
    shift = prod(p for p in sympy.primefactors(rest) if entries[0] % p)
    entries[0] += shift * modulus
    return entries


def _reduce_to_e1(vector: list[int]) -> IntMatrix:
    """Integral symplectic E with E vector = e_1; ``vector`` must be primitive."""
    ops = _Reducer(list(vector))
    pairs = len(vector) // 2
    for pair in range(pairs):
        x, y = 2 * pair, 2 * pair + 1
        while ops.vector[y] != 0:
            ops.shear(pair, -(ops.vector[x] // ops.vector[y]))
            ops.rotate(pair)
    for pair in range(1, pairs):
        while ops.vector[2 * pair] != 0:
            head, other = ops.vector[0], ops.vector[2 * pair]
            if head == 0:
                ops.cross(0, pair, 1)
            elif abs(other) >= abs(head):
                ops.cross(pair, 0, -(other // head))
            else:
                ops.cross(0, pair, -(head // other))
    if ops.vector[0] < 0:
        ops.negate(0)
    if ops.vector[0] != 1:
        raise ValueError("vector is not primitive")
    return ops.matrix()


def _symplectic_inverse(matrix: IntMatrix) -> IntMatrix:
    """E^-1 = -J E^T J for integral symplectic E."""
    gram = _standard_gram(matrix.dim)
    product = gram @ matrix.transpose() @ gram
    return IntMatrix.from_rows([-value for value in row] for row in product.rows)


def sp_lift(target: ModMatrix, g: int) -> IntMatrix:
    """Integral symplectic matrix congruent to ``target`` modulo its modulus."""
    _require_symplectic(target, g)
    modulus = target.modulus
    if modulus == 1:
        return IntMatrix.identity(2 * g)
    first = tuple(row[0] for row in target.rows)
    if gcd(*first, modulus) != 1:
        raise NotSymplecticError("first column is not unimodular")
    change = _reduce_to_e1(_primitive_lift(first, modulus))
    moved = reduce(change, modulus) @ target
    lifted = _symplectic_inverse(change) @ stab_lift(moved, g)
    return _check_lift(lifted, target)


def _require_stabilizer_shape(target: ModMatrix) -> None:
    rows = target.rows
    dim = target.dim
    first_column = tuple(row[0] for row in rows)
    second_row = rows[1]
    unit = tuple(1 % target.modulus if i == 0 else 0 for i in range(dim))
    if first_column != unit or second_row != tuple(
        1 % target.modulus if j == 1 else 0 for j in range(dim)
    ):
        raise StabilizerShapeError(
            "expected first column e_1 and second row e_2^T in the stabilizer layout"
        )


def stab_lift(target: ModMatrix, g: int) -> IntMatrix:
    """Lift an e_1-stabilizing residue by lifting its corner and recomputing the border.

    Layout: column 0 is e_1, row 1 is e_2^T, the corner below/right of (1, 1)
    is a symplectic block B, column 1 below row 1 is x, and the top border
    entry of column j >= 2 equals <x, B e_j>.
    """
    _require_symplectic(target, g)
    _require_stabilizer_shape(target)
    modulus = target.modulus
    dim = 2 * g
    if modulus == 1:
        return IntMatrix.identity(dim)
    rows = target.rows
    corner_lift: IntMatrix | None = None
    x_lift: list[int] = []
    if g > 1:
        corner = ModMatrix.from_rows((row[2:] for row in rows[2:]), modulus)
        corner_lift = sp_lift(corner, g - 1)
        x_lift = [balanced_residue(row[1], modulus) for row in rows[2:]]
    out = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    out[0][1] = balanced_residue(rows[0][1], modulus)
    if corner_lift is not None:
        inner_gram = _standard_gram(dim - 2)
        for i in range(dim - 2):
            out[i + 2][1] = x_lift[i]
            out[i + 2][2:] = list(corner_lift.rows[i])
        for j in range(dim - 2):
            column = corner_lift.column(j)
            border = sum(
                x_lift[r] * inner_gram.entry(r, c) * column[c]
                for r in range(dim - 2)
                for c in range(dim - 2)
            )
            out[0][j + 2] = border
    return _check_lift(IntMatrix.from_rows(out), target)


def _glue(matrix: IntMatrix, first: int, second: int) -> ModMatrix:
    """Residue mod lcm congruent to ``matrix`` mod ``first`` and to I mod ``second``."""
    modulus = lcm(first, second)
    rows = []
    for i, row in enumerate(matrix.rows):
        glued = []
        for j, value in enumerate(row):
            solution = solve_congruence((value % first, first), (int(i == j), second))
            if solution is None:
                raise MembershipError(
                    f"matrix is not the identity modulo gcd({first}, {second})"
                )
            glued.append(int(solution[0]))
        rows.append(glued)
    return ModMatrix.from_rows(rows, modulus)


def crt_lift(
    matrix: IntMatrix, first: int, second: int, family: LiftFamily
) -> IntMatrix:
    """Level-``second`` element congruent to ``matrix`` mod ``first``."""
    if first < 1 or second < 1:
        raise ValueError("levels must be >= 1")
    common = gcd(first, second)
    if not matrix.is_congruent_identity(common):
        raise MembershipError(f"matrix is not the identity modulo gcd = {common}")
    glued = _glue(matrix, first, second)
    return lift(LiftRequest(glued, LiftFamily(family)))


def in_gamma_residue(target: ModMatrix, spec: SubgroupSpec) -> bool:
    """Residue-level form of the Gamma / Gamma' predicate (level ignored)."""
    modulus = target.modulus
    if target.dim != spec.matrix_dim:
        raise DimensionError(f"expected dimension {spec.matrix_dim}, got {target.dim}")
    if not is_isometry_mod(target, spec.form.gram):
        return False
    basis = BasisData(spec.strands)

    def residues(vector: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(value % modulus for value in vector)

    if spec.family is SubgroupFamily.GAMMA:
        if target.apply(basis.v_n) != residues(basis.v_n):
            return False
        return residues(target.lift().row_apply(basis.w_n)) == residues(basis.w_n)
    if spec.strands % 2 == 0:
        return target.apply(basis.v_prime) == residues(basis.v_prime)
    return True


def _require_gamma_residue(target: ModMatrix, spec: SubgroupSpec) -> None:
    if not in_gamma_residue(target, spec):
        raise MembershipError(
            f"residue matrix fails the {spec.family.value}_{spec.n_minus_1} conditions "
            f"modulo {target.modulus}"
        )


def gamma_lift(target: ModMatrix, n: int) -> IntMatrix:
    """Element of Gamma_{n-1} congruent to a Gamma residue.

    The residue is moved to symplectic coordinates, lifted there by sp_lift
    (odd n) or stab_lift (even n), and moved back.
    """
    _require_gamma_residue(target, SubgroupSpec.gamma(n))
    modulus = target.modulus
    if modulus == 1:
        return IntMatrix.identity(n)
    block = reduce(symplectic_block(target.lift(), n), modulus)
    if n % 2:
        lifted = sp_lift(block, (n - 1) // 2)
    else:
        lifted = stab_lift(block, n // 2)
    return from_symplectic_block(lifted, n)


def gamma_prime_lift(target: ModMatrix, n: int) -> IntMatrix:
    """Gamma' residue to Gamma'_{n-1}: section, lift, restrict."""
    _require_gamma_residue(target, SubgroupSpec.gamma_prime(n))
    if target.modulus == 1:
        return IntMatrix.identity(n - 1)
    preimage = reduce(section_lift(target.lift(), n), target.modulus)
    return restrict_to_w(gamma_lift(preimage, n), n)


@dataclass(frozen=True, slots=True)
class LiftRequest:
    """A residue matrix together with the integral family it should be lifted into."""

    target: ModMatrix
    family: LiftFamily
    levels: tuple[int, int] | None = None


def lift(request: LiftRequest) -> IntMatrix:
    target = request.target
    if request.levels is not None:
        first, second = request.levels
        return crt_lift(target.lift(), first, second, request.family)
    match request.family:
        case LiftFamily.SP:
            return sp_lift(target, target.dim // 2)
        case LiftFamily.STAB:
            return stab_lift(target, target.dim // 2)
        case LiftFamily.GAMMA:
            return gamma_lift(target, target.dim)
        case LiftFamily.GAMMA_PRIME:
            return gamma_prime_lift(target, target.dim + 1)
    raise ValueError(f"unknown lift family {request.family}")
