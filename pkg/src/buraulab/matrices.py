"""Exact integer matrices and the shared matrix JSON format."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import sympy


class DimensionError(ValueError):
    """Raised when matrix or vector dimensions do not line up."""


IntVector = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class IntMatrix:
    """Square matrix with arbitrary-precision integer entries, row-major."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        size = len(self.rows)
        if size == 0:
            raise DimensionError("IntMatrix must have positive dimension")
        for row in self.rows:
            if len(row) != size:
                raise DimensionError(
                    f"IntMatrix must be square, got a row of length {len(row)} "
                    f"in a {size}-row matrix"
                )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> IntMatrix:
        return cls(tuple(tuple(int(value) for value in row) for row in rows))

    @classmethod
    def identity(cls, dim: int) -> IntMatrix:
        return cls(
            tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> IntMatrix:
        dim = len(columns)
        return cls(
            tuple(tuple(int(columns[j][i]) for j in range(dim)) for i in range(dim))
        )

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> IntMatrix:
        return cls.from_rows(array.tolist())

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[IntVector]:
        return [self.column(j) for j in range(self.dim)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.rows, strict=True)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(
                f"cannot multiply {self.dim}x{self.dim} by {other.dim}x{other.dim}"
            )
        cols = other.columns()
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col, strict=True)) for col in cols)
                for row in self.rows
            )
        )

    def apply(self, vector: Sequence[int]) -> IntVector:
        """Matrix times column vector."""
        if len(vector) != self.dim:
            raise DimensionError(
                f"vector of length {len(vector)} vs dimension {self.dim}"
            )
        return tuple(dot(row, vector) for row in self.rows)

    def row_apply(self, vector: Sequence[int]) -> IntVector:
        """Row vector times matrix."""
        if len(vector) != self.dim:
            raise DimensionError(
                f"vector of length {len(vector)} vs dimension {self.dim}"
            )
        return tuple(
            sum(vector[i] * self.rows[i][j] for i in range(self.dim))
            for j in range(self.dim)
        )

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(self.rows)

    def determinant(self) -> int:
        return int(self.to_sympy().det())

    def inverse(self) -> IntMatrix:
        """Exact inverse; the matrix must be unimodular."""
        det = self.determinant()
        if det not in (1, -1):
            raise ValueError(f"matrix with determinant {det} has no integral inverse")
        adjugate = self.to_sympy().adjugate()
        return IntMatrix.from_rows((adjugate * det).tolist())

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.dim)

    def is_congruent_identity(self, modulus: int) -> bool:
        """True iff the matrix is congruent to the identity modulo ``modulus``."""
        return all(
            (value - (1 if i == j else 0)) % modulus == 0
            for i, row in enumerate(self.rows)
            for j, value in enumerate(row)
        )

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=object)

    def to_json_dict(self) -> dict[str, Any]:
        entries = [[str(value) for value in row] for row in self.rows]
        return {"dim": self.dim, "entries": entries}

    @classmethod
    def from_json_dict(cls, payload: Mapping[str, Any]) -> IntMatrix:
        try:
            dim = int(payload["dim"])
            entries = payload["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError("matrix JSON needs 'dim' and 'entries'") from exc
        matrix = cls.from_rows([[int(value) for value in row] for row in entries])
        if matrix.dim != dim:
            raise DimensionError(
                f"matrix JSON declares dim {dim} but has {matrix.dim} rows"
            )
        return matrix

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_file(cls, path: str | Path) -> IntMatrix:
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(value) for value in row) for row in self.rows)


def block_diagonal(*blocks: IntMatrix | None) -> IntMatrix:
    """Block-diagonal matrix; ``None`` blocks are skipped."""
    present = [block for block in blocks if block is not None]
    dim = sum(block.dim for block in present)
    rows = [[0] * dim for _ in range(dim)]
    offset = 0
    for block in present:
        for i, row in enumerate(block.rows):
            rows[offset + i][offset : offset + block.dim] = row
        offset += block.dim
    return IntMatrix.from_rows(rows)


def dot(left: Sequence[int], right: Sequence[int]) -> int:
    if len(left) != len(right):
        raise DimensionError(f"vectors of length {len(left)} and {len(right)}")
    return sum(a * b for a, b in zip(left, right, strict=True))


def balanced_residue(value: int, modulus: int) -> int:
    """Representative of ``value`` mod ``modulus`` in (-modulus/2, modulus/2]."""
    residue = value % modulus
    if 2 * residue > modulus:
        residue -= modulus
    return residue
