import json

import pytest

from buraulab.matrices import (
    DimensionError,
    IntMatrix,
    balanced_residue,
    block_diagonal,
)


def test_matrix_must_be_square():
    with pytest.raises(DimensionError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_product_and_inverse_are_exact():
    matrix = IntMatrix.from_rows([[2, -1], [1, 0]])
    assert matrix.inverse() == IntMatrix.from_rows([[0, 1], [-1, 2]])
    assert (matrix @ matrix.inverse()).is_identity()


def test_inverse_requires_unimodular_matrix():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[2, 0], [0, 1]]).inverse()


def test_entries_are_arbitrary_precision():
    big = 10**40
    matrix = IntMatrix.from_rows([[big, 1], [0, 1]])
    assert (matrix @ matrix).entry(0, 0) == big * big


def test_json_round_trip_uses_decimal_strings(tmp_path):
    matrix = IntMatrix.from_rows([[1, -2], [3, 10**30]])
    payload = matrix.to_json_dict()
    assert payload == {"dim": 2, "entries": [["1", "-2"], ["3", str(10**30)]]}
    path = tmp_path / "m.json"
    path.write_text(matrix.to_json())
    assert IntMatrix.from_json_file(path) == matrix


def test_json_dimension_mismatch_is_rejected():
    with pytest.raises(DimensionError):
        IntMatrix.from_json_dict({"dim": 3, "entries": [["1", "0"], ["0", "1"]]})
    with pytest.raises(ValueError):
        IntMatrix.from_json_dict(json.loads('{"entries": []}'))


def test_block_diagonal_skips_missing_blocks():
    rotation = IntMatrix.from_rows([[0, 1], [-1, 0]])
    block = block_diagonal(rotation, None, IntMatrix.identity(1))
    assert block == IntMatrix.from_rows([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])


def test_balanced_residue_range():
    assert balanced_residue(5, 6) == -1
    assert balanced_residue(3, 6) == 3
    assert balanced_residue(-4, 5) == 1


def test_congruence_to_identity():
    matrix = IntMatrix.from_rows([[7, 6], [-6, -5]])
    assert matrix.is_congruent_identity(6)
    assert not matrix.is_congruent_identity(4)
