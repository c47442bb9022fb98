import pytest

np = pytest.importorskip("numpy")

from buraulab.groups.codec import MatrixCodec  # noqa: E402


def _random_matrices(codec: MatrixCodec, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, codec.modulus, size=(count, codec.dim, codec.dim))


def test_small_matrices_pack_into_uint64():
    codec = MatrixCodec(dim=4, modulus=6)
    assert codec.bits == 3
    assert codec.packed
    assert codec.width == 6
    matrices = _random_matrices(codec, 50)
    keys = codec.encode(matrices)
    assert keys.dtype == np.uint64
    assert np.array_equal(codec.decode(keys), matrices)


def test_wide_keys_use_python_ints():
    codec = MatrixCodec(dim=5, modulus=12)
    assert codec.total_bits == 100
    assert not codec.packed
    matrices = _random_matrices(codec, 30, seed=1)
    keys = codec.encode(matrices)
    assert keys.dtype == object
    assert np.array_equal(codec.decode(keys), matrices)


def test_keys_are_distinct_for_distinct_matrices():
    codec = MatrixCodec(dim=3, modulus=5)
    identity = np.eye(3, dtype=np.int64)[None]
    other = identity.copy()
    other[0, 2, 0] = 4
    assert codec.encode(identity)[0] != codec.encode(other)[0]


@pytest.mark.parametrize(("dim", "modulus"), [(4, 6), (5, 12)])
def test_bytes_round_trip(dim, modulus):
    codec = MatrixCodec(dim=dim, modulus=modulus)
    keys = codec.encode(_random_matrices(codec, 20, seed=2))
    payload = codec.to_bytes(keys)
    assert len(payload) == 20 * codec.width
    assert list(codec.from_bytes(payload, 20)) == list(keys)


def test_from_bytes_checks_length():
    codec = MatrixCodec(dim=2, modulus=3)
    with pytest.raises(ValueError):
        codec.from_bytes(b"\x00" * 3, 2)


def test_modulus_one_has_a_single_key():
    codec = MatrixCodec(dim=3, modulus=1)
    assert codec.bits == 0
    keys = codec.encode(np.zeros((2, 3, 3), dtype=np.int64))
    assert keys[0] == keys[1] == 0
    assert codec.decode(keys).shape == (2, 3, 3)


def test_codec_rejects_bad_shapes():
    with pytest.raises(ValueError):
        MatrixCodec(dim=0, modulus=3)
    with pytest.raises(ValueError):
        MatrixCodec(dim=2, modulus=0)
