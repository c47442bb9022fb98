"""Canonical integer keys for residue matrices.

Entries are packed row-major, little-endian, ``bits`` bits each, where
``bits`` is the bit length of ``modulus - 1``. Keys that fit 64 bits are
numpy ``uint64``; wider keys are Python ints in an object array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, slots=True)
class MatrixCodec:
    dim: int
    modulus: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")

    @property
    def bits(self) -> int:
        return (self.modulus - 1).bit_length()

    @property
    def total_bits(self) -> int:
        return self.dim * self.dim * self.bits

    @property
    def packed(self) -> bool:
        """True when a key fits a single uint64."""
        return self.total_bits <= 64

    @property
    def width(self) -> int:
        """Bytes per key in the on-disk format."""
        return max(1, (self.total_bits + 7) // 8)

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.uint64) if self.packed else np.dtype(object)

    def _words(self, flat: np.ndarray) -> np.ndarray:
        """Pack (k, dim*dim) entries into (k, words) little-endian uint64 words."""
        bits = self.bits
        count = flat.shape[0]
        n_words = max(1, (self.total_bits + 63) // 64)
        words = np.zeros((count, n_words), dtype=np.uint64)
        if bits == 0:
            return words
        for index in range(flat.shape[1]):
            offset = index * bits
            word, shift = divmod(offset, 64)
            column = flat[:, index].astype(np.uint64)
            words[:, word] |= column << np.uint64(shift)
            spill = shift + bits - 64
            if spill > 0:
                words[:, word + 1] |= column >> np.uint64(bits - spill)
        return words

    def encode(self, matrices: np.ndarray) -> np.ndarray:
        """Keys for an array of shape (k, dim, dim) with entries in [0, modulus)."""
        flat = np.asarray(matrices, dtype=np.int64).reshape(-1, self.dim * self.dim)
        words = self._words(flat)
        if self.packed:
            return words[:, 0]
        keys = np.empty(words.shape[0], dtype=object)
        for row, values in enumerate(words.tolist()):
            key = 0
            for position, value in enumerate(values):
                key |= value << (64 * position)
            keys[row] = key
        return keys

    def decode(self, keys: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`encode`; returns int64 of shape (k, dim, dim)."""
        keys = np.asarray(keys)
        count = keys.shape[0]
        size = self.dim * self.dim
        bits = self.bits
        out = np.zeros((count, size), dtype=np.int64)
        if bits == 0 or count == 0:
            return out.reshape(count, self.dim, self.dim)
        mask = (1 << bits) - 1
        if self.packed:
            values = keys.astype(np.uint64)
            for index in range(size):
                shifted = values >> np.uint64(index * bits)
                out[:, index] = (shifted & np.uint64(mask)).astype(np.int64)
        else:
            for row, key in enumerate(keys.tolist()):
                for index in range(size):
                    out[row, index] = (key >> (index * bits)) & mask
        return out.reshape(count, self.dim, self.dim)

    def to_bytes(self, keys: np.ndarray) -> bytes:
        """Fixed-width little-endian serialisation of a key array."""
        if self.packed:
            raw = np.asarray(keys, dtype="<u8").view(np.uint8).reshape(-1, 8)
            return raw[:, : self.width].tobytes()
        return b"".join(int(key).to_bytes(self.width, "little") for key in keys)

    def from_bytes(self, payload: bytes, count: int) -> np.ndarray:
        width = self.width
        if len(payload) != width * count:
            raise ValueError(
                f"expected {width * count} key bytes for {count} keys, "
                f"got {len(payload)}"
            )
        if self.packed:
            raw = np.frombuffer(payload, dtype=np.uint8).reshape(count, width)
            padded = np.zeros((count, 8), dtype=np.uint8)
            padded[:, :width] = raw
            return padded.view("<u8").reshape(count).astype(np.uint64)
        keys = np.empty(count, dtype=object)
        for index in range(count):
            chunk = payload[index * width : (index + 1) * width]
            keys[index] = int.from_bytes(chunk, "little")
        return keys
