"""Explicit enumeration of finite matrix groups over Z/lZ."""

from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import sympy

from ..braids import burau_sigma, reduced_burau_sigma
from ..matrices import DimensionError, IntMatrix, balanced_residue
from ..orders import sp_order
from ..symplectic import (
    FormSpec,
    c_matrices,
    gamma_coordinate_change,
)
from .codec import MatrixCodec

logger = logging.getLogger(__name__)

DEFAULT_MEM_CAP_MB = 2048
# element count per product batch in the BFS and filters
_CHUNK_ENTRIES = 1 << 22
_OBJECT_KEY_BYTES = 112


class NonInvertibleError(ValueError):
    """Raised when a generator is not invertible modulo its modulus."""


class EnumerationLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured memory cap."""


def default_mem_cap_mb() -> int:
    raw = os.environ.get("BURAU_MEM_CAP_MB")
    return int(raw) if raw else DEFAULT_MEM_CAP_MB


@dataclass(frozen=True, slots=True)
class ModMatrix:
    """Square matrix over Z/modulus with entries in [0, modulus), row-major."""

    dim: int
    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if len(self.entries) != self.dim * self.dim:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.dim}x{self.dim} matrix"
            )
        if any(not 0 <= value < self.modulus for value in self.entries):
            raise ValueError(f"entries must be reduced mod {self.modulus}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], modulus: int) -> ModMatrix:
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        materialised = [[int(value) % modulus for value in row] for row in rows]
        return cls(
            len(materialised), modulus, tuple(v for row in materialised for v in row)
        )

    @classmethod
    def from_array(cls, array: np.ndarray, modulus: int) -> ModMatrix:
        return cls.from_rows(np.asarray(array).tolist(), modulus)

    @classmethod
    def identity(cls, dim: int, modulus: int) -> ModMatrix:
        return cls.from_rows(IntMatrix.identity(dim).rows, modulus)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        d = self.dim
        return tuple(self.entries[i * d : (i + 1) * d] for i in range(d))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.dim, self.dim)

    def __matmul__(self, other: ModMatrix) -> ModMatrix:
        if not isinstance(other, ModMatrix):
            return NotImplemented
        _check_compatible([self, other])
        return ModMatrix.from_array(
            (self.to_array() @ other.to_array()) % self.modulus, self.modulus
        )

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.dim:
            raise DimensionError(
                f"vector of length {len(vector)} vs dimension {self.dim}"
            )
        product = self.to_array() @ np.array([int(v) for v in vector], dtype=np.int64)
        return tuple(int(value) for value in product % self.modulus)

    def inverse(self) -> ModMatrix:
        if self.modulus == 1:
            return self
        try:
            inverse = sympy.Matrix(self.rows).inv_mod(self.modulus)
        except ValueError as exc:
            raise NonInvertibleError(
                f"matrix is not invertible modulo {self.modulus}"
            ) from exc
        return ModMatrix.from_rows(inverse.tolist(), self.modulus)

    def is_identity(self) -> bool:
        return self == ModMatrix.identity(self.dim, self.modulus)

    def reduce(self, modulus: int) -> ModMatrix:
        """Coarser reduction; ``modulus`` must divide the current one."""
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ModMatrix.from_rows(self.rows, modulus)

    def lift(self) -> IntMatrix:
        return IntMatrix.from_rows(self.rows)

    def balanced_lift(self) -> IntMatrix:
        modulus = self.modulus
        return IntMatrix.from_rows(
            [balanced_residue(value, modulus) for value in row] for row in self.rows
        )

    def __str__(self) -> str:
        body = "\n".join(" ".join(str(value) for value in row) for row in self.rows)
        return f"{body}\n(mod {self.modulus})"


def reduce(matrix: IntMatrix, modulus: int) -> ModMatrix:
    """Entrywise least nonnegative residues."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    return ModMatrix.from_rows(matrix.rows, modulus)


def _check_compatible(matrices: Sequence[ModMatrix]) -> tuple[int, int]:
    if not matrices:
        raise ValueError("need at least one matrix")
    dim, modulus = matrices[0].dim, matrices[0].modulus
    for matrix in matrices[1:]:
        if matrix.dim != dim or matrix.modulus != modulus:
            raise DimensionError(
                f"mixed shapes: {matrix.dim} mod {matrix.modulus} "
                f"vs {dim} mod {modulus}"
            )
    return dim, modulus


@dataclass(frozen=True, slots=True, eq=False)
class GroupSet:
    """Sorted, duplicate-free canonical keys of a finite set of residue matrices."""

    dim: int
    modulus: int
    keys: np.ndarray
    generators: tuple[ModMatrix, ...] = field(default=())

    @property
    def codec(self) -> MatrixCodec:
        return MatrixCodec(self.dim, self.modulus)

    @property
    def order(self) -> int:
        return int(self.keys.shape[0])

    def __len__(self) -> int:
        return self.order

    def matrices(self) -> np.ndarray:
        return self.codec.decode(self.keys)

    def elements(self) -> Iterator[ModMatrix]:
        for array in self.matrices():
            yield ModMatrix.from_array(array, self.modulus)

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        if self.codec.packed:
            return np.isin(keys, self.keys)
        present = set(self.keys.tolist())
        return np.fromiter((key in present for key in keys.tolist()), dtype=bool)

    def contains_arrays(self, arrays: np.ndarray) -> np.ndarray:
        return self.contains_keys(self.codec.encode(arrays))

    def __contains__(self, matrix: object) -> bool:
        if not isinstance(matrix, ModMatrix):
            return False
        if matrix.dim != self.dim or matrix.modulus != self.modulus:
            return False
        return bool(self.contains_arrays(matrix.to_array()[None])[0])

    def same_elements(self, other: GroupSet) -> bool:
        shape = (self.dim, self.modulus, self.order)
        if shape != (other.dim, other.modulus, other.order):
            return False
        return bool(np.array_equal(self.keys, other.keys))

    def identity_key(self) -> np.ndarray:
        return self.codec.encode(_identity_array(self.dim, self.modulus)[None])

    def subset(self, mask: np.ndarray) -> GroupSet:
        return GroupSet(self.dim, self.modulus, self.keys[mask])

    def verify_closed(self, sample: int = 256, seed: int = 0) -> bool:
        """Identity present; sampled products and inverses stay in the set."""
        if not self.contains_keys(self.identity_key())[0]:
            return False
        rng = np.random.default_rng(seed)
        mats = self.matrices()
        picks = rng.integers(0, self.order, size=(min(sample, self.order), 2))
        products = (mats[picks[:, 0]] @ mats[picks[:, 1]]) % self.modulus
        if not self.contains_arrays(products).all():
            return False
        for index in picks[:, 0].tolist():
            inverse = ModMatrix.from_array(mats[index], self.modulus).inverse()
            if inverse not in self:
                return False
        return True


def _identity_array(dim: int, modulus: int) -> np.ndarray:
    return np.eye(dim, dtype=np.int64) % modulus


def _sorted_unique(keys: np.ndarray) -> np.ndarray:
    if keys.dtype == object:
        return np.array(sorted(set(keys.tolist())), dtype=object)
    return np.unique(keys)


def group_from_arrays(
    arrays: np.ndarray,
    modulus: int,
    generators: Sequence[ModMatrix] = (),
) -> GroupSet:
    """Canonical set of the given (k, dim, dim) residue arrays."""
    arrays = np.asarray(arrays, dtype=np.int64) % modulus
    dim = arrays.shape[-1]
    codec = MatrixCodec(dim, modulus)
    keys = _sorted_unique(codec.encode(arrays)) if len(arrays) else np.array(
        [], dtype=codec.dtype
    )
    return GroupSet(dim, modulus, keys, tuple(generators))


class _KeyStore:
    """Visited keys: a sorted uint64 array, or a Python set for wide keys."""

    def __init__(self, codec: MatrixCodec) -> None:
        self._packed = codec.packed
        self._sorted = np.array([], dtype=np.uint64)
        self._set: set[int] = set()

    def __len__(self) -> int:
        return int(self._sorted.shape[0]) if self._packed else len(self._set)

    def add_new(self, keys: np.ndarray) -> np.ndarray:
        """Add keys; return indices (into ``keys``) of the ones not seen before."""
        if self._packed:
            unique, index = np.unique(keys, return_index=True)
            fresh = ~np.isin(unique, self._sorted, assume_unique=True)
            self._sorted = np.union1d(self._sorted, unique[fresh])
            return index[fresh]
        fresh_index = []
        for position, key in enumerate(keys.tolist()):
            if key not in self._set:
                self._set.add(key)
                fresh_index.append(position)
        return np.array(fresh_index, dtype=np.int64)

    def bytes_estimate(self) -> int:
        return len(self) * (8 if self._packed else _OBJECT_KEY_BYTES)

    def sorted_keys(self) -> np.ndarray:
        if self._packed:
            return self._sorted
        return np.array(sorted(self._set), dtype=object)


def _batches(count: int, per_item: int) -> Iterator[slice]:
    step = max(1, _CHUNK_ENTRIES // max(1, per_item))
    for start in range(0, count, step):
        yield slice(start, min(count, start + step))


def _pairwise_products(
    left: np.ndarray, right: np.ndarray, modulus: int
) -> Iterator[np.ndarray]:
    """All products l @ r, batched over ``left``; each batch is (b*|right|, d, d)."""
    dim = left.shape[-1]
    per_item = right.shape[0] * dim * dim
    for part in _batches(left.shape[0], per_item):
        block = (left[part, None] @ right[None]) % modulus
        yield block.reshape(-1, dim, dim)


def close(
    generators: Sequence[ModMatrix],
    *,
    mem_cap_mb: int | None = None,
) -> GroupSet:
    """The subgroup generated, by BFS right multiplication with gens and inverses."""
    dim, modulus = _check_compatible(generators)
    cap_bytes = (mem_cap_mb or default_mem_cap_mb()) * 1024 * 1024
    codec = MatrixCodec(dim, modulus)

    steps: list[ModMatrix] = []
    for generator in generators:
        for candidate in (generator, generator.inverse()):
            if candidate not in steps:
                steps.append(candidate)
    step_arrays = np.stack([step.to_array() for step in steps])

    store = _KeyStore(codec)
    frontier = _identity_array(dim, modulus)[None]
    store.add_new(codec.encode(frontier))
    depth = 0
    while frontier.shape[0]:
        discovered: list[np.ndarray] = []
        for products in _pairwise_products(frontier, step_arrays, modulus):
            fresh = store.add_new(codec.encode(products))
            if fresh.size:
                discovered.append(products[fresh])
            frontier_bytes = sum(part.nbytes for part in discovered)
            if store.bytes_estimate() + frontier_bytes > cap_bytes:
                raise EnumerationLimitError(
                    f"enumeration of a {dim}x{dim} group mod {modulus} passed "
                    f"{len(store)} elements and the {cap_bytes // (1024 * 1024)} MB cap"
                )
        if discovered:
            frontier = np.concatenate(discovered)
        else:
            frontier = np.empty((0, dim, dim), np.int64)
        depth += 1
        logger.debug("depth %d: %d new, %d total", depth, frontier.shape[0], len(store))

    keys = store.sorted_keys()
    logger.info("closed %dx%d group mod %d: order %d", dim, dim, modulus, len(keys))
    return GroupSet(dim, modulus, keys, tuple(generators))


def congruence_kernel(group: GroupSet, divisor: int) -> GroupSet:
    """{g in G : g = I mod divisor}."""
    if divisor < 1 or group.modulus % divisor:
        raise ValueError(f"{divisor} does not divide the modulus {group.modulus}")
    mats = group.matrices()
    offset = (mats - np.eye(group.dim, dtype=np.int64)) % divisor
    return group.subset(~offset.reshape(group.order, -1).any(axis=1))


def _check_same_ambient(left: GroupSet, right: GroupSet) -> None:
    if (left.dim, left.modulus) != (right.dim, right.modulus):
        raise DimensionError(
            f"sets live in different groups: {left.dim} mod {left.modulus} "
            f"vs {right.dim} mod {right.modulus}"
        )


def set_product(left: GroupSet, right: GroupSet) -> GroupSet:
    """{hk : h in H, k in K} as a sorted set (not closed a priori)."""
    _check_same_ambient(left, right)
    codec = left.codec
    store = _KeyStore(codec)
    for products in _pairwise_products(left.matrices(), right.matrices(), left.modulus):
        store.add_new(codec.encode(products))
    return GroupSet(left.dim, left.modulus, store.sorted_keys())


def intersection(left: GroupSet, right: GroupSet) -> GroupSet:
    _check_same_ambient(left, right)
    return left.subset(right.contains_keys(left.keys))


def is_subset(inner: GroupSet, outer: GroupSet) -> bool:
    _check_same_ambient(inner, outer)
    return bool(outer.contains_keys(inner.keys).all())


def elements_commute(left: GroupSet, right: GroupSet) -> bool:
    _check_same_ambient(left, right)
    modulus = left.modulus
    right_mats = right.matrices()
    dim = left.dim
    per_item = right.order * dim * dim
    left_mats = left.matrices()
    for part in _batches(left.order, per_item):
        chunk = left_mats[part]
        forward = (chunk[:, None] @ right_mats[None]) % modulus
        backward = (right_mats[None] @ chunk[:, None]) % modulus
        if not np.array_equal(forward, backward):
            return False
    return True


def is_internal_direct_product(
    group: GroupSet, left: GroupSet, right: GroupSet
) -> bool:
    """H and K commute elementwise, meet trivially and |H||K| = |G|."""
    if not (is_subset(left, group) and is_subset(right, group)):
        raise ValueError("both factors must be contained in the group")
    if intersection(left, right).order != 1:
        return False
    if left.order * right.order != group.order:
        return False
    return elements_commute(left, right)


def is_elementary_abelian_2(group: GroupSet) -> bool:
    """Abelian and every element squares to the identity."""
    mats = group.matrices()
    squares = (mats @ mats) % group.modulus
    if not (squares == _identity_array(group.dim, group.modulus)).all():
        return False
    return elements_commute(group, group)


def stabilizer_subgroup(group: GroupSet, vector: Sequence[int]) -> GroupSet:
    """{g in G : g v = v}."""
    if len(vector) != group.dim:
        raise DimensionError(f"vector of length {len(vector)} vs dimension {group.dim}")
    target = np.array([int(v) % group.modulus for v in vector], dtype=np.int64)
    if not target.any():
        raise ValueError("the vector must be nonzero modulo the group's modulus")
    images = (group.matrices() @ target) % group.modulus
    return group.subset((images == target).all(axis=1))


def symplectic_transvections(g: int, modulus: int) -> list[ModMatrix]:
    """x -> x + <x, v> v for v = e_i and e_i + e_j in the interleaved standard form."""
    dim = 2 * g
    gram = np.array(FormSpec.standard(dim).gram.rows, dtype=np.int64)
    vectors = [np.eye(dim, dtype=np.int64)[i] for i in range(dim)]
    vectors.extend(
        np.eye(dim, dtype=np.int64)[i] + np.eye(dim, dtype=np.int64)[j]
        for i, j in combinations(range(dim), 2)
    )
    identity = np.eye(dim, dtype=np.int64)
    return [
        ModMatrix.from_array(identity - np.outer(v, v) @ gram, modulus)
        for v in vectors
    ]


def sp_group(g: int, modulus: int, *, mem_cap_mb: int | None = None) -> GroupSet:
    """Sp_2g(Z/modulus), checked against the closed-form order."""
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")
    group = close(symplectic_transvections(g, modulus), mem_cap_mb=mem_cap_mb)
    expected = sp_order(g, modulus)
    if group.order != expected:
        raise RuntimeError(
            f"transvections generated {group.order} elements, expected {expected}"
        )
    return group


def _conjugate_batch(
    arrays: np.ndarray, change: IntMatrix, change_inv: IntMatrix, modulus: int
) -> np.ndarray:
    left = np.array(change.rows, dtype=np.int64) % modulus
    right = np.array(change_inv.rows, dtype=np.int64) % modulus
    out = []
    for part in _batches(arrays.shape[0], arrays.shape[-1] ** 2):
        out.append((((left @ arrays[part]) % modulus) @ right) % modulus)
    return np.concatenate(out) if out else arrays


def gamma_quotient_group(
    n: int, modulus: int, *, mem_cap_mb: int | None = None
) -> GroupSet:
    """Gamma_{n-1} / Gamma_{n-1}[modulus] as residue matrices in GL_n."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if modulus == 1:
        return group_from_arrays(np.zeros((1, n, n), dtype=np.int64), 1)
    change, change_inv = gamma_coordinate_change(n)
    if n % 2:
        inner = sp_group((n - 1) // 2, modulus, mem_cap_mb=mem_cap_mb).matrices()
        blocks = np.zeros((inner.shape[0], n, n), dtype=np.int64)
        blocks[:, : n - 1, : n - 1] = inner
        blocks[:, n - 1, n - 1] = 1 % modulus
    else:
        full = sp_group(n // 2, modulus, mem_cap_mb=mem_cap_mb)
        e1 = [1] + [0] * (n - 1)
        blocks = stabilizer_subgroup(full, e1).matrices()
    conjugated = _conjugate_batch(blocks, change, change_inv, modulus)
    return group_from_arrays(conjugated, modulus)


def restrict_batch(arrays: np.ndarray, n: int, modulus: int) -> np.ndarray:
    """L M C mod modulus for a batch of n x n residue matrices."""
    l_rows, c_rows = c_matrices(n)
    left = np.array(l_rows, dtype=np.int64) % modulus
    right = np.array(c_rows, dtype=np.int64) % modulus
    out = []
    for part in _batches(arrays.shape[0], n * n):
        out.append((((left @ arrays[part]) % modulus) @ right) % modulus)
    return np.concatenate(out) if out else np.empty((0, n - 1, n - 1), np.int64)


def gamma_prime_quotient_group(
    n: int, modulus: int, *, mem_cap_mb: int | None = None
) -> GroupSet:
    """Gamma'_{n-1} / Gamma'_{n-1}[modulus] as the psi-image of the Gamma residues."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    gamma = gamma_quotient_group(n, modulus, mem_cap_mb=mem_cap_mb)
    return group_from_arrays(restrict_batch(gamma.matrices(), n, modulus), modulus)


def braid_generators_mod(
    n: int, modulus: int, *, reduced: bool = False
) -> list[ModMatrix]:
    sigma = reduced_burau_sigma if reduced else burau_sigma
    return [reduce(sigma(n, i), modulus) for i in range(1, n)]


def braid_image(
    n: int, modulus: int, *, reduced: bool = False, mem_cap_mb: int | None = None
) -> GroupSet:
    """Image of B_n under the (reduced) Burau representation mod ``modulus``."""
    generators = braid_generators_mod(n, modulus, reduced=reduced)
    return close(generators, mem_cap_mb=mem_cap_mb)


MaskPredicate = Callable[[np.ndarray], np.ndarray]


def filter_matrices(dim: int, modulus: int, predicate: MaskPredicate) -> GroupSet:
    """Every dim x dim residue matrix satisfying ``predicate`` (a batched mask)."""
    size = dim * dim
    total = modulus**size
    powers = modulus ** np.arange(size, dtype=np.int64)
    kept: list[np.ndarray] = []
    for part in _batches(total, size):
        index = np.arange(part.start, part.stop, dtype=np.int64)
        digits = (index[:, None] // powers) % modulus
        arrays = digits.reshape(-1, dim, dim)
        kept.append(arrays[predicate(arrays)])
    return group_from_arrays(np.concatenate(kept), modulus)


def isometry_mask(gram: IntMatrix, modulus: int) -> MaskPredicate:
    form = np.array(gram.rows, dtype=np.int64) % modulus

    def predicate(arrays: np.ndarray) -> np.ndarray:
        pulled = (np.swapaxes(arrays, 1, 2) @ form @ arrays) % modulus
        return (pulled == form).all(axis=(1, 2))

    return predicate


def fixes_mask(vector: Sequence[int], modulus: int) -> MaskPredicate:
    target = np.array([int(v) % modulus for v in vector], dtype=np.int64)

    def predicate(arrays: np.ndarray) -> np.ndarray:
        return ((arrays @ target) % modulus == target).all(axis=1)

    return predicate


def all_of(*predicates: MaskPredicate) -> MaskPredicate:
    def predicate(arrays: np.ndarray) -> np.ndarray:
        mask = np.ones(arrays.shape[0], dtype=bool)
        for check in predicates:
            mask &= check(arrays)
        return mask

    return predicate
