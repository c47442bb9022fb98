"""Binary cache of enumerated groups plus an in-process memo."""

from __future__ import annotations

import logging
import os
import struct
import tempfile
from collections.abc import Callable
from enum import IntEnum
from pathlib import Path

from .codec import MatrixCodec
from .engine import (
    GroupSet,
    braid_image,
    gamma_prime_quotient_group,
    gamma_quotient_group,
    sp_group,
)

logger = logging.getLogger(__name__)

MAGIC = b"BURAUGRP1"
_HEADER = struct.Struct("<IQBQ")


class GroupFamily(IntEnum):
    BRAID = 0
    REDUCED_BRAID = 1
    SYMPLECTIC = 2
    GAMMA = 3
    GAMMA_PRIME = 4


def write_group(path: Path, group: GroupSet, family: GroupFamily) -> None:
    """Atomically write ``group``: temp file in the same directory, then rename."""
    codec = MatrixCodec(group.dim, group.modulus)
    header = MAGIC + _HEADER.pack(group.dim, group.modulus, int(family), group.order)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(header)
            handle.write(codec.to_bytes(group.keys))
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def read_group(path: Path) -> tuple[GroupFamily, GroupSet]:
    payload = path.read_bytes()
    if not payload.startswith(MAGIC):
        raise ValueError(f"{path} is not a group cache file")
    offset = len(MAGIC)
    dim, modulus, tag, count = _HEADER.unpack_from(payload, offset)
    codec = MatrixCodec(dim, modulus)
    keys = codec.from_bytes(payload[offset + _HEADER.size :], count)
    return GroupFamily(tag), GroupSet(dim, modulus, keys)


class GroupCache:
    """Enumerated groups keyed by (family, dim, modulus).

    Without a directory the cache only memoizes in memory.
    """

    def __init__(
        self, directory: str | Path | None = None, mem_cap_mb: int | None = None
    ) -> None:
        self.directory = Path(directory) if directory else None
        self.mem_cap_mb = mem_cap_mb
        self._memo: dict[tuple[GroupFamily, int, int], GroupSet] = {}

    def path_for(self, family: GroupFamily, dim: int, modulus: int) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"{family.name.lower()}-{dim}-{modulus}.grp"

    def get_or_build(
        self,
        family: GroupFamily,
        dim: int,
        modulus: int,
        builder: Callable[[], GroupSet],
    ) -> GroupSet:
        key = (family, dim, modulus)
        if key in self._memo:
            return self._memo[key]
        path = self.path_for(family, dim, modulus)
        group = self._load(path, key) if path is not None and path.exists() else None
        if group is None:
            group = builder()
            if path is not None:
                write_group(path, group, family)
                logger.info("cached %s at %s", family.name.lower(), path)
        self._memo[key] = group
        return group

    def _load(self, path: Path, key: tuple[GroupFamily, int, int]) -> GroupSet | None:
        try:
            family, group = read_group(path)
        except (ValueError, struct.error) as exc:
            logger.warning("ignoring unreadable cache file %s: %s", path, exc)
            return None
        if (family, group.dim, group.modulus) != key:
            logger.warning("cache file %s holds a different group", path)
            return None
        return group

    def braid_image(self, n: int, modulus: int, *, reduced: bool = False) -> GroupSet:
        family = GroupFamily.REDUCED_BRAID if reduced else GroupFamily.BRAID
        dim = n - 1 if reduced else n
        return self.get_or_build(
            family,
            dim,
            modulus,
            lambda: braid_image(
                n, modulus, reduced=reduced, mem_cap_mb=self.mem_cap_mb
            ),
        )

    def sp_group(self, g: int, modulus: int) -> GroupSet:
        return self.get_or_build(
            GroupFamily.SYMPLECTIC,
            2 * g,
            modulus,
            lambda: sp_group(g, modulus, mem_cap_mb=self.mem_cap_mb),
        )

    def gamma_group(self, n: int, modulus: int) -> GroupSet:
        return self.get_or_build(
            GroupFamily.GAMMA,
            n,
            modulus,
            lambda: gamma_quotient_group(n, modulus, mem_cap_mb=self.mem_cap_mb),
        )

    def gamma_prime_group(self, n: int, modulus: int) -> GroupSet:
        return self.get_or_build(
            GroupFamily.GAMMA_PRIME,
            n - 1,
            modulus,
            lambda: gamma_prime_quotient_group(n, modulus, mem_cap_mb=self.mem_cap_mb),
        )
