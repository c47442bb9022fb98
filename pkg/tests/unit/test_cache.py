import pytest

pytest.importorskip("numpy")

from buraulab.groups import cache as cache_module  # noqa: E402
from buraulab.groups.cache import (  # noqa: E402
    GroupCache,
    GroupFamily,
    read_group,
    write_group,
)
from buraulab.groups.engine import braid_image  # noqa: E402


def test_write_and_read_group(tmp_path):
    group = braid_image(3, 4)
    path = tmp_path / "braid.grp"
    write_group(path, group, GroupFamily.BRAID)
    family, loaded = read_group(path)
    assert family is GroupFamily.BRAID
    assert loaded.same_elements(group)
    assert not list(tmp_path.glob("*.tmp"))


def test_read_group_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.grp"
    path.write_bytes(b"not a group")
    with pytest.raises(ValueError):
        read_group(path)


def test_memory_only_cache_memoizes():
    store = GroupCache()
    assert store.path_for(GroupFamily.BRAID, 3, 2) is None
    first = store.braid_image(3, 2)
    assert store.braid_image(3, 2) is first


def test_second_cache_loads_from_disk(tmp_path, monkeypatch):
    built = GroupCache(tmp_path).braid_image(4, 2)
    assert (tmp_path / "braid-4-2.grp").exists()

    def fail(*args, **kwargs):
        raise AssertionError("group should come from disk")

    monkeypatch.setattr(cache_module, "braid_image", fail)
    loaded = GroupCache(tmp_path).braid_image(4, 2)
    assert loaded.same_elements(built)


def test_reduced_images_have_their_own_files(tmp_path):
    store = GroupCache(tmp_path)
    assert store.braid_image(4, 2, reduced=True).dim == 3
    assert (tmp_path / "reduced_braid-3-2.grp").exists()


def test_corrupt_file_is_rebuilt(tmp_path):
    path = tmp_path / "braid-3-3.grp"
    path.write_bytes(b"BURAUGRP1 truncated")
    group = GroupCache(tmp_path).braid_image(3, 3)
    assert group.order == 24
    family, loaded = read_group(path)
    assert family is GroupFamily.BRAID
    assert loaded.order == 24


def test_mismatched_file_is_ignored(tmp_path):
    write_group(tmp_path / "braid-3-3.grp", braid_image(3, 2), GroupFamily.BRAID)
    assert GroupCache(tmp_path).braid_image(3, 3).order == 24


def test_symplectic_and_gamma_groups_are_cached(tmp_path):
    store = GroupCache(tmp_path)
    assert store.sp_group(1, 3).order == 24
    assert store.gamma_group(3, 3).order == 24
    assert store.gamma_prime_group(3, 3).order == 24
    assert {path.name for path in tmp_path.iterdir()} == {
        "symplectic-2-3.grp",
        "gamma-3-3.grp",
        "gamma_prime-2-3.grp",
    }
