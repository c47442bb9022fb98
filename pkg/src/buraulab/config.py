from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import yaml

from .claims.base import Workbench
from .claims.registry import ClaimInvocation, get_claim
from .groups.cache import GroupCache
from .groups.engine import DEFAULT_MEM_CAP_MB
from .logging.sqlite import SQLiteRunLogger
from .runner import VerificationRunner


@dataclass(slots=True)
class LabConfig:
    """Process-wide settings: group cache location, memory cap and size policy."""

    cache_dir: Path | None = None
    mem_cap_mb: int = DEFAULT_MEM_CAP_MB
    allow_big: bool = False
    db_path: Path | None = None

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> LabConfig:
        env = os.environ if environ is None else environ
        cache = env.get("BURAU_CACHE")
        cap = env.get("BURAU_MEM_CAP_MB")
        try:
            mem_cap_mb = int(cap) if cap else DEFAULT_MEM_CAP_MB
        except ValueError as exc:
            raise ValueError(
                f"BURAU_MEM_CAP_MB must be an integer, got {cap!r}"
            ) from exc
        return cls(cache_dir=Path(cache) if cache else None, mem_cap_mb=mem_cap_mb)

    def with_overrides(
        self,
        *,
        cache_dir: Path | None = None,
        mem_cap_mb: int | None = None,
        allow_big: bool | None = None,
        db_path: Path | None = None,
    ) -> LabConfig:
        return replace(
            self,
            cache_dir=cache_dir if cache_dir is not None else self.cache_dir,
            mem_cap_mb=mem_cap_mb if mem_cap_mb is not None else self.mem_cap_mb,
            allow_big=self.allow_big if allow_big is None else allow_big,
            db_path=db_path if db_path is not None else self.db_path,
        )

    def build_bench(self) -> Workbench:
        return Workbench(
            store=GroupCache(self.cache_dir, self.mem_cap_mb),
            allow_big=self.allow_big,
        )


@dataclass(slots=True)
class SuiteConfig:
    name: str
    claims: list[Mapping[str, Any]] | None = None
    fail_fast: bool = False
    logger_path: Path | None = None
    include_tags: tuple[str, ...] = ()
    exclude_tags: tuple[str, ...] = ()

    @classmethod
    def from_yaml(cls, path: str | Path) -> SuiteConfig:
        data = yaml.safe_load(Path(path).read_text()) or {}
        selectors = data.get("selectors", {})
        logger_path = data.get("logger", {}).get("path")
        return cls(
            name=data.get("name", Path(path).stem),
            claims=data.get("claims", []),
            fail_fast=data.get("fail_fast", False),
            logger_path=Path(logger_path) if logger_path else None,
            include_tags=tuple(
                tag.lower() for tag in selectors.get("include_tags", [])
            ),
            exclude_tags=tuple(
                tag.lower() for tag in selectors.get("exclude_tags", [])
            ),
        )

    def build_claims(self) -> list[ClaimInvocation]:
        invocations: list[ClaimInvocation] = []
        for config in self.claims or []:
            claim_type = config.get("type")
            if not claim_type:
                raise ValueError("claim entry missing 'type'")
            try:
                definition = get_claim(claim_type)
            except KeyError as exc:
                raise ValueError(f"unknown claim type: {claim_type}") from exc
            if not self._matches_selectors(definition.tags):
                continue
            invocations.append(definition.builder(config))
        return invocations

    def with_overrides(
        self,
        *,
        include_tags: tuple[str, ...] = (),
        exclude_tags: tuple[str, ...] = (),
        fail_fast: bool | None = None,
    ) -> SuiteConfig:
        return replace(
            self,
            include_tags=self.include_tags + _lowered(include_tags),
            exclude_tags=self.exclude_tags + _lowered(exclude_tags),
            fail_fast=self.fail_fast if fail_fast is None else fail_fast,
        )

    def _matches_selectors(self, tags: frozenset[str]) -> bool:
        lowered = {tag.lower() for tag in tags}
        if self.include_tags and not lowered.intersection(self.include_tags):
            return False
        if self.exclude_tags and lowered.intersection(self.exclude_tags):
            return False
        return True

    def build_runner(self, lab: LabConfig | None = None) -> VerificationRunner:
        lab = lab or LabConfig.from_env()
        db_path = self.logger_path or lab.db_path
        logger = SQLiteRunLogger(db_path) if db_path else None
        return VerificationRunner(
            claims=self.build_claims(),
            bench=lab.build_bench(),
            logger=logger,
            fail_fast=self.fail_fast,
        )


def _lowered(tags: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(tag.lower() for tag in tags)
