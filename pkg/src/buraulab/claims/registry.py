from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .base import VerificationReport, Workbench
from .theorems import (
    quotient,
    run_safely,
    verify_arnold,
    verify_index,
    verify_multiplicativity,
    verify_nonsplit,
    verify_theorem_a,
    verify_theorem_b,
)


@dataclass(slots=True)
class ClaimInvocation:
    """A claim bound to its parameters, ready to run against a workbench."""

    name: str
    params: Mapping[str, Any]
    check: Callable[[Workbench], VerificationReport]
    tags: frozenset[str] = field(default_factory=frozenset)

    def evaluate(self, bench: Workbench) -> VerificationReport:
        return run_safely(lambda: self.check(bench), self.name, self.params)


ClaimFactory = Callable[[Mapping[str, Any]], ClaimInvocation]


@dataclass(frozen=True)
class ClaimDefinition:
    name: str
    description: str
    tags: frozenset[str]
    builder: ClaimFactory


_REGISTRY: dict[str, ClaimDefinition] = {}


def register_claim(
    name: str,
    builder: ClaimFactory,
    *,
    description: str = "",
    tags: Iterable[str] | None = None,
) -> None:
    key = name.lower()
    if key in _REGISTRY:
        raise ValueError(f"claim '{name}' is already registered")
    _REGISTRY[key] = ClaimDefinition(
        name=name,
        description=description,
        tags=frozenset(tags or ()),
        builder=builder,
    )


def get_claim(name: str) -> ClaimDefinition:
    try:
        return _REGISTRY[name.lower()]
    except KeyError as exc:
        raise KeyError(f"unknown claim type: {name}") from exc


def list_claims(tag: str | None = None) -> list[ClaimDefinition]:
    definitions = _REGISTRY.values()
    if tag:
        tag = tag.lower()
        definitions = [
            definition for definition in definitions if tag in definition.tags
        ]
    return sorted(definitions, key=lambda definition: definition.name)


def _require(config: Mapping[str, Any], *keys: str) -> dict[str, int]:
    missing = [key for key in keys if key not in config]
    if missing:
        claim = config.get("type")
        raise ValueError(f"claim '{claim}' is missing {', '.join(missing)}")
    return {key: int(config[key]) for key in keys}


def _bound(
    name: str, params: dict[str, Any], check: Callable[[Workbench], VerificationReport]
) -> ClaimInvocation:
    return ClaimInvocation(
        name=name,
        params=params,
        check=check,
        tags=get_claim(name).tags,
    )


def _build_theorem_a(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "level")
    reduced = bool(config.get("reduced", False))
    return _bound(
        "theorem_a",
        {**values, "reduced": reduced},
        lambda bench: verify_theorem_a(
            values["n"], values["level"], reduced=reduced, bench=bench
        ),
    )


def _build_theorem_b(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "level")
    reduced = bool(config.get("reduced", False))
    return _bound(
        "theorem_b",
        {**values, "reduced": reduced},
        lambda bench: verify_theorem_b(
            values["n"], values["level"], reduced=reduced, bench=bench
        ),
    )


def _build_multiplicativity(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "l", "m")
    return _bound(
        "multiplicativity",
        values,
        lambda bench: verify_multiplicativity(
            values["n"], values["l"], values["m"], bench=bench
        ),
    )


def _build_nonsplit(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "k")
    reduced = bool(config.get("reduced", False))
    return _bound(
        "nonsplit",
        {**values, "reduced": reduced},
        lambda bench: verify_nonsplit(
            values["n"], values["k"], reduced=reduced, bench=bench
        ),
    )


def _build_quotient(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "level")
    reduced = bool(config.get("reduced", False))
    return _bound(
        "quotient",
        {**values, "reduced": reduced},
        lambda bench: quotient(
            values["n"], values["level"], reduced=reduced, bench=bench
        ),
    )


def _build_arnold(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n")
    return _bound(
        "arnold", values, lambda bench: verify_arnold(values["n"], bench=bench)
    )


def _build_index(config: Mapping[str, Any]) -> ClaimInvocation:
    values = _require(config, "n", "l", "m")
    return _bound(
        "index",
        values,
        lambda bench: verify_index(values["n"], values["l"], values["m"], bench=bench),
    )


register_claim(
    "theorem_a",
    _build_theorem_a,
    description="Order and product structure of B_n mod l against the prediction.",
    tags=("theorem", "order", "structure"),
)
register_claim(
    "theorem_b",
    _build_theorem_b,
    description="Image of the level-l congruence subgroup inside B_n mod 2l.",
    tags=("theorem", "image"),
)
register_claim(
    "multiplicativity",
    _build_multiplicativity,
    description="Products and intersections of congruence kernels follow gcd and lcm.",
    tags=("theorem", "structure"),
)
register_claim(
    "nonsplit",
    _build_nonsplit,
    description="Searches for a splitting of B_n mod 2^k onto S_n.",
    tags=("theorem", "extension"),
)
register_claim(
    "quotient",
    _build_quotient,
    description="Enumerates B_n mod l and compares the order with the prediction.",
    tags=("order",),
)
register_claim(
    "arnold",
    _build_arnold,
    description="B_n mod 2 is exactly the group of permutation matrices.",
    tags=("image", "order"),
)
register_claim(
    "index",
    _build_index,
    description="Index identity between symplectic congruence kernels.",
    tags=("symplectic", "structure"),
)
