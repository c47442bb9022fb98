import pytest

from buraulab.claims.registry import (
    ClaimInvocation,
    get_claim,
    list_claims,
    register_claim,
)


def test_get_claim_returns_definition():
    definition = get_claim("theorem_a")
    invocation = definition.builder({"type": "theorem_a", "n": 4, "level": 4})
    assert definition.name == "theorem_a"
    assert {"theorem", "order"} <= definition.tags
    assert isinstance(invocation, ClaimInvocation)
    assert invocation.params == {"n": 4, "level": 4, "reduced": False}
    assert invocation.tags == definition.tags


def test_theorem_b_builder_carries_the_reduced_flag():
    invocation = get_claim("theorem_b").builder(
        {"type": "theorem_b", "n": 4, "level": 3, "reduced": True}
    )
    assert invocation.params == {"n": 4, "level": 3, "reduced": True}


def test_lookup_is_case_insensitive():
    assert get_claim("Arnold").name == "arnold"


def test_list_claims_filters_by_tag():
    claims = list_claims(tag="symplectic")
    assert [definition.name for definition in claims] == ["index"]
    names = [definition.name for definition in list_claims()]
    assert names == sorted(names)
    assert {"quotient", "nonsplit", "multiplicativity", "theorem_b"} <= set(names)


def test_get_claim_raises_for_unknown_type():
    with pytest.raises(KeyError):
        get_claim("does_not_exist")


def test_duplicate_registration_is_rejected():
    with pytest.raises(ValueError):
        register_claim("quotient", get_claim("quotient").builder)


def test_builder_requires_parameters():
    with pytest.raises(ValueError, match="missing level"):
        get_claim("quotient").builder({"type": "quotient", "n": 3})


def test_invocation_turns_errors_into_skips(bench):
    invocation = get_claim("multiplicativity").builder(
        {"type": "multiplicativity", "n": 3, "l": 0, "m": 2}
    )
    report = invocation.evaluate(bench)
    assert report.status.value == "skipped"
    assert report.observed["reason"]
