import json
import logging
import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import click

from .braids import burau, parse_word, reduced_burau
from .claims.base import ReportStatus, VerificationReport
from .claims.registry import list_claims
from .claims.theorems import (
    member,
    quotient,
    run_safely,
    verify_arnold,
    verify_index,
    verify_multiplicativity,
    verify_nonsplit,
    verify_theorem_a,
    verify_theorem_b,
)
from .config import LabConfig, SuiteConfig
from .groups.engine import EnumerationLimitError, reduce
from .lifting import LiftFamily, LiftRequest, lift
from .matrices import DimensionError, IntMatrix

F = TypeVar("F", bound=Callable[..., Any])

_EXIT_CODES = {
    ReportStatus.VERIFIED: 0,
    ReportStatus.FINDING: 0,
    ReportStatus.REFUTED: 1,
    ReportStatus.SKIPPED: 2,
}


def _fail(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    raise SystemExit(2)


def _guarded(command: F) -> F:
    """Library errors become a message on stderr and exit code 2."""

    @wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except (ValueError, EnumerationLimitError, OSError) as exc:
            _fail(str(exc))

    return wrapper  # type: ignore[return-value]


def _emit_report(report: VerificationReport) -> None:
    click.echo(json.dumps(report.to_json_dict(), indent=2))
    code = _EXIT_CODES[report.status]
    if code:
        raise SystemExit(code)


def _run_report(
    lab: LabConfig,
    claim: str,
    params: dict[str, Any],
    check: Callable[..., VerificationReport],
) -> None:
    bench = lab.build_bench()
    _emit_report(run_safely(lambda: check(bench=bench), claim, params))


def _load_matrix(path: Path) -> IntMatrix:
    try:
        return IntMatrix.from_json_file(path)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc.msg}") from exc


@click.group()
@click.option(
    "--cache-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory for enumerated group files (overrides BURAU_CACHE).",
)
@click.option(
    "--mem-cap-mb",
    type=click.IntRange(min=1),
    default=None,
    help="Memory cap for a single enumeration (overrides BURAU_MEM_CAP_MB).",
)
@click.option(
    "--allow-big",
    is_flag=True,
    default=False,
    help="Run enumerations outside the desk-scale envelope.",
)
@click.option(
    "--db",
    "db_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="SQLite file that records suite runs.",
)
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr.")
@click.pass_context
def cli(
    ctx: click.Context,
    cache_dir: Path | None,
    mem_cap_mb: int | None,
    allow_big: bool,
    db_path: Path | None,
    verbose: bool,
) -> None:
    """Integral Burau representation and finite-quotient theorem checks."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        lab = LabConfig.from_env()
    except ValueError as exc:
        _fail(str(exc))
    ctx.obj = lab.with_overrides(
        cache_dir=cache_dir,
        mem_cap_mb=mem_cap_mb,
        allow_big=True if allow_big else None,
        db_path=db_path,
    )


@cli.command("mat")
@click.option("--n", "n", type=int, required=True, help="Number of strands.")
@click.option("--reduced", is_flag=True, help="Use the reduced representation.")
@click.argument("word")
@_guarded
def mat_command(n: int, reduced: bool, word: str) -> None:
    """Print the Burau matrix of WORD, e.g. "1 -2 3"."""
    parsed = parse_word(word, n)
    matrix = reduced_burau(parsed) if reduced else burau(parsed)
    click.echo(matrix.to_json())


@cli.command("quotient")
@click.option("--n", "n", type=int, required=True)
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--reduced", is_flag=True)
@click.option(
    "--cache-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory for enumerated group files.",
)
@click.pass_obj
@_guarded
def quotient_command(
    lab: LabConfig, n: int, level: int, reduced: bool, cache_dir: Path | None
) -> None:
    """Enumerate the image of B_n mod LEVEL and compare with the predicted order."""
    _run_report(
        lab.with_overrides(cache_dir=cache_dir),
        "quotient",
        {"n": n, "level": level, "reduced": reduced},
        lambda bench: quotient(n, level, reduced=reduced, bench=bench),
    )


@cli.group("verify")
def verify_group() -> None:
    """Finite-quotient checks of the structural theorems."""


@verify_group.command("thm-a")
@click.option("--n", "n", type=int, required=True)
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--reduced", is_flag=True)
@click.pass_obj
@_guarded
def thm_a_command(lab: LabConfig, n: int, level: int, reduced: bool) -> None:
    """Order and product structure of B_n mod LEVEL."""
    _run_report(
        lab,
        "theorem_a",
        {"n": n, "level": level, "reduced": reduced},
        lambda bench: verify_theorem_a(n, level, reduced=reduced, bench=bench),
    )


@verify_group.command("thm-b")
@click.option("--n", "n", type=int, required=True)
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--reduced", is_flag=True)
@click.pass_obj
@_guarded
def thm_b_command(lab: LabConfig, n: int, level: int, reduced: bool) -> None:
    """Image of the level-LEVEL congruence subgroup inside B_n mod 2*LEVEL."""
    _run_report(
        lab,
        "theorem_b",
        {"n": n, "level": level, "reduced": reduced},
        lambda bench: verify_theorem_b(n, level, reduced=reduced, bench=bench),
    )


@verify_group.command("mult")
@click.option("--n", "n", type=int, required=True)
@click.option("--l", "first", type=click.IntRange(min=1), required=True)
@click.option("--m", "second", type=click.IntRange(min=1), required=True)
@click.pass_obj
@_guarded
def mult_command(lab: LabConfig, n: int, first: int, second: int) -> None:
    """Congruence kernels multiply by gcd and intersect by lcm."""
    _run_report(
        lab,
        "multiplicativity",
        {"n": n, "l": first, "m": second},
        lambda bench: verify_multiplicativity(n, first, second, bench=bench),
    )


@verify_group.command("nonsplit")
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=click.IntRange(min=1), required=True)
@click.option("--reduced", is_flag=True)
@click.pass_obj
@_guarded
def nonsplit_command(lab: LabConfig, n: int, k: int, reduced: bool) -> None:
    """Search for a splitting of B_n mod 2^K onto S_n."""
    _run_report(
        lab,
        "nonsplit",
        {"n": n, "k": k, "reduced": reduced},
        lambda bench: verify_nonsplit(n, k, reduced=reduced, bench=bench),
    )


@verify_group.command("arnold")
@click.option("--n", "n", type=int, required=True)
@click.pass_obj
@_guarded
def arnold_command(lab: LabConfig, n: int) -> None:
    """B_n mod 2 is exactly the group of permutation matrices."""
    _run_report(
        lab, "arnold", {"n": n}, lambda bench: verify_arnold(n, bench=bench)
    )


@verify_group.command("index")
@click.option("--n", "n", type=int, required=True)
@click.option("--l", "first", type=click.IntRange(min=1), required=True)
@click.option("--m", "second", type=click.IntRange(min=1), required=True)
@click.pass_obj
@_guarded
def index_command(lab: LabConfig, n: int, first: int, second: int) -> None:
    """Index identity between congruence kernels of the Gamma quotient."""
    _run_report(
        lab,
        "index",
        {"n": n, "l": first, "m": second},
        lambda bench: verify_index(n, first, second, bench=bench),
    )


@cli.command("member")
@click.option("--n", "n", type=int, required=True)
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--reduced", is_flag=True, help="Test the reduced representation.")
@click.option(
    "--matrix",
    "matrix_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
)
@click.pass_obj
@_guarded
def member_command(
    lab: LabConfig, n: int, level: int, reduced: bool, matrix_path: Path
) -> None:
    """Decide whether a matrix lies in the image of the level-LEVEL subgroup."""
    result = member(
        _load_matrix(matrix_path),
        n,
        level,
        reduced=reduced,
        bench=lab.build_bench(),
    )
    payload = {
        "n": n,
        "level": level,
        "reduced": reduced,
        "member": result.member,
        "explanation": result.explanation,
    }
    click.echo(json.dumps(payload, indent=2))
    if not result.member:
        raise SystemExit(1)


@cli.command("lift")
@click.option(
    "--family",
    type=click.Choice([family.value for family in LiftFamily]),
    required=True,
)
@click.option("--g", "g", type=click.IntRange(min=1), default=None, help="Genus.")
@click.option("--modulus", type=click.IntRange(min=1), required=True)
@click.option(
    "--matrix",
    "matrix_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
)
@click.option(
    "--crt-level",
    type=click.IntRange(min=1),
    default=None,
    help="Also make the lift congruent to the identity modulo this level.",
)
@_guarded
def lift_command(
    family: str,
    g: int | None,
    modulus: int,
    matrix_path: Path,
    crt_level: int | None,
) -> None:
    """Lift a residue matrix to an integral matrix of the chosen family."""
    matrix = _load_matrix(matrix_path)
    kind = LiftFamily(family)
    symplectic = kind in (LiftFamily.SP, LiftFamily.STAB)
    if g is not None and symplectic and matrix.dim != 2 * g:
        raise DimensionError(
            f"--g {g} needs a {2 * g}x{2 * g} matrix, got {matrix.dim}x{matrix.dim}"
        )
    levels = None if crt_level is None else (modulus, crt_level)
    lifted = lift(LiftRequest(reduce(matrix, modulus), kind, levels))
    click.echo(lifted.to_json())


@cli.command("suite")
@click.argument(
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "--include-tag",
    "include_tags",
    multiple=True,
    help="Only run claims that carry the given registry tag (can repeat).",
)
@click.option(
    "--exclude-tag",
    "exclude_tags",
    multiple=True,
    help="Skip claims that carry the given registry tag (can repeat).",
)
@click.option(
    "--fail-fast/--no-fail-fast",
    "fail_fast_override",
    default=None,
    help="Override fail-fast behavior defined in the config.",
)
@click.option(
    "--export",
    "export_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the report table to a .csv or .parquet file.",
)
@click.pass_obj
@_guarded
def suite_command(
    lab: LabConfig,
    config_path: Path,
    include_tags: tuple[str, ...],
    exclude_tags: tuple[str, ...],
    fail_fast_override: bool | None,
    export_path: Path | None,
) -> None:
    """Run the configured claim suite and emit a JSON summary."""
    if export_path is not None and export_path.suffix not in (".csv", ".parquet"):
        raise click.BadParameter(
            "expected a .csv or .parquet path", param_hint="--export"
        )
    suite = SuiteConfig.from_yaml(config_path).with_overrides(
        include_tags=include_tags,
        exclude_tags=exclude_tags,
        fail_fast=fail_fast_override,
    )
    runner = suite.build_runner(lab)
    report = runner.run(suite_name=suite.name)

    if export_path is not None:
        frame = report.to_frame()
        if export_path.suffix == ".csv":
            frame.write_csv(export_path)
        else:
            frame.write_parquet(export_path)

    summary = {
        "run_id": report.run_id,
        "suite": report.suite_name,
        "passed": report.passed,
        "reports": [
            {
                "claim": result.claim,
                "params": dict(result.params),
                "status": result.status.value,
            }
            for result in report.reports
        ],
        "refuted_claims": [result.claim for result in report.refuted],
        "skipped_claims": [result.claim for result in report.skipped],
        "status_changes": [
            {
                "claim": change.claim,
                "params": dict(change.params),
                "previous": change.previous.value,
                "current": change.current.value,
            }
            for change in report.changes
        ],
    }
    click.echo(json.dumps(summary, indent=2))

    if not report.passed:
        raise SystemExit(1)


@cli.command("claims")
@click.option("--tag", default=None, help="Only list claims carrying this tag.")
def claims_command(tag: str | None) -> None:
    """List the registered claims."""
    payload = [
        {
            "name": definition.name,
            "description": definition.description,
            "tags": sorted(definition.tags),
        }
        for definition in list_claims(tag)
    ]
    click.echo(json.dumps(payload, indent=2))


def run() -> None:
    cli(prog_name="burau-lab")


if __name__ == "__main__":  # pragma: no cover - script entry point
    run()
