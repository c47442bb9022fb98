"""
burau-lab: the integral Burau representation and its congruence quotients.

Expose the key classes so downstream users can import from `buraulab`.
"""

__version__ = "0.1.0"

from .braids import BraidWord, burau, parse_word, reduced_burau  # noqa: E402
from .claims import VerificationReport, Workbench  # noqa: E402
from .groups import GroupCache, GroupSet, ModMatrix  # noqa: E402
from .lifting import LiftFamily, LiftRequest, lift  # noqa: E402
from .logging.sqlite import SQLiteRunLogger  # noqa: E402
from .matrices import IntMatrix  # noqa: E402
from .runner import SuiteReport, VerificationRunner  # noqa: E402

__all__ = [
    "BraidWord",
    "GroupCache",
    "GroupSet",
    "IntMatrix",
    "LiftFamily",
    "LiftRequest",
    "ModMatrix",
    "SQLiteRunLogger",
    "SuiteReport",
    "VerificationReport",
    "VerificationRunner",
    "Workbench",
    "__version__",
    "burau",
    "lift",
    "parse_word",
    "reduced_burau",
]
