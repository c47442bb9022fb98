from .base import ReportStatus, RunContext, VerificationReport, Workbench
from .registry import ClaimInvocation, get_claim, list_claims, register_claim

__all__ = [
    "ClaimInvocation",
    "ReportStatus",
    "RunContext",
    "VerificationReport",
    "Workbench",
    "get_claim",
    "list_claims",
    "register_claim",
]
