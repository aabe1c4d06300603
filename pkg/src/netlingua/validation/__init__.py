"""Schema verification with repair-friendly, deterministic reports."""

from netlingua.validation.checks import (
    validate_after_apply,
    validate_change_set,
    validate_instance,
)
from netlingua.validation.report import Finding, VerificationReport

__all__ = [
    "Finding",
    "VerificationReport",
    "validate_after_apply",
    "validate_change_set",
    "validate_instance",
]
