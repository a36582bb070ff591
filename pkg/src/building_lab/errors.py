"""Exception types shared across the package.

The CLI maps these onto exit codes, so each family has its own base class.
"""

import os


class BuildingLabError(Exception):
    pass


class DomainError(BuildingLabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class InvalidRankError(DomainError):
    pass


class IrregularElementError(DomainError):
    pass


class SingularMatrixError(DomainError):
    pass


class InsufficientPrecisionError(BuildingLabError, ArithmeticError):
    """A comparison or pivot could not be certified at the working precision."""


class ResourceGuardError(BuildingLabError, RuntimeError):
    """An enumeration would exceed the configured bound."""


class VerificationError(BuildingLabError, AssertionError):
    pass


DEFAULT_GUARD = 10**6


def enumeration_bound() -> int:
    raw = os.environ.get("BUILDING_LAB_GUARD")
    if raw is None or raw.strip() == "":
        return DEFAULT_GUARD
    return int(raw)


def check_guard(size: int, what: str) -> None:
    bound = enumeration_bound()
    if size > bound:
        raise ResourceGuardError(f"{what}: {size} items exceeds enumeration bound {bound}")
