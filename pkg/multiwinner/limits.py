"""Enumeration budgets shared by the winner determination algorithms."""

from dataclasses import dataclass, replace

from .errors import InvalidInputError


@dataclass(frozen=True)
class Limits:
    """Budgets for exhaustive searches"""

    # C(m, k) above this is refused by brute force
    enumeration_cap: int = 5_000_000
    # tied winners kept before a result is truncated to its canonical committee
    tie_cap: int = 10_000
    # voters allowed in the FPT-by-voters program
    voter_cap: int = 16
    # worker processes for brute force; results are identical for any value
    workers: int = 1

    def __post_init__(self):
        if self.enumeration_cap < 1 or self.tie_cap < 1 or self.voter_cap < 1 or self.workers < 1:
            raise InvalidInputError(f"limits must be positive: {self}")

    def with_overrides(self, **overrides) -> "Limits":
        """Return a copy with every non-None override applied."""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})


DEFAULT_LIMITS = Limits()
