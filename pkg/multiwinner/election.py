"""
Election model.

Candidates are 0-based indices with a label table; positions are 1-based, so the
first-listed candidate of a vote has position 1.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidInputError, PreconditionError

Vote = tuple[int, ...]
PositionSequence = tuple[int, ...]


@dataclass(frozen=True)
class Committee:
    """A size-k set of candidate indices, stored sorted"""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise InvalidInputError("committee must not be empty")
        if any(a >= b for a, b in zip(self.members, self.members[1:], strict=False)):
            raise InvalidInputError(f"committee members must be strictly increasing: {self.members}")
        if self.members[0] < 0:
            raise InvalidInputError(f"negative candidate index in committee: {self.members}")

    @classmethod
    def of(cls, candidates: Iterable[int]) -> "Committee":
        """Build a committee from any iterable of distinct indices."""
        members = tuple(sorted(candidates))
        if len(set(members)) != len(members):
            raise InvalidInputError(f"committee has repeated members: {members}")
        return cls(members)

    @property
    def k(self) -> int:
        return len(self.members)

    def check_against(self, m: int):
        if self.members[-1] >= m:
            raise InvalidInputError(f"committee member {self.members[-1]} out of range for {m} candidates")

    def __contains__(self, candidate: int) -> bool:
        return candidate in self.members

    def __iter__(self):
        return iter(self.members)

    def __lt__(self, other: "Committee") -> bool:
        return self.members < other.members


@dataclass(frozen=True)
class Election:
    """Candidate labels plus one strict preference order per voter, most preferred first"""

    candidates: tuple[str, ...]
    votes: tuple[Vote, ...]

    def __post_init__(self):
        m = len(self.candidates)
        if m < 1:
            raise InvalidInputError("an election needs at least one candidate")
        if not self.votes:
            raise InvalidInputError("an election needs at least one vote")
        for label in self.candidates:
            check_label(label)
        if len(set(self.candidates)) != m:
            raise InvalidInputError("candidate labels must be unique")
        full = set(range(m))
        for voter, vote in enumerate(self.votes):
            if len(vote) != m or set(vote) != full:
                raise InvalidInputError(f"vote {voter} is not a permutation of the {m} candidates")

    @classmethod
    def from_labels(cls, candidates: Sequence[str], rankings: Iterable[Sequence[str]]) -> "Election":
        """Build an election from rankings written with candidate labels."""
        index = {label: i for i, label in enumerate(candidates)}
        try:
            votes = tuple(tuple(index[label] for label in ranking) for ranking in rankings)
        except KeyError as e:
            raise InvalidInputError(f"unknown candidate label {e.args[0]!r}") from None
        return cls(tuple(candidates), votes)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return len(self.votes)

    @cached_property
    def position_table(self) -> tuple[tuple[int, ...], ...]:
        """position_table[v][c] is the 1-based position of candidate c in vote v."""
        table = []
        for vote in self.votes:
            row = [0] * self.m
            for position, candidate in enumerate(vote, start=1):
                row[candidate] = position
            table.append(tuple(row))
        return tuple(table)

    def committee_positions(self, voter: int, committee: Committee) -> PositionSequence:
        row = self.position_table[voter]
        return tuple(sorted(row[c] for c in committee.members))

    def committee(self, labels: Iterable[str]) -> Committee:
        """Committee from candidate labels."""
        index = {label: i for i, label in enumerate(self.candidates)}
        try:
            return Committee.of(index[label] for label in labels)
        except KeyError as e:
            raise InvalidInputError(f"unknown candidate label {e.args[0]!r}") from None

    def labels(self, committee: Committee) -> tuple[str, ...]:
        return tuple(self.candidates[c] for c in committee.members)

    def format_committee(self, committee: Committee) -> str:
        return "{" + ",".join(self.labels(committee)) + "}"


def position_of(vote: Sequence[int], candidate: int) -> int:
    """Return the 1-based position of a candidate in a vote."""
    if not 0 <= candidate < len(vote):
        raise InvalidInputError(f"candidate {candidate} out of range for {len(vote)} candidates")
    for position, c in enumerate(vote, start=1):
        if c == candidate:
            return position
    raise InvalidInputError(f"candidate {candidate} does not appear in the vote")


def committee_positions(vote: Sequence[int], committee: Committee) -> PositionSequence:
    """Sorted positions the committee members occupy in the vote."""
    committee.check_against(len(vote))
    return tuple(sorted(position_of(vote, c) for c in committee.members))


def check_positions(positions: Sequence[int], m: int, k: int):
    """Raise unless the sequence belongs to [m]_k."""
    if len(positions) != k:
        raise InvalidInputError(f"expected {k} positions, got {len(positions)}: {tuple(positions)}")
    previous = 0
    for p in positions:
        if p <= previous or p > m:
            raise InvalidInputError(f"positions must be strictly increasing within 1..{m}: {tuple(positions)}")
        previous = p


def dominates(first: Sequence[int], second: Sequence[int]) -> bool:
    """True iff the first position sequence weakly dominates the second."""
    if len(first) != len(second):
        raise PreconditionError(f"cannot compare sequences of length {len(first)} and {len(second)}")
    return all(i <= j for i, j in zip(first, second, strict=True))


def default_labels(m: int) -> tuple[str, ...]:
    """Letters for small elections, c1..cm otherwise."""
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    return tuple(f"c{i + 1}" for i in range(m))


def check_label(label: str):
    """Raise unless the label can be written to an election file and read back."""
    if not isinstance(label, str) or not label:
        raise InvalidInputError(f"candidate labels must be nonempty strings, got {label!r}")
    if label.startswith("#"):
        raise InvalidInputError(f"candidate label {label!r} starts with '#'")
    if "," in label or any(ch.isspace() for ch in label):
        raise InvalidInputError(f"candidate label {label!r} contains whitespace or a comma")
