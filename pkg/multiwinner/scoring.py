"""
Committee scoring functions.

Every evaluator maps a position sequence I in [m]_k (strictly increasing, 1-based)
to an exact rational score. Committee scores sum the per-voter values.
"""

import enum
import itertools
import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .election import Committee, Election, PositionSequence, check_positions
from .errors import InvalidInputError, ParseError, PreconditionError

logger = logging.getLogger(__name__)

# Tabulated evaluators are validated exhaustively, so their size is bounded
TABULATED_MAX_M = 10

RULES = (
    "sntv",
    "bloc",
    "k-borda",
    "beta-cc",
    "cc-alpha",
    "perfectionist",
    "nearly-bloc",
    "pav",
    "bloc-perfectionist",
    "sntv-perfectionist",
)


class Singularity(enum.Enum):
    INFINITE = "infinite"


INFINITE = Singularity.INFINITE


def to_fraction(value) -> Fraction:
    """Exact rational from an int, a Fraction or a ``p/q`` string."""
    if isinstance(value, bool | float):
        raise InvalidInputError(f"scores must be exact rationals, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InvalidInputError(f"not a rational number: {value!r}") from None


def _fractions(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class SingleWinnerScoring:
    """gamma(1) >= ... >= gamma(m) >= 0, indexed by 1-based position"""

    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", _fractions(self.gamma))
        if not self.gamma:
            raise InvalidInputError("single-winner scoring needs at least one position")
        if any(v < 0 for v in self.gamma):
            raise InvalidInputError(f"single-winner scores must be nonnegative: {self.gamma}")
        if any(a < b for a, b in itertools.pairwise(self.gamma)):
            raise InvalidInputError(f"single-winner scores must be nonincreasing: {self.gamma}")

    @property
    def m(self) -> int:
        return len(self.gamma)

    def __call__(self, position: int) -> Fraction:
        return self.gamma[position - 1]

    def scaled(self, factor) -> "SingleWinnerScoring":
        factor = to_fraction(factor)
        return SingleWinnerScoring(tuple(factor * v for v in self.gamma))

    def approval_width(self) -> tuple[Fraction, int] | None:
        """Return (c, t) when gamma equals c times t-Approval, else None."""
        c = self.gamma[0]
        t = sum(1 for v in self.gamma if v == c)
        if c > 0 and all(v == 0 for v in self.gamma[t:]):
            return c, t
        return None


def approval(t: int, m: int) -> SingleWinnerScoring:
    """t-Approval: one point for each of the top t positions."""
    if not 0 <= t <= m:
        raise InvalidInputError(f"approval width {t} outside 0..{m}")
    return SingleWinnerScoring(tuple(1 if i <= t else 0 for i in range(1, m + 1)))


def borda(m: int) -> SingleWinnerScoring:
    return SingleWinnerScoring(tuple(m - i for i in range(1, m + 1)))


@dataclass(frozen=True)
class CountingFunction:
    """g(0..k) of a top-k-counting rule: g(0) = 0 and nondecreasing"""

    g: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", _fractions(self.g))
        if len(self.g) < 2:
            raise InvalidInputError("a counting function needs values g(0..k) with k >= 1")
        if self.g[0] != 0:
            raise InvalidInputError(f"g(0) must be 0, got {self.g[0]}")
        if any(a > b for a, b in itertools.pairwise(self.g)):
            raise InvalidInputError(f"counting function must be nondecreasing: {format_values(self.g)}")

    @property
    def k(self) -> int:
        return len(self.g) - 1

    def __call__(self, x: int) -> Fraction:
        return self.g[x]

    @property
    def differentials(self) -> tuple[Fraction, ...]:
        """(g(1) - g(0), ..., g(k) - g(k - 1))"""
        return tuple(b - a for a, b in itertools.pairwise(self.g))

    def is_linear(self) -> bool:
        return len(set(self.differentials)) == 1

    def is_constant(self) -> bool:
        return self.g[-1] == 0

    def scaled(self, factor) -> "CountingFunction":
        factor = to_fraction(factor)
        return CountingFunction(tuple(factor * v for v in self.g))

    def __str__(self) -> str:
        return format_values(self.g)


def format_values(values: Iterable[Fraction]) -> str:
    return ",".join(str(v) for v in values)


def parse_counting_function(text: str) -> CountingFunction:
    """Parse ``0,1,1,2`` (values g(0..k), rationals written p/q)."""
    tokens = [token.strip() for token in text.split(",")]
    try:
        values = tuple(Fraction(token) for token in tokens)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"counting function must be comma-separated rationals, got {text!r}") from None
    return CountingFunction(values)


@dataclass(frozen=True)
class OwaOperator:
    """Nonnegative weights applied to sorted per-member scores; no unit-sum requirement"""

    lambdas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _fractions(self.lambdas))
        if not self.lambdas:
            raise InvalidInputError("an OWA operator needs at least one weight")
        if any(v < 0 for v in self.lambdas):
            raise InvalidInputError(f"OWA weights must be nonnegative: {format_values(self.lambdas)}")

    @property
    def k(self) -> int:
        return len(self.lambdas)


class ScoringEvaluator(ABC):
    """A committee scoring function f_{m,k}"""

    m: int
    k: int

    @abstractmethod
    def score(self, positions: PositionSequence) -> Fraction:
        """Score of an already validated position sequence."""

    def _check_shape(self):
        if not 1 <= self.k <= self.m:
            raise InvalidInputError(f"committee size {self.k} outside 1..{self.m}")


@dataclass(frozen=True)
class TopKCounting(ScoringEvaluator):
    """f(I) = g(number of entries of I within the top k)"""

    g: CountingFunction
    m: int

    def __post_init__(self):
        self._check_shape()

    @property
    def k(self) -> int:
        return self.g.k

    def score(self, positions: PositionSequence) -> Fraction:
        k = self.g.k
        return self.g(sum(1 for p in positions if p <= k))


@dataclass(frozen=True)
class WeaklySeparable(ScoringEvaluator):
    gamma: SingleWinnerScoring
    k: int

    def __post_init__(self):
        self._check_shape()

    @property
    def m(self) -> int:
        return self.gamma.m

    def score(self, positions: PositionSequence) -> Fraction:
        return sum((self.gamma(p) for p in positions), Fraction(0))


@dataclass(frozen=True)
class RepresentationFocused(ScoringEvaluator):
    """Only the best-ranked member counts"""

    gamma: SingleWinnerScoring
    k: int

    def __post_init__(self):
        self._check_shape()

    @property
    def m(self) -> int:
        return self.gamma.m

    def score(self, positions: PositionSequence) -> Fraction:
        return self.gamma(positions[0])


@dataclass(frozen=True)
class OwaBased(ScoringEvaluator):
    owa: OwaOperator
    gamma: SingleWinnerScoring

    def __post_init__(self):
        self._check_shape()

    @property
    def k(self) -> int:
        return self.owa.k

    @property
    def m(self) -> int:
        return self.gamma.m

    def score(self, positions: PositionSequence) -> Fraction:
        return sum((w * self.gamma(p) for w, p in zip(self.owa.lambdas, positions, strict=True)), Fraction(0))


@dataclass(frozen=True)
class SumOf(ScoringEvaluator):
    """Pointwise sum of evaluators sharing m and k"""

    parts: tuple[ScoringEvaluator, ...]

    def __post_init__(self):
        if not self.parts:
            raise InvalidInputError("a sum of evaluators needs at least one part")
        shapes = {(part.m, part.k) for part in self.parts}
        if len(shapes) != 1:
            raise InvalidInputError(f"summed evaluators disagree on (m, k): {sorted(shapes)}")

    @property
    def m(self) -> int:
        return self.parts[0].m

    @property
    def k(self) -> int:
        return self.parts[0].k

    def score(self, positions: PositionSequence) -> Fraction:
        return sum((part.score(positions) for part in self.parts), Fraction(0))


@dataclass(frozen=True)
class Tabulated(ScoringEvaluator):
    """
    Explicit table over every sequence in [m]_k.

    Construction checks completeness and monotonicity under dominance. Checking
    each unit step (one entry moved one position down) covers every dominance
    pair, since any dominated sequence is reachable by such steps.
    """

    m: int
    k: int
    table: Mapping[PositionSequence, Fraction] = field(hash=False)

    def __post_init__(self):
        self._check_shape()
        if self.m > TABULATED_MAX_M:
            raise InvalidInputError(f"tabulated evaluators are limited to m <= {TABULATED_MAX_M}, got {self.m}")
        table = {tuple(key): to_fraction(value) for key, value in self.table.items()}
        expected = set(position_sequences(self.m, self.k))
        if set(table) != expected:
            missing = sorted(expected - set(table))[:3]
            extra = sorted(set(table) - expected)[:3]
            raise InvalidInputError(f"table must cover [{self.m}]_{self.k} exactly (missing {missing}, extra {extra})")
        for positions, value in table.items():
            for worse in _unit_steps(positions, self.m):
                if table[worse] > value:
                    raise InvalidInputError(
                        f"not monotone under dominance: f{positions} = {value} < f{worse} = {table[worse]}"
                    )
        object.__setattr__(self, "table", table)

    @classmethod
    def from_evaluator(cls, evaluator: ScoringEvaluator) -> "Tabulated":
        return cls(
            evaluator.m,
            evaluator.k,
            {positions: evaluator.score(positions) for positions in position_sequences(evaluator.m, evaluator.k)},
        )

    def score(self, positions: PositionSequence) -> Fraction:
        return self.table[tuple(positions)]


def _unit_steps(positions: PositionSequence, m: int) -> Iterator[PositionSequence]:
    """Sequences dominated by one entry moving one position down."""
    for t, p in enumerate(positions):
        upper = positions[t + 1] if t + 1 < len(positions) else m + 1
        if p + 1 < upper:
            yield positions[:t] + (p + 1,) + positions[t + 1 :]


def position_sequences(m: int, k: int) -> Iterator[PositionSequence]:
    """All of [m]_k in lexicographic order."""
    return itertools.combinations(range(1, m + 1), k)


def evaluate(evaluator: ScoringEvaluator, positions: Sequence[int]) -> Fraction:
    """Value of the committee scoring function on a position sequence in [m]_k."""
    positions = tuple(positions)
    check_positions(positions, evaluator.m, evaluator.k)
    return evaluator.score(positions)


def top_k_count(vote: Sequence[int], committee: Committee, k: int) -> int:
    """Number of committee members the vote ranks within positions 1..k."""
    members = set(committee.members)
    return sum(1 for c in vote[:k] if c in members)


def committee_score(evaluator: ScoringEvaluator, election: Election, committee: Committee) -> Fraction:
    """Sum over voters of the evaluator applied to the committee's positions."""
    if committee.k != evaluator.k:
        raise InvalidInputError(f"committee of size {committee.k} scored by a rule for k={evaluator.k}")
    if evaluator.m != election.m:
        raise InvalidInputError(f"rule configured for m={evaluator.m} but the election has {election.m} candidates")
    committee.check_against(election.m)
    if isinstance(evaluator, TopKCounting):
        g = evaluator.g
        return sum((g(top_k_count(vote, committee, g.k)) for vote in election.votes), Fraction(0))
    return sum(
        (evaluator.score(election.committee_positions(v, committee)) for v in range(election.n)),
        Fraction(0),
    )


def counting_to_owa(g: CountingFunction) -> OwaOperator:
    """OWA weights of the equivalent OWA-based rule over k-Approval."""
    return OwaOperator(g.differentials)


def singularity(g: CountingFunction) -> int | Singularity:
    """Smallest i in 2..k where the differential of g changes, INFINITE if it never does."""
    if g.k < 2:
        raise PreconditionError(f"singularity needs k >= 2, got k={g.k}")
    for i in range(2, g.k + 1):
        if g(i) - g(i - 1) != g(i - 1) - g(i - 2):
            return i
    return INFINITE


def is_convex(g: CountingFunction) -> bool:
    d = g.differentials
    return all(a <= b for a, b in itertools.pairwise(d))


def is_concave(g: CountingFunction) -> bool:
    d = g.differentials
    return all(a >= b for a, b in itertools.pairwise(d))


def bloc_counting(k: int) -> CountingFunction:
    return CountingFunction(tuple(range(k + 1)))


def perfectionist_counting(k: int) -> CountingFunction:
    return CountingFunction((0,) * k + (1,))


def cc_counting(k: int) -> CountingFunction:
    return CountingFunction((0,) + (1,) * k)


def nearly_bloc_counting(k: int) -> CountingFunction:
    return CountingFunction(tuple(max(x - 1, 0) for x in range(k + 1)))


def bloc_perfectionist_counting(k: int) -> CountingFunction:
    """Bloc plus Perfectionist: (0, 1, ..., k - 1, k + 1)."""
    return CountingFunction(tuple(range(k)) + (k + 1,))


def builtin(rule: str, m: int, k: int, t: int | None = None) -> ScoringEvaluator:
    """Evaluator of a named rule for m candidates and committee size k."""
    if not 1 <= k <= m:
        raise InvalidInputError(f"committee size {k} outside 1..{m}")
    if t is not None and rule != "pav":
        raise InvalidInputError(f"rule {rule!r} takes no approval width")
    match rule:
        case "sntv":
            return WeaklySeparable(approval(1, m), k)
        case "bloc":
            return TopKCounting(bloc_counting(k), m)
        case "k-borda":
            return WeaklySeparable(borda(m), k)
        case "beta-cc":
            return RepresentationFocused(borda(m), k)
        case "cc-alpha":
            return TopKCounting(cc_counting(k), m)
        case "perfectionist":
            return TopKCounting(perfectionist_counting(k), m)
        case "nearly-bloc":
            return TopKCounting(nearly_bloc_counting(k), m)
        case "pav":
            width = k if t is None else t
            if not 1 <= width <= m:
                raise InvalidInputError(f"PAV approval width {width} outside 1..{m}")
            harmonic = OwaOperator(tuple(Fraction(1, i) for i in range(1, k + 1)))
            return OwaBased(harmonic, approval(width, m))
        case "bloc-perfectionist":
            return TopKCounting(bloc_perfectionist_counting(k), m)
        case "sntv-perfectionist":
            return SumOf((WeaklySeparable(approval(1, m), k), TopKCounting(perfectionist_counting(k), m)))
        case _:
            raise InvalidInputError(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")


def counting_function_of(evaluator: ScoringEvaluator) -> CountingFunction | None:
    """The counting function of an evaluator that is structurally top-k-counting, else None."""
    k = evaluator.k
    match evaluator:
        case TopKCounting(g=g):
            return g
        case OwaBased(owa=owa, gamma=gamma) if gamma.approval_width() == (1, k):
            return CountingFunction((0, *itertools.accumulate(owa.lambdas)))
        case RepresentationFocused(gamma=gamma) if (width := gamma.approval_width()) and width[1] == k:
            return CountingFunction((0,) + (width[0],) * k)
        case WeaklySeparable(gamma=gamma) if (width := gamma.approval_width()) and width[1] == k:
            return CountingFunction(tuple(width[0] * x for x in range(k + 1)))
        case _:
            return None


def separable_gamma_of(evaluator: ScoringEvaluator) -> SingleWinnerScoring | None:
    """The single-winner scores of a weakly separable evaluator, else None."""
    match evaluator:
        case WeaklySeparable(gamma=gamma):
            return gamma
        case TopKCounting(g=g, m=m) if g.is_linear():
            return approval(g.k, m).scaled(g(1))
        case OwaBased(owa=owa, gamma=gamma) if len(set(owa.lambdas)) == 1:
            return gamma.scaled(owa.lambdas[0])
        case RepresentationFocused(gamma=gamma, k=1):
            return gamma
        case _:
            return None
