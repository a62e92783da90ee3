"""
Fixed-majority criterion.

A rule satisfies the criterion when, whenever more than half of the voters
rank the same k candidates within their top k, that set is the unique winning
committee. For top-k-counting rules this is decided by an inequality on the
counting function; rules that fail get an explicit counterexample election.
"""

import enum
import itertools
import logging
import math
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .election import Committee, Election, PositionSequence, default_labels
from .errors import InconsistentResultError, InvalidInputError, PreconditionError
from .limits import DEFAULT_LIMITS, Limits
from .scoring import CountingFunction, ScoringEvaluator, Tabulated, is_concave, is_convex
from .winners import WinnerResult, brute_force_winners

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """g(k) - g(k - k2) >= g(k1 + k2) - g(k1) fails: lhs < rhs"""

    k1: int
    k2: int
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class FmCheckResult:
    satisfies: bool
    violation: Violation | None
    nonconstant: bool


def fm_condition_check(g: CountingFunction, k: int | None = None) -> FmCheckResult:
    """Test g is nonconstant and the differential inequality for every k1 + k2 <= k."""
    if k is not None and k != g.k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    k = g.k
    violation = None
    for k1 in range(k + 1):
        for k2 in range(k - k1 + 1):
            lhs, rhs = g(k) - g(k - k2), g(k1 + k2) - g(k1)
            if lhs < rhs:
                violation = Violation(k1, k2, lhs, rhs)
                break
        if violation:
            break
    nonconstant = not g.is_constant()
    return FmCheckResult(nonconstant and violation is None, violation, nonconstant)


def is_fixed_majority_instance(election: Election, k: int) -> Committee | None:
    """The k-set that a strict majority of voters ranks within their top k, if any."""
    if not 1 <= k <= election.m:
        raise InvalidInputError(f"committee size {k} outside 1..{election.m}")
    prefixes = Counter(tuple(sorted(vote[:k])) for vote in election.votes)
    members, count = prefixes.most_common(1)[0]
    if 2 * count > election.n:
        return Committee(members)
    return None


class FmVerdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class EmpiricalFmResult:
    verdict: FmVerdict
    majority_committee: Committee | None = None
    winners: WinnerResult | None = None


def empirical_fm_check(
    evaluator: ScoringEvaluator, election: Election, k: int, limits: Limits = DEFAULT_LIMITS
) -> EmpiricalFmResult:
    """Compare the brute-force winners with the fixed-majority committee."""
    majority = is_fixed_majority_instance(election, k)
    if majority is None:
        return EmpiricalFmResult(FmVerdict.NOT_APPLICABLE)
    result = brute_force_winners(evaluator, election, k, limits)
    unique = result.winners == (majority,) and not result.truncated
    verdict = FmVerdict.PASS if unique else FmVerdict.FAIL
    logger.debug(f"Fixed majority {majority.members}: {verdict.value}, {len(result.winners)} winners")
    return EmpiricalFmResult(verdict, majority, result)


@dataclass(frozen=True)
class FmWitness:
    """An election where the majority committee M does not win alone"""

    election: Election
    majority_committee: Committee
    beating_committee: Committee
    n_used: int
    k: int
    violation: tuple[int, int] | None = None
    t: int | None = None


def _check_witness_shape(m: int, k: int):
    if k < 1 or m < 2 * k:
        raise PreconditionError(f"witnesses need m >= 2k, got m={m} k={k}")


def witness_counting(g: CountingFunction, m: int, k: int | None = None) -> FmWitness | None:
    """
    Counterexample for a counting function failing the criterion, None if it satisfies it.

    With the first violation (k1, k2), n + 1 voters rank c1 > ... > cm and n
    voters rank c1 > ... > c_k1 > cm > ... > c_{k1+1}. M = {c1..ck} loses to
    S = {c1..c_{k1+k2}} plus the k - k1 - k2 last candidates once n exceeds
    (g(k) - g(k1 + k2)) / (rhs - lhs); the least such n is used.
    """
    k = g.k if k is None else k
    if k != g.k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    _check_witness_shape(m, k)
    check = fm_condition_check(g)
    if check.satisfies:
        return None
    majority = Committee(tuple(range(k)))

    if check.violation is None:
        # constant g: every committee ties at 0
        election = Election(default_labels(m), (tuple(range(m)),))
        return FmWitness(election, majority, Committee(tuple(range(k, 2 * k))), 0, k)

    k1, k2 = check.violation.k1, check.violation.k2
    gap = check.violation.rhs - check.violation.lhs
    n = math.floor((g(k) - g(k1 + k2)) / gap) + 1
    sincere = tuple(range(m))
    split = tuple(range(k1)) + tuple(range(m - 1, k1 - 1, -1))
    election = Election(default_labels(m), (sincere,) * (n + 1) + (split,) * n)
    beating = Committee(tuple(range(k1 + k2)) + tuple(range(m - (k - k1 - k2), m)))
    logger.debug(f"Counting witness with (k1, k2) = ({k1}, {k2}) and n = {n}")
    return FmWitness(election, majority, beating, n, k, violation=(k1, k2))


def top_sequence(t: int, k: int) -> PositionSequence:
    """I_t: t entries at the top, the rest just below position k."""
    return tuple(range(1, t + 1)) + tuple(range(k + 1, 2 * k - t + 1))


def bottom_sequence(t: int, m: int, k: int) -> PositionSequence:
    """J_t: t entries ending at position k, the rest at the bottom."""
    return tuple(range(k - t + 1, k + 1)) + tuple(range(m - (k - t) + 1, m + 1))


def _tabulated(evaluator: ScoringEvaluator, m: int, k: int) -> Tabulated:
    if not isinstance(evaluator, Tabulated):
        raise InvalidInputError("this analysis reads the scoring function pointwise; tabulate the evaluator first")
    if (evaluator.m, evaluator.k) != (m, k):
        raise InvalidInputError(f"evaluator is for m={evaluator.m} k={evaluator.k}, asked for m={m} k={k}")
    _check_witness_shape(m, k)
    return evaluator


def witness_general(evaluator: Tabulated, m: int, k: int) -> FmWitness | None:
    """
    Counterexample for a scoring function that is not top-k-counting shaped.

    For the first t with f(I_t) > f(J_t): n + 1 voters rank X > Y > Z > D and n
    voters rank Z > X > D > Y, with |X| = t and |Y| = |Z| = k - t. M = X + Y
    loses to N = X + Z for the least n above (f(I_k) - f(I_t)) / (f(I_t) - f(J_t)).
    """
    f = _tabulated(evaluator, m, k)
    for t in range(k + 1):
        upper, lower = f.score(top_sequence(t, k)), f.score(bottom_sequence(t, m, k))
        if upper > lower:
            break
    else:
        return None

    n = math.floor((f.score(top_sequence(k, k)) - upper) / (upper - lower)) + 1
    x, y = list(range(t)), list(range(t, k))
    z, d = list(range(k, 2 * k - t)), list(range(2 * k - t, m))
    first = tuple(x + y + z + d)
    second = tuple(z + x + d + y)
    election = Election(default_labels(m), (first,) * (n + 1) + (second,) * n)
    logger.debug(f"General witness with t = {t} and n = {n}")
    return FmWitness(election, Committee.of(x + y), Committee.of(x + z), n, k, t=t)


def induced_counting_function(evaluator: Tabulated) -> CountingFunction | None:
    """g(t) = f(I_t) - f(I_0) when f(I_t) = f(J_t) for every t, else None."""
    m, k = evaluator.m, evaluator.k
    f = _tabulated(evaluator, m, k)
    if any(f.score(top_sequence(t, k)) != f.score(bottom_sequence(t, m, k)) for t in range(k + 1)):
        return None
    base = f.score(top_sequence(0, k))
    return CountingFunction(tuple(f.score(top_sequence(t, k)) - base for t in range(k + 1)))


class CorollaryClass(enum.Enum):
    CONSTANT = "constant"
    CONVEX = "convex"
    CONCAVE_NONLINEAR = "concave-nonlinear"
    OTHER = "other"


@dataclass(frozen=True)
class CorollaryResult:
    classification: CorollaryClass
    # verdict implied by the shape alone, None when it does not decide
    expected: bool | None
    check: FmCheckResult


def corollary_check(g: CountingFunction) -> CorollaryResult:
    """Classify g by shape and confirm the implied verdict against the exact check."""
    check = fm_condition_check(g)
    if g.is_constant():
        classification, expected = CorollaryClass.CONSTANT, False
    elif is_convex(g):
        classification, expected = CorollaryClass.CONVEX, True
    elif is_concave(g):
        classification, expected = CorollaryClass.CONCAVE_NONLINEAR, False
    else:
        classification, expected = CorollaryClass.OTHER, None
    if expected is not None and expected != check.satisfies:
        raise InconsistentResultError(
            f"{g} is {classification.value} but the condition check says satisfies={check.satisfies}"
        )
    return CorollaryResult(classification, expected, check)


def counting_functions(k: int, max_value: int) -> Iterator[CountingFunction]:
    """Every nondecreasing integer g with g(0) = 0 and values up to max_value."""
    for tail in itertools.combinations_with_replacement(range(max_value + 1), k):
        yield CountingFunction((0, *tail))


def nonconvex_fm_functions(k: int, max_value: int) -> list[CountingFunction]:
    """Counting functions that satisfy the criterion without being convex."""
    return [g for g in counting_functions(k, max_value) if fm_condition_check(g).satisfies and not is_convex(g)]
