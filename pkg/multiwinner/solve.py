"""Algorithm selection and dispatch for winner determination."""

import logging
import math

from .election import Election
from .errors import CapExceededError, InvalidInputError, PreconditionError
from .limits import DEFAULT_LIMITS, Limits
from .partition import fpt_voters_winners, grouped_exact_winners
from .scoring import (
    INFINITE,
    CountingFunction,
    ScoringEvaluator,
    builtin,
    counting_function_of,
    is_concave,
    separable_gamma_of,
    singularity,
    to_fraction,
)
from .winners import (
    WinnerResult,
    best_committee_at_least,
    brute_force_winners,
    greedy_concave,
    near_perfectionist_winners,
    perfectionist_winners,
    separable_winners,
    sntv_perfectionist_winners,
)

logger = logging.getLogger(__name__)

ALGORITHMS = (
    "auto",
    "brute",
    "separable",
    "perfectionist",
    "near-perfectionist",
    "sntv-perfectionist",
    "greedy",
    "fpt-voters",
    "grouped",
)

# auto-selection thresholds
AUTO_NEAR_PERFECTIONIST_Q = 2
AUTO_FPT_MAX_VOTERS = 14


def _singularity(g: CountingFunction):
    return INFINITE if g.is_linear() else singularity(g)


def is_perfectionist_shaped(g: CountingFunction) -> bool:
    """g is zero below k and positive at k."""
    return g(g.k) > 0 and all(v == 0 for v in g.g[:-1])


def _is_sntv_perfectionist(evaluator: ScoringEvaluator) -> bool:
    return evaluator == builtin("sntv-perfectionist", evaluator.m, evaluator.k)


def choose_algorithm(evaluator: ScoringEvaluator, election: Election, k: int) -> str:
    """
    Pick the cheapest exact algorithm the rule admits.

    Weakly separable rules are separable, then Perfectionist, then rules with
    k - sing(g) <= 2, then concave rules (FPT by voters for up to 14 voters,
    greedy beyond), and brute force for everything else.
    """
    if separable_gamma_of(evaluator) is not None:
        return "separable"
    if _is_sntv_perfectionist(evaluator):
        return "sntv-perfectionist"
    g = counting_function_of(evaluator)
    if g is None:
        return "brute"
    if is_perfectionist_shaped(g):
        return "perfectionist"
    sing = _singularity(g)
    if not g.is_constant() and sing is not INFINITE and k - sing <= AUTO_NEAR_PERFECTIONIST_Q:
        return "near-perfectionist"
    if is_concave(g):
        return "fpt-voters" if election.n <= AUTO_FPT_MAX_VOTERS else "greedy"
    return "brute"


def _counting_function(evaluator: ScoringEvaluator, algorithm: str) -> CountingFunction:
    g = counting_function_of(evaluator)
    if g is None:
        raise PreconditionError(f"{algorithm} needs a top-k-counting rule")
    return g


def compute_winners(
    evaluator: ScoringEvaluator,
    election: Election,
    k: int,
    algorithm: str = "auto",
    q: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> WinnerResult:
    """Winners of the rule with the named algorithm, or the auto-selected one."""
    if evaluator.k != k or evaluator.m != election.m:
        raise InvalidInputError(
            f"rule configured for m={evaluator.m} k={evaluator.k}, election has m={election.m} and k={k}"
        )
    if algorithm == "auto":
        algorithm = choose_algorithm(evaluator, election, k)
        if algorithm == "near-perfectionist" and q is None:
            q = AUTO_NEAR_PERFECTIONIST_Q
        logger.debug(f"Auto-selected algorithm {algorithm}")

    match algorithm:
        case "brute":
            return brute_force_winners(evaluator, election, k, limits)
        case "separable":
            gamma = separable_gamma_of(evaluator)
            if gamma is None:
                raise PreconditionError("separable needs a weakly separable rule")
            return separable_winners(gamma, election, k, limits)
        case "perfectionist":
            g = _counting_function(evaluator, algorithm)
            if not is_perfectionist_shaped(g):
                raise PreconditionError(f"perfectionist needs g zero below k, got {g}")
            result = perfectionist_winners(election, k, limits)
            return WinnerResult(
                result.winners, result.best_score * g(k), result.algorithm, result.exact, result.truncated
            )
        case "near-perfectionist":
            g = _counting_function(evaluator, algorithm)
            if q is None:
                sing = INFINITE if g.is_constant() else _singularity(g)
                q = 0 if sing is INFINITE else k - sing
            return near_perfectionist_winners(g, election, k, q, limits)
        case "sntv-perfectionist":
            if not _is_sntv_perfectionist(evaluator):
                raise PreconditionError("sntv-perfectionist needs the SNTV plus Perfectionist rule")
            return sntv_perfectionist_winners(election, k, limits)
        case "greedy":
            return greedy_concave(_counting_function(evaluator, algorithm), election, k)
        case "fpt-voters":
            return fpt_voters_winners(_counting_function(evaluator, algorithm), election, k, limits)
        case "grouped":
            return grouped_exact_winners(_counting_function(evaluator, algorithm), election, k, limits)
        case _:
            raise InvalidInputError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def exists_committee_with_score(
    evaluator: ScoringEvaluator, election: Election, k: int, threshold, limits: Limits = DEFAULT_LIMITS
) -> bool:
    """
    True iff some size-k committee scores at least the threshold.

    Enumerates committees within the brute-force cap; beyond it top-k-counting
    rules are decided by the grouped exact search.
    """
    threshold = to_fraction(threshold)
    if math.comb(election.m, k) <= limits.enumeration_cap:
        return best_committee_at_least(evaluator, election, k, threshold, limits) is not None
    g = counting_function_of(evaluator)
    if g is None:
        total = math.comb(election.m, k)
        raise CapExceededError(
            f"C({election.m},{k}) = {total} committees exceeds the enumeration cap {limits.enumeration_cap}",
            required=total,
            cap=limits.enumeration_cap,
        )
    logger.debug("Committee space beyond the cap, deciding by grouped search")
    return grouped_exact_winners(g, election, k, limits).best_score >= threshold
