"""
Winner determination.

Exact brute force over all committees plus the polynomial special cases:
weakly separable rules, Perfectionist and rules close to it, and the greedy
approximation for concave counting functions.
"""

import itertools
import logging
import math
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .election import Committee, Election
from .errors import CapExceededError, InvalidInputError, PreconditionError
from .limits import DEFAULT_LIMITS, Limits
from .scoring import (
    INFINITE,
    CountingFunction,
    ScoringEvaluator,
    SingleWinnerScoring,
    TopKCounting,
    approval,
    builtin,
    is_concave,
    singularity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WinnerResult:
    """Tied optimal committees with their common score"""

    winners: tuple[Committee, ...]
    best_score: Fraction
    algorithm: str
    exact: bool = True
    # True when the tie set was cut down to its lexicographically least committee
    truncated: bool = False

    def __post_init__(self):
        if not self.winners:
            raise InvalidInputError("a winner result needs at least one committee")

    @property
    def winner(self) -> Committee:
        """Canonical (lexicographically least) winner."""
        return self.winners[0]

    def relabel(self, algorithm: str) -> "WinnerResult":
        return WinnerResult(self.winners, self.best_score, algorithm, self.exact, self.truncated)


def _check_rule(evaluator: ScoringEvaluator, election: Election, k: int):
    if evaluator.k != k:
        raise InvalidInputError(f"rule configured for k={evaluator.k}, asked for k={k}")
    if evaluator.m != election.m:
        raise InvalidInputError(f"rule configured for m={evaluator.m} but the election has {election.m} candidates")


def _check_size(election: Election, k: int):
    if not 1 <= k <= election.m:
        raise InvalidInputError(f"committee size {k} outside 1..{election.m}")


def _tie_result(
    members: Iterable[tuple[int, ...]], best: Fraction, algorithm: str, limits: Limits, exact: bool = True
) -> WinnerResult:
    """Sort and cap a tie set."""
    winners = sorted(set(members))
    truncated = len(winners) > limits.tie_cap
    if truncated:
        logger.warning(f"{algorithm}: {len(winners)} tied committees, keeping the canonical one")
        winners = winners[:1]
    return WinnerResult(tuple(Committee(w) for w in winners), best, algorithm, exact, truncated)


def committee_scorer(evaluator: ScoringEvaluator, election: Election) -> Callable[[Sequence[int]], Fraction]:
    """
    Return a function scoring sorted member tuples.

    Top-k-counting rules are scored from per-voter top-k bitmasks; every other
    rule goes through the position table.
    """
    if isinstance(evaluator, TopKCounting):
        g = evaluator.g.g
        k = evaluator.k
        masks = [sum(1 << c for c in vote[:k]) for vote in election.votes]

        def score_top_k(members: Sequence[int]) -> Fraction:
            committee_mask = 0
            for c in members:
                committee_mask |= 1 << c
            counts = Counter((mask & committee_mask).bit_count() for mask in masks)
            return sum((g[x] * count for x, count in counts.items()), Fraction(0))

        return score_top_k

    table = election.position_table
    score = evaluator.score

    def score_positions(members: Sequence[int]) -> Fraction:
        return sum((score(tuple(sorted(row[c] for c in members))) for row in table), Fraction(0))

    return score_positions


def _score_block(
    evaluator: ScoringEvaluator, election: Election, k: int, first: int, tie_cap: int
) -> tuple[Fraction | None, list[tuple[int, ...]], int]:
    """Best score, capped ties and tie count among committees whose least member is ``first``."""
    scorer = committee_scorer(evaluator, election)
    best: Fraction | None = None
    ties: list[tuple[int, ...]] = []
    tie_count = 0
    for rest in itertools.combinations(range(first + 1, election.m), k - 1):
        members = (first, *rest)
        value = scorer(members)
        if best is None or value > best:
            best, ties, tie_count = value, [members], 1
        elif value == best:
            tie_count += 1
            if len(ties) < tie_cap:
                ties.append(members)
    return best, ties, tie_count


def brute_force_winners(
    evaluator: ScoringEvaluator, election: Election, k: int, limits: Limits = DEFAULT_LIMITS
) -> WinnerResult:
    """
    Score every size-k committee in lexicographic order.

    With ``limits.workers > 1`` the committees are split by their least member
    and scored in worker processes; blocks are merged in order, so the result
    equals the sequential one.
    """
    _check_size(election, k)
    _check_rule(evaluator, election, k)
    total = math.comb(election.m, k)
    if total > limits.enumeration_cap:
        raise CapExceededError(
            f"C({election.m},{k}) = {total} committees exceeds the enumeration cap {limits.enumeration_cap}",
            required=total,
            cap=limits.enumeration_cap,
        )

    firsts = range(election.m - k + 1)
    if limits.workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=limits.workers) as executor:
            blocks = list(
                executor.map(
                    _score_block,
                    itertools.repeat(evaluator),
                    itertools.repeat(election),
                    itertools.repeat(k),
                    firsts,
                    itertools.repeat(limits.tie_cap + 1),
                )
            )
    else:
        blocks = [_score_block(evaluator, election, k, first, limits.tie_cap + 1) for first in firsts]

    best = max(block_best for block_best, _, _ in blocks if block_best is not None)
    ties: list[tuple[int, ...]] = []
    tie_count = 0
    for block_best, block_ties, block_count in blocks:
        if block_best == best:
            tie_count += block_count
            ties.extend(block_ties[: limits.tie_cap + 1 - len(ties)])
    logger.debug(f"Brute force scored {total} committees, {tie_count} tied at {best}")

    truncated = tie_count > limits.tie_cap
    if truncated:
        logger.warning(f"brute-force: {tie_count} tied committees, keeping the canonical one")
        ties = ties[:1]
    return WinnerResult(tuple(Committee(t) for t in ties), best, "brute-force", True, truncated)


def all_committees_tie(election: Election, k: int, algorithm: str, limits: Limits = DEFAULT_LIMITS) -> WinnerResult:
    """Every committee scores 0."""
    total = math.comb(election.m, k)
    if total > limits.tie_cap:
        return WinnerResult((Committee(tuple(range(k))),), Fraction(0), algorithm, True, True)
    return _tie_result(itertools.combinations(range(election.m), k), Fraction(0), algorithm, limits)


def candidate_scores(gamma: SingleWinnerScoring, election: Election) -> tuple[Fraction, ...]:
    """Single-winner score of every candidate."""
    if gamma.m != election.m:
        raise InvalidInputError(f"single-winner scores for m={gamma.m} but the election has {election.m} candidates")
    totals = [Fraction(0)] * election.m
    for row in election.position_table:
        for c, position in enumerate(row):
            totals[c] += gamma(position)
    return tuple(totals)


def separable_winners(
    gamma: SingleWinnerScoring, election: Election, k: int, limits: Limits = DEFAULT_LIMITS
) -> WinnerResult:
    """The k individually best candidates, with every way of breaking the boundary tie."""
    _check_size(election, k)
    scores = candidate_scores(gamma, election)
    threshold = sorted(scores, reverse=True)[k - 1]
    above = [c for c in range(election.m) if scores[c] > threshold]
    boundary = [c for c in range(election.m) if scores[c] == threshold]
    needed = k - len(above)
    best = sum((scores[c] for c in above), Fraction(0)) + needed * threshold

    count = math.comb(len(boundary), needed)
    if count > limits.tie_cap:
        logger.warning(f"separable: {count} tied committees, keeping the canonical one")
        canonical = Committee.of(above + boundary[:needed])
        return WinnerResult((canonical,), best, "separable", True, True)
    winners = sorted(Committee.of(above + list(chosen)) for chosen in itertools.combinations(boundary, needed))
    return WinnerResult(tuple(winners), best, "separable", True, False)


def perfectionist_winners(election: Election, k: int, limits: Limits = DEFAULT_LIMITS) -> WinnerResult:
    """Only the voters' top-k sets can score, one point per voter naming them."""
    _check_size(election, k)
    prefixes = Counter(tuple(sorted(vote[:k])) for vote in election.votes)
    best = max(prefixes.values())
    return _tie_result(
        (members for members, count in prefixes.items() if count == best), Fraction(best), "perfectionist", limits
    )


def near_perfectionist_winners(
    g: CountingFunction, election: Election, k: int, q: int, limits: Limits = DEFAULT_LIMITS
) -> WinnerResult:
    """
    Exact winners for counting functions whose singularity is within q of k.

    An optimal committee either holds at least sing(g) members of some voter's
    top k (all such committees are enumerated) or scores like Bloc scaled by
    g(1) (the Bloc winners are scored with g). When neither bound settles the
    optimum, the rule is solved by brute force.
    """
    _check_size(election, k)
    if g.k != k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    if q < 0:
        raise InvalidInputError(f"q must be nonnegative, got {q}")
    algorithm = "near-perfectionist"
    evaluator = TopKCounting(g, election.m)

    if g.is_constant():
        return all_committees_tie(election, k, algorithm, limits)
    sing = INFINITE if g.is_linear() else singularity(g)
    if sing is INFINITE:
        return separable_winners(approval(k, election.m).scaled(g(1)), election, k, limits).relabel(algorithm)
    if k - sing > q:
        raise PreconditionError(f"k - sing(g) = {k - sing} exceeds q = {q}")
    if 2 * q >= k:
        logger.debug(f"q = {q} is at least k/2, using brute force")
        return brute_force_winners(evaluator, election, k, limits).relabel(algorithm)

    outside = election.m - k
    per_voter = sum(math.comb(k, t) * math.comb(outside, k - t) for t in range(sing, k + 1))
    if per_voter * election.n > limits.enumeration_cap:
        raise CapExceededError(
            f"near-perfectionist enumeration of {per_voter * election.n} committees exceeds the cap",
            required=per_voter * election.n,
            cap=limits.enumeration_cap,
        )

    committees: set[tuple[int, ...]] = set()
    for vote in election.votes:
        top = vote[:k]
        rest = sorted(vote[k:])
        for t in range(sing, k + 1):
            for inside in itertools.combinations(top, t):
                for extra in itertools.combinations(rest, k - t):
                    committees.add(tuple(sorted(inside + extra)))

    bloc = separable_winners(approval(k, election.m), election, k, limits)
    committees.update(w.members for w in bloc.winners)
    logger.debug(f"near-perfectionist: {len(committees)} candidate committees (sing={sing})")

    scorer = committee_scorer(evaluator, election)
    scored = {members: scorer(members) for members in committees}
    best = max(scored.values())
    if best < g(1) * bloc.best_score or bloc.truncated:
        logger.warning("near-perfectionist bounds inconclusive, falling back to brute force")
        return brute_force_winners(evaluator, election, k, limits).relabel(algorithm)
    return _tie_result((members for members, value in scored.items() if value == best), best, algorithm, limits)


def sntv_perfectionist_winners(election: Election, k: int, limits: Limits = DEFAULT_LIMITS) -> WinnerResult:
    """
    Winners of SNTV plus Perfectionist.

    A committee that is nobody's top-k set scores its SNTV score only, so the
    optimum is among the SNTV winners and the voters' top-k sets.
    """
    _check_size(election, k)
    evaluator = builtin("sntv-perfectionist", election.m, k)
    sntv = separable_winners(approval(1, election.m), election, k, limits)
    if sntv.truncated:
        logger.warning("SNTV tie set truncated, using brute force")
        return brute_force_winners(evaluator, election, k, limits).relabel("sntv-perfectionist")
    committees = {w.members for w in sntv.winners}
    committees.update(tuple(sorted(vote[:k])) for vote in election.votes)
    scorer = committee_scorer(evaluator, election)
    scored = {members: scorer(members) for members in committees}
    best = max(scored.values())
    return _tie_result(
        (members for members, value in scored.items() if value == best), best, "sntv-perfectionist", limits
    )


def greedy_concave(g: CountingFunction, election: Election, k: int) -> WinnerResult:
    """
    Greedy committee for a concave counting function.

    Adds k times the candidate of largest marginal gain, lowest index first on
    ties. The objective is submodular, so the score is at least (1 - 1/e) of
    the optimum.
    """
    _check_size(election, k)
    if g.k != k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    if not is_concave(g):
        raise PreconditionError(f"greedy needs a concave counting function, got {g}")

    supporters: list[list[int]] = [[] for _ in range(election.m)]
    for voter, vote in enumerate(election.votes):
        for c in vote[:k]:
            supporters[c].append(voter)

    counts = [0] * election.n
    chosen: list[int] = []
    total = Fraction(0)
    for _ in range(k):
        best_candidate, best_gain = -1, Fraction(-1)
        for c in range(election.m):
            if c in chosen:
                continue
            gain = sum((g(counts[v] + 1) - g(counts[v]) for v in supporters[c]), Fraction(0))
            if gain > best_gain:
                best_candidate, best_gain = c, gain
        chosen.append(best_candidate)
        total += best_gain
        for v in supporters[best_candidate]:
            counts[v] += 1
    logger.debug(f"Greedy picked {chosen} in order, score {total}")
    return WinnerResult((Committee.of(chosen),), total, "greedy", exact=False)


def best_committee_at_least(
    evaluator: ScoringEvaluator, election: Election, k: int, threshold, limits: Limits = DEFAULT_LIMITS
) -> Committee | None:
    """First committee in lexicographic order scoring at least the threshold, by enumeration."""
    _check_size(election, k)
    _check_rule(evaluator, election, k)
    total = math.comb(election.m, k)
    if total > limits.enumeration_cap:
        raise CapExceededError(
            f"C({election.m},{k}) = {total} committees exceeds the enumeration cap {limits.enumeration_cap}",
            required=total,
            cap=limits.enumeration_cap,
        )
    scorer = committee_scorer(evaluator, election)
    for members in itertools.combinations(range(election.m), k):
        if scorer(members) >= threshold:
            return Committee(members)
    return None

