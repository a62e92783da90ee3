"""
Exact winner determination through the voter-subset partition.

Candidates are grouped by the exact set of voters ranking them among their top
k. All candidates of a group are interchangeable for a top-k-counting rule, so
a committee is described by how many members it takes from each group. This
gives the FPT-by-voters integer program and a grouped exact search that works
for any counting function.
"""

import itertools
import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .election import Committee, Election
from .errors import CapExceededError, InconsistentResultError, InvalidInputError, PreconditionError
from .limits import DEFAULT_LIMITS, Limits
from .scoring import CountingFunction, TopKCounting, is_concave
from .winners import WinnerResult, committee_scorer

logger = logging.getLogger(__name__)


def voter_mask(voters: Iterable[int]) -> int:
    """Bitmask with bit v set for every listed (0-based) voter."""
    mask = 0
    for v in voters:
        mask |= 1 << v
    return mask


def mask_voters(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


@dataclass(frozen=True)
class VoterSubsetPartition:
    """Candidates bucketed by the set of voters ranking them within the top k"""

    n: int
    k: int
    # voter bitmask -> candidates, only nonempty groups, ascending mask order
    groups: dict[int, tuple[int, ...]] = field(hash=False)
    # candidates no voter ranks within the top k
    inert: tuple[int, ...] = ()

    def group(self, voters: Iterable[int]) -> tuple[int, ...]:
        """T(S) for a set of voters, empty when no candidate has exactly that support."""
        return self.groups.get(voter_mask(voters), ())


def _group_candidates(election: Election, k: int) -> VoterSubsetPartition:
    masks = [0] * election.m
    for voter, vote in enumerate(election.votes):
        for c in vote[:k]:
            masks[c] |= 1 << voter
    groups: dict[int, list[int]] = {}
    for c, mask in enumerate(masks):
        if mask:
            groups.setdefault(mask, []).append(c)
    inert = tuple(c for c, mask in enumerate(masks) if not mask)
    ordered = {mask: tuple(groups[mask]) for mask in sorted(groups)}
    return VoterSubsetPartition(election.n, k, ordered, inert)


def build_voter_partition(election: Election, k: int, limits: Limits = DEFAULT_LIMITS) -> VoterSubsetPartition:
    if not 1 <= k <= election.m:
        raise InvalidInputError(f"committee size {k} outside 1..{election.m}")
    if election.n > limits.voter_cap:
        raise CapExceededError(
            f"{election.n} voters exceeds the voter cap {limits.voter_cap}",
            required=election.n,
            cap=limits.voter_cap,
        )
    partition = _group_candidates(election, k)
    logger.debug(f"Voter partition: {len(partition.groups)} groups, {len(partition.inert)} inert candidates")
    return partition


@dataclass(frozen=True)
class FptProgram:
    """
    Mixed integer program over the voter partition.

    Integer z_j counts the members taken from group j; z_inert counts members
    nobody ranks within the top k. x_i is the number of members voter i ranks
    within the top k and the relaxed x_{i,j} in [0, 1] sum to x_i. The
    objective is the sum of x_{i,j} times the j-th differential of g.
    """

    g: CountingFunction
    partition: VoterSubsetPartition

    def __post_init__(self):
        if self.g.k != self.partition.k:
            raise InvalidInputError(f"counting function is for k={self.g.k}, partition for k={self.partition.k}")

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(self.partition.groups)

    @property
    def upper_bounds(self) -> tuple[int, ...]:
        return tuple(len(candidates) for candidates in self.partition.groups.values())

    @property
    def inert_bound(self) -> int:
        return len(self.partition.inert)

    @property
    def objective_coefficients(self) -> tuple[Fraction, ...]:
        return self.g.differentials

    def is_feasible(self, z: Sequence[int], z_inert: int) -> bool:
        if len(z) != len(self.masks):
            return False
        within = all(0 <= value <= bound for value, bound in zip(z, self.upper_bounds, strict=True))
        return within and 0 <= z_inert <= self.inert_bound and sum(z) + z_inert == self.g.k

    def voter_counts(self, z: Sequence[int]) -> tuple[int, ...]:
        """x_i as the sum of z_j over the groups containing voter i."""
        counts = [0] * self.partition.n
        for mask, value in zip(self.masks, z, strict=True):
            for v in mask_voters(mask):
                counts[v] += value
        return tuple(counts)

    def objective(self, z: Sequence[int]) -> Fraction:
        """Objective value at integral z with the forced x_{i,j}."""
        return sum((self.g(x) for x in self.voter_counts(z)), Fraction(0))

    def relaxation(self, z: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
        """
        Optimal x_{i,j} for fixed z.

        For fixed x_i the program splits per voter into a continuous knapsack
        with unit capacities, solved exactly by filling the largest
        differentials first (lowest j on ties).
        """
        d = self.objective_coefficients
        order = sorted(range(self.g.k), key=lambda j: (-d[j], j))
        rows = []
        for x in self.voter_counts(z):
            row = [Fraction(0)] * self.g.k
            left = Fraction(x)
            for j in order:
                take = min(Fraction(1), left)
                if take <= 0:
                    break
                row[j] = take
                left -= take
            rows.append(tuple(row))
        return tuple(rows)

    def to_lp(self, election: Election | None = None) -> str:
        """
        CPLEX LP text of the program.

        Objective coefficients are multiplied by the least common multiple of
        their denominators so the file holds integers only.
        """
        n, k = self.partition.n, self.g.k
        d = self.objective_coefficients
        scale = math.lcm(*(value.denominator for value in d))
        lines = [f"\\ FPT-by-voters program, objective scaled by {scale}"]
        for j, (mask, candidates) in enumerate(self.partition.groups.items(), start=1):
            voters = ",".join(str(v + 1) for v in mask_voters(mask))
            names = ",".join(election.candidates[c] for c in candidates) if election else ",".join(map(str, candidates))
            lines.append(f"\\ z_{j}: voters {{{voters}}} candidates {{{names}}}")

        lines.append("Maximize")
        terms = [f"{int(d[j - 1] * scale)} x_{i}_{j}" for i in range(1, n + 1) for j in range(1, k + 1)]
        lines.append(" obj: " + " + ".join(terms))

        lines.append("Subject To")
        z_names = [f"z_{j}" for j in range(1, len(self.masks) + 1)] + ["z_inert"]
        lines.append(" a: " + " + ".join(z_names) + f" = {k}")
        for i in range(1, n + 1):
            containing = [f"z_{j}" for j, mask in enumerate(self.masks, start=1) if mask >> (i - 1) & 1]
            lines.append(f" b_{i}: x_{i}" + "".join(f" - {name}" for name in containing) + " = 0")
        for i in range(1, n + 1):
            lines.append(f" c_{i}: " + " + ".join(f"x_{i}_{j}" for j in range(1, k + 1)) + f" - x_{i} = 0")

        lines.append("Bounds")
        for i in range(1, n + 1):
            for j in range(1, k + 1):
                lines.append(f" 0 <= x_{i}_{j} <= 1")
        for j, bound in enumerate(self.upper_bounds, start=1):
            lines.append(f" 0 <= z_{j} <= {bound}")
        lines.append(f" 0 <= z_inert <= {self.inert_bound}")

        lines.append("General")
        lines.append(" " + " ".join(z_names + [f"x_{i}" for i in range(1, n + 1)]))
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class FptSolution:
    best: Fraction
    # every optimal z, each followed by its z_inert
    optima: list[tuple[int, ...]]
    nodes: int = 0


def solve_fpt_program(program: FptProgram) -> FptSolution:
    """
    Depth-first branch-and-bound over integral z for a concave counting function.

    For integral z the relaxed variables are forced, so the objective is the
    sum of g(x_i). The bound adds the r largest current per-candidate marginal
    gains for r open seats; concavity makes marginal gains shrink as the
    committee grows. Nodes are pruned only when the bound is strictly below
    the incumbent so that every optimal z is found.
    """
    g = program.g
    if not is_concave(g):
        raise PreconditionError(f"the FPT-by-voters solver needs a concave counting function, got {g}")
    k = g.k
    masks = program.masks
    bounds = program.upper_bounds
    members = [mask_voters(mask) for mask in masks]
    suffix_capacity = list(itertools.accumulate(reversed(bounds), initial=0))[::-1]
    counts = [0] * program.partition.n
    choice = [0] * len(masks)
    solution = FptSolution(Fraction(-1), [])

    def marginal(voters: Sequence[int]) -> Fraction:
        return sum((g(counts[v] + 1) - g(counts[v]) for v in voters if counts[v] < k), Fraction(0))

    def search(index: int, remaining: int, value: Fraction):
        solution.nodes += 1
        if remaining > suffix_capacity[index] + program.inert_bound:
            return
        if index == len(masks):
            if value > solution.best:
                solution.best, solution.optima = value, [(*choice, remaining)]
            elif value == solution.best:
                solution.optima.append((*choice, remaining))
            return

        weights = sorted(
            ((marginal(members[j]), bounds[j]) for j in range(index, len(masks))),
            key=lambda item: item[0],
            reverse=True,
        )
        bound, seats = value, remaining
        for weight, size in weights:
            if seats == 0 or weight <= 0:
                break
            take = min(seats, size)
            bound += weight * take
            seats -= take
        if bound < solution.best:
            return

        for amount in range(min(bounds[index], remaining), -1, -1):
            gained = Fraction(0)
            for v in members[index]:
                gained += g(counts[v] + amount) - g(counts[v])
                counts[v] += amount
            choice[index] = amount
            search(index + 1, remaining - amount, value + gained)
            for v in members[index]:
                counts[v] -= amount
        choice[index] = 0

    search(0, k, Fraction(0))
    logger.debug(f"Branch-and-bound visited {solution.nodes} nodes, {len(solution.optima)} optimal z vectors")
    return solution


def _lowest_committee(partition: VoterSubsetPartition, z: Sequence[int]) -> tuple[int, ...]:
    chosen = []
    for candidates, amount in zip(partition.groups.values(), z[:-1], strict=True):
        chosen.extend(candidates[:amount])
    chosen.extend(partition.inert[: z[-1]])
    return tuple(sorted(chosen))


def _expand(partition: VoterSubsetPartition, z: Sequence[int]) -> Iterable[tuple[int, ...]]:
    pools = [*partition.groups.values(), partition.inert]
    choices = [itertools.combinations(pool, amount) for pool, amount in zip(pools, z, strict=True)]
    for parts in itertools.product(*choices):
        yield tuple(sorted(itertools.chain.from_iterable(parts)))


def is_prefix_solution(rows: Sequence[Sequence[Fraction]], counts: Sequence[int]) -> bool:
    """True iff every x_{i,j} is 0 or 1 and equals 1 exactly for j <= x_i."""
    return all(
        all(value == (1 if j < x else 0) for j, value in enumerate(row)) for row, x in zip(rows, counts, strict=True)
    )


def fpt_voters_winners(
    g: CountingFunction, election: Election, k: int, limits: Limits = DEFAULT_LIMITS
) -> WinnerResult:
    """Exact winners for a concave counting function, exponential only in the number of voters."""
    if g.k != k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    if not is_concave(g):
        raise PreconditionError(f"fpt-voters needs a concave counting function, got {g}")
    partition = build_voter_partition(election, k, limits)
    program = FptProgram(g, partition)
    solution = solve_fpt_program(program)

    for z in solution.optima:
        counts = program.voter_counts(z[:-1])
        if not is_prefix_solution(program.relaxation(z[:-1]), counts):
            raise InconsistentResultError(f"relaxed variables are not integral at optimum z={z}")

    canonical = min(_lowest_committee(partition, z) for z in solution.optima)
    scored = committee_scorer(TopKCounting(g, election.m), election)(canonical)
    if scored != solution.best:
        raise InconsistentResultError(f"program optimum {solution.best} but committee scores {scored}")

    winners: set[tuple[int, ...]] = set()
    for z in solution.optima:
        for members in _expand(partition, z):
            winners.add(members)
            if len(winners) > limits.tie_cap:
                break
        if len(winners) > limits.tie_cap:
            logger.warning(f"fpt-voters: more than {limits.tie_cap} tied committees, keeping the canonical one")
            return WinnerResult((Committee(canonical),), solution.best, "fpt-voters", True, True)
    return WinnerResult(tuple(Committee(w) for w in sorted(winners)), solution.best, "fpt-voters")


def _private_gain_table(g: CountingFunction, x: int, capacity: int, voters: int, budget: int) -> list:
    """Best gain from spreading b private picks over identical voters, for every b up to budget."""
    gains = [g(x + y) - g(x) for y in range(min(capacity, g.k - x) + 1)]
    best: list[Fraction | None] = [Fraction(0)] + [None] * budget
    for _ in range(min(voters, budget)):
        step: list[Fraction | None] = list(best)
        for b in range(1, budget + 1):
            for y in range(1, min(len(gains) - 1, b) + 1):
                if best[b - y] is not None and (step[b] is None or best[b - y] + gains[y] > step[b]):
                    step[b] = best[b - y] + gains[y]
        best = step
    return best


def _combine(first: list, second: list) -> list:
    budget = len(first) - 1
    out: list[Fraction | None] = [None] * (budget + 1)
    for a, left in enumerate(first):
        if left is None:
            continue
        for b in range(budget - a + 1):
            right = second[b]
            if right is not None and (out[a + b] is None or left + right > out[a + b]):
                out[a + b] = left + right
    return out


def grouped_exact_winners(
    g: CountingFunction, election: Election, k: int, limits: Limits = DEFAULT_LIMITS
) -> WinnerResult:
    """
    Optimal score and one optimal committee for any counting function.

    Groups supported by two or more voters are searched depth-first with an
    admissible bound; members supported by a single voter are then assigned
    exactly by a bounded knapsack over classes of voters sharing the same
    current count and number of private candidates. The tie set is not
    enumerated, so the result is always marked truncated.
    """
    if g.k != k:
        raise InvalidInputError(f"counting function is for k={g.k}, asked for k={k}")
    if not 1 <= k <= election.m:
        raise InvalidInputError(f"committee size {k} outside 1..{election.m}")
    partition = _group_candidates(election, k)
    shared = sorted(
        ((mask, candidates) for mask, candidates in partition.groups.items() if mask.bit_count() > 1),
        key=lambda item: (-item[0].bit_count(), item[0]),
    )
    private = [0] * election.n
    private_candidates: list[tuple[int, ...]] = [()] * election.n
    for mask, candidates in partition.groups.items():
        if mask.bit_count() == 1:
            voter = mask.bit_length() - 1
            private[voter] = len(candidates)
            private_candidates[voter] = candidates
    inert = len(partition.inert)
    members = [mask_voters(mask) for mask, _ in shared]
    sizes = [len(candidates) for _, candidates in shared]
    suffix_capacity = list(itertools.accumulate(reversed(sizes), initial=0))[::-1]
    private_total = sum(private)
    d = (Fraction(0), *g.differentials)

    counts = [0] * election.n
    choice = [0] * len(shared)
    best: list = [Fraction(-1), None]
    memo: dict = {}
    nodes = 0

    def reach(v: int, seats: int) -> Fraction:
        top = min(k, counts[v] + seats)
        return max(d[counts[v] + 1 : top + 1], default=Fraction(0))

    def private_value(seats: int) -> Fraction | None:
        classes = Counter((counts[v], private[v]) for v in range(election.n) if private[v])
        key = (frozenset(classes.items()), seats)
        if key not in memo:
            total: list[Fraction | None] = [Fraction(0)] + [None] * seats
            for (x, capacity), voters in sorted(classes.items()):
                total = _combine(total, _private_gain_table(g, x, capacity, voters, seats))
            feasible = [value for b, value in enumerate(total) if value is not None and b >= seats - inert]
            memo[key] = max(feasible) if feasible else None
        return memo[key]

    def search(index: int, seats: int, value: Fraction):
        nonlocal nodes
        nodes += 1
        if seats > suffix_capacity[index] + private_total + inert:
            return
        if index == len(shared):
            extra = private_value(seats)
            if extra is not None and value + extra > best[0]:
                best[0], best[1] = value + extra, (tuple(choice), tuple(counts))
            return

        weights = [
            (sum((reach(v, seats) for v in members[j]), Fraction(0)), sizes[j]) for j in range(index, len(shared))
        ]
        weights.extend((reach(v, seats), private[v]) for v in range(election.n) if private[v])
        weights.sort(key=lambda item: item[0], reverse=True)
        bound, open_seats = value, seats
        for weight, size in weights:
            if open_seats == 0 or weight <= 0:
                break
            take = min(open_seats, size)
            bound += weight * take
            open_seats -= take
        if bound <= best[0]:
            return

        for amount in range(min(sizes[index], seats), -1, -1):
            gained = Fraction(0)
            for v in members[index]:
                gained += g(counts[v] + amount) - g(counts[v])
                counts[v] += amount
            choice[index] = amount
            search(index + 1, seats - amount, value + gained)
            for v in members[index]:
                counts[v] -= amount
        choice[index] = 0

    search(0, k, Fraction(0))
    if best[1] is None:
        raise InconsistentResultError("grouped search found no feasible committee")
    shared_choice, leaf_counts = best[1]
    logger.debug(f"Grouped search visited {nodes} nodes, optimum {best[0]}")

    chosen: list[int] = []
    for (_, candidates), amount in zip(shared, shared_choice, strict=True):
        chosen.extend(candidates[:amount])
    seats = k - len(chosen)
    picks = _assign_private(g, leaf_counts, private, seats, inert)
    for v, amount in enumerate(picks):
        chosen.extend(private_candidates[v][:amount])
    chosen.extend(partition.inert[: seats - sum(picks)])

    committee = Committee.of(chosen)
    scored = committee_scorer(TopKCounting(g, election.m), election)(committee.members)
    if scored != best[0] or committee.k != k:
        raise InconsistentResultError(f"grouped optimum {best[0]} but reconstructed committee scores {scored}")
    return WinnerResult((committee,), best[0], "grouped", True, True)


def _assign_private(
    g: CountingFunction, counts: Sequence[int], private: Sequence[int], seats: int, inert: int
) -> list[int]:
    """Per-voter private picks realising the knapsack optimum."""
    voters = [v for v in range(len(private)) if private[v]]
    # table[i][b]: best gain of voters[i:] using exactly b picks
    table: list[list[Fraction | None]] = [[None] * (seats + 1) for _ in range(len(voters) + 1)]
    table[len(voters)][0] = Fraction(0)
    for i in range(len(voters) - 1, -1, -1):
        v = voters[i]
        top = min(private[v], g.k - counts[v])
        for b in range(seats + 1):
            for y in range(min(top, b) + 1):
                rest = table[i + 1][b - y]
                if rest is None:
                    continue
                candidate = rest + g(counts[v] + y) - g(counts[v])
                if table[i][b] is None or candidate > table[i][b]:
                    table[i][b] = candidate

    budgets = [b for b in range(max(0, seats - inert), seats + 1) if table[0][b] is not None]
    budget = max(budgets, key=lambda b: (table[0][b], -b))
    picks = [0] * len(private)
    for i, v in enumerate(voters):
        top = min(private[v], g.k - counts[v])
        for y in range(min(top, budget) + 1):
            rest = table[i + 1][budget - y]
            if rest is not None and rest + g(counts[v] + y) - g(counts[v]) == table[i][budget]:
                picks[v] = y
                budget -= y
                break
    return picks
