"""
Instance generators.

Random elections (impartial culture and planted fixed majorities) driven by
SplitMix64, and the hardness reductions from exact cover by 3-sets and from
clique on regular graphs.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .election import Committee, Election, default_labels
from .errors import InvalidInputError, PreconditionError
from .prng import SplitMix64
from .scoring import (
    INFINITE,
    CountingFunction,
    ScoringEvaluator,
    TopKCounting,
    builtin,
    is_convex,
    singularity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class X3cInstance:
    """Universe {1..3q} and a family of 3-element subsets"""

    universe_size: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.universe_size < 3 or self.universe_size % 3:
            raise InvalidInputError(f"universe size must be a positive multiple of 3, got {self.universe_size}")
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for s in self.sets:
            if len(s) != 3 or not all(1 <= e <= self.universe_size for e in s):
                raise InvalidInputError(f"set {sorted(s)} is not a 3-subset of 1..{self.universe_size}")
        crowded = [e for e, count in self.frequencies().items() if count > 3]
        if crowded:
            raise InvalidInputError(f"elements {crowded} appear in more than 3 sets")

    @property
    def cover_size(self) -> int:
        return self.universe_size // 3

    def frequencies(self) -> Counter:
        counts = Counter({e: 0 for e in range(1, self.universe_size + 1)})
        for s in self.sets:
            counts.update(s)
        return counts

    def has_exact_cover(self) -> bool:
        """Brute-force check, for small instances."""
        universe = frozenset(range(1, self.universe_size + 1))
        for chosen in itertools.combinations(self.sets, self.cover_size):
            if frozenset().union(*chosen) == universe:
                return True
        return False


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidInputError("a graph needs at least one vertex")
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidInputError(f"edge ({u}, {v}) leaves 0..{self.vertex_count - 1}")
            normalized.append((min(u, v), max(u, v)))
        if len(set(normalized)) != len(normalized):
            raise InvalidInputError("duplicate edge")
        object.__setattr__(self, "edges", tuple(normalized))

    def degrees(self) -> tuple[int, ...]:
        counts = [0] * self.vertex_count
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        return tuple(counts)

    def regular_degree(self) -> int | None:
        degrees = set(self.degrees())
        return degrees.pop() if len(degrees) == 1 else None

    def has_clique(self, h: int) -> bool:
        """Brute-force check, for small graphs."""
        edges = set(self.edges)
        return any(
            all(pair in edges for pair in itertools.combinations(vertices, 2))
            for vertices in itertools.combinations(range(self.vertex_count), h)
        )


@dataclass(frozen=True)
class ReductionInstance:
    """A committee election with a score threshold; yes iff some committee reaches it"""

    election: Election
    k: int
    target: Fraction
    rule: ScoringEvaluator
    # X3C instance with an element that no set contains
    vacuous: bool = False
    # counting function after normalisation, for the clique reduction
    g: CountingFunction | None = None


def gen_impartial_culture(m: int, n: int, seed: int) -> Election:
    """n independent uniform votes over m candidates."""
    if m < 1 or n < 1:
        raise InvalidInputError(f"need m >= 1 and n >= 1, got m={m} n={n}")
    rng = SplitMix64(seed)
    votes = tuple(rng.permutation(m) for _ in range(n))
    return Election(default_labels(m), votes)


def gen_fixed_majority_profile(m: int, n: int, k: int, seed: int) -> tuple[Election, Committee]:
    """
    Plant a committee W in the top k of a strict majority of voters.

    The first n // 2 + 1 votes rank W first (in shuffled order) followed by the
    other candidates in shuffled order; the remaining votes are uniform.
    """
    if not 1 <= k <= m:
        raise InvalidInputError(f"committee size {k} outside 1..{m}")
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    rng = SplitMix64(seed)
    planted = tuple(sorted(rng.permutation(m)[:k]))
    others = [c for c in range(m) if c not in planted]
    votes = []
    for _ in range(n // 2 + 1):
        top, rest = list(planted), list(others)
        rng.shuffle(top)
        rng.shuffle(rest)
        votes.append(tuple(top + rest))
    votes.extend(rng.permutation(m) for _ in range(n - len(votes)))
    return Election(default_labels(m), tuple(votes)), Committee(planted)


def _padded(instance: X3cInstance) -> X3cInstance:
    """Add disjoint blocks until the cover size reaches the largest element frequency."""
    universe, sets = instance.universe_size, list(instance.sets)
    most = max(instance.frequencies().values())
    while universe // 3 < most:
        sets.append(frozenset(range(universe + 1, universe + 4)))
        universe += 3
    if universe != instance.universe_size:
        logger.debug(f"Padded X3C universe from {instance.universe_size} to {universe}")
    return X3cInstance(universe, tuple(sets))


def gen_from_x3c(instance: X3cInstance) -> ReductionInstance:
    """
    Chamberlin-Courant election deciding an exact cover by 3-sets.

    One candidate S<j> per set and one voter per element. A voter ranks the sets
    containing its element first, then its own dummy candidates, then everyone
    else. With k equal to the cover size, some committee gets every voter
    represented (score 3k) iff an exact cover exists.
    """
    frequencies = instance.frequencies()
    missing = sorted(e for e, count in frequencies.items() if count == 0)
    if missing:
        logger.warning(f"X3C elements {missing} are in no set; the instance is a vacuous no-instance")
    instance = _padded(instance)
    k = instance.cover_size

    labels = [f"S{j}" for j in range(1, len(instance.sets) + 1)]
    dummies: list[list[int]] = []
    for element in range(1, instance.universe_size + 1):
        start = len(labels)
        labels.extend(f"dummy_{element}_{i}" for i in range(1, k + 1))
        dummies.append(list(range(start, start + k)))

    votes = []
    for element in range(1, instance.universe_size + 1):
        top = [j for j, s in enumerate(instance.sets) if element in s] + dummies[element - 1]
        placed = set(top)
        votes.append(tuple(top + [c for c in range(len(labels)) if c not in placed]))

    election = Election(tuple(labels), tuple(votes))
    rule = builtin("cc-alpha", election.m, k)
    return ReductionInstance(election, k, Fraction(3 * k), rule, vacuous=bool(missing))


def normalize_counting(g: CountingFunction) -> CountingFunction:
    """
    Scale g so its differentials before the singularity are all 0 or all 1 and
    the jump at the singularity exceeds 1.
    """
    sing = singularity(g)
    if sing is INFINITE:
        raise PreconditionError("a linear counting function has no singularity")
    pre = g(1)
    if pre > 0:
        return g.scaled(1 / pre)
    jump = g(sing) - g(sing - 1)
    if jump <= 1:
        return g.scaled(2 / jump)
    return g


def gen_from_clique(graph: Graph, h: int, g: CountingFunction, c: int) -> ReductionInstance:
    """
    Top-k-counting election with a convex g deciding whether a regular graph has an h-clique.

    k = (c + 2) h. Edge voters rank the two endpoints, every edge-filler and
    private dummies within their top k; filler voters rank every edge-filler,
    every general-filler and h private dummies. The threshold is T1 + T2 + T3 + T4.
    """
    if h < 1 or c < 1:
        raise InvalidInputError(f"need h >= 1 and c >= 1, got h={h} c={c}")
    delta = graph.regular_degree()
    if delta is None:
        raise InvalidInputError(f"graph is not regular, degrees {sorted(set(graph.degrees()))}")
    k = (c + 2) * h
    if g.k != k:
        raise InvalidInputError(f"counting function must have k = (c + 2) h = {k}, got k={g.k}")
    if not is_convex(g):
        raise PreconditionError(f"clique reduction needs a convex counting function, got {g}")
    sing = singularity(g)
    if sing is INFINITE or c * (k - sing) < k:
        raise PreconditionError(f"clique reduction needs k - sing(g) >= k / c, got sing={sing} k={k} c={c}")
    g = normalize_counting(g)

    if h > delta + 1:
        logger.debug(f"h={h} exceeds degree + 1 = {delta + 1}, emitting the fixed no-instance")
        m = 2 * k
        election = Election(default_labels(m), (tuple(range(m)),))
        return ReductionInstance(election, k, g(k) + 1, TopKCounting(g, m), g=g)

    edge_count = len(graph.edges)
    per_edge = math.ceil(2 * g(k))
    fillers = math.ceil(per_edge * (edge_count + h) * g(k))

    labels = [f"v{i}" for i in range(graph.vertex_count)]
    edge_fillers = list(range(len(labels), len(labels) + sing - 2))
    labels.extend(f"c{i}" for i in range(1, sing - 1))
    general_fillers = list(range(len(labels), len(labels) + k - h - (sing - 2)))
    labels.extend(f"b{i}" for i in range(1, k - h - (sing - 2) + 1))

    tops: list[list[int]] = []
    for u, v in graph.edges:
        for _ in range(per_edge):
            tops.append([u, v, *edge_fillers])
    for _ in range(fillers):
        tops.append(edge_fillers + general_fillers)
    for voter, top in enumerate(tops, start=1):
        extra = k - len(top)
        start = len(labels)
        labels.extend(f"dummy_{voter}_{i}" for i in range(1, extra + 1))
        top.extend(range(start, start + extra))

    m = len(labels)
    votes = []
    for top in tops:
        placed = set(top)
        votes.append(tuple(top + [other for other in range(m) if other not in placed]))
    election = Election(tuple(labels), tuple(votes))

    t1 = fillers * g(k - h)
    t2 = per_edge * edge_count * g(sing - 2)
    t3 = per_edge * delta * h * (g(sing - 1) - g(sing - 2))
    t4 = per_edge * math.comb(h, 2) * (g(sing) - g(sing - 2) - 2 * (g(sing - 1) - g(sing - 2)))
    logger.debug(f"Clique reduction: m={m} n={election.n} k={k} T=({t1}, {t2}, {t3}, {t4})")
    return ReductionInstance(election, k, t1 + t2 + t3 + t4, TopKCounting(g, m), g=g)
