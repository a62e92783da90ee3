"""
Timing suites for the winner determination algorithms.

Each suite sweeps one size parameter over seeded impartial-culture elections
and records wall-clock time per algorithm. No correctness claims are made;
a run that would exceed an enumeration budget, or a size the suite cannot
use, is reported in its row and skipped.
"""

import csv
import logging
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import TextIO

from .election import Election
from .errors import CapExceededError, InvalidInputError, PreconditionError
from .generators import gen_impartial_culture
from .limits import DEFAULT_LIMITS, Limits
from .partition import fpt_voters_winners
from .scoring import bloc_perfectionist_counting, builtin, cc_counting
from .winners import WinnerResult, brute_force_winners, greedy_concave, near_perfectionist_winners

logger = logging.getLogger(__name__)

SUITES = ("brute", "greedy", "fpt-voters", "near-perf")

SUITE_ALGORITHMS = {
    "brute": ("brute-force",),
    "greedy": ("greedy", "brute-force"),
    "fpt-voters": ("fpt-voters",),
    "near-perf": ("near-perfectionist",),
}

DEFAULT_SIZES = {
    "brute": (10, 12, 14, 16, 18, 20),
    "greedy": (10, 12, 14, 16, 18, 20),
    "fpt-voters": (4, 6, 8, 10, 12, 14),
    "near-perf": (10, 20, 30),
}

# fixed shape of the swept instances
BENCH_K = 3
BENCH_VOTERS = 10
BENCH_CANDIDATES = 10
NEAR_PERF_K = 4
NEAR_PERF_Q = 1

CSV_FIELDS = ("suite", "size", "algorithm", "seconds", "status")


@dataclass(frozen=True)
class BenchRow:
    suite: str
    size: int
    algorithm: str
    seconds: float | None
    status: str


Runner = Callable[[Election], WinnerResult]


def _runners(suite: str, election: Election, limits: Limits) -> list[tuple[str, Runner]]:
    m = election.m
    match suite:
        case "brute":
            rule = builtin("cc-alpha", m, BENCH_K)
            return [("brute-force", lambda e: brute_force_winners(rule, e, BENCH_K, limits))]
        case "greedy":
            rule = builtin("cc-alpha", m, BENCH_K)
            return [
                ("greedy", lambda e: greedy_concave(cc_counting(BENCH_K), e, BENCH_K)),
                ("brute-force", lambda e: brute_force_winners(rule, e, BENCH_K, limits)),
            ]
        case "fpt-voters":
            return [("fpt-voters", lambda e: fpt_voters_winners(cc_counting(BENCH_K), e, BENCH_K, limits))]
        case "near-perf":
            g = bloc_perfectionist_counting(NEAR_PERF_K)
            return [
                ("near-perfectionist", lambda e: near_perfectionist_winners(g, e, NEAR_PERF_K, NEAR_PERF_Q, limits))
            ]
        case _:
            raise InvalidInputError(f"unknown bench suite {suite!r}; choose from {', '.join(SUITES)}")


def _instance(suite: str, size: int, seed: int) -> Election:
    if suite == "fpt-voters":
        return gen_impartial_culture(BENCH_CANDIDATES, size, seed)
    return gen_impartial_culture(size, BENCH_VOTERS, seed)


def run_suite(
    suite: str, sizes: Iterable[int] | None = None, seed: int = 0, limits: Limits = DEFAULT_LIMITS
) -> list[BenchRow]:
    """Time every algorithm of the suite at every size."""
    if suite not in SUITES:
        raise InvalidInputError(f"unknown bench suite {suite!r}; choose from {', '.join(SUITES)}")
    rows = []
    for size in sizes or DEFAULT_SIZES[suite]:
        try:
            election = _instance(suite, size, seed)
            runners = _runners(suite, election, limits)
        except InvalidInputError as e:
            logger.warning(f"{suite} size {size}: {e}")
            rows.extend(BenchRow(suite, size, algorithm, None, "invalid-size") for algorithm in SUITE_ALGORITHMS[suite])
            continue
        for algorithm, run in runners:
            start = time.perf_counter()
            try:
                run(election)
            except CapExceededError as e:
                logger.warning(f"{suite} size {size} {algorithm}: {e}")
                rows.append(BenchRow(suite, size, algorithm, None, "cap-exceeded"))
                continue
            except (InvalidInputError, PreconditionError) as e:
                logger.warning(f"{suite} size {size} {algorithm}: {e}")
                rows.append(BenchRow(suite, size, algorithm, None, "invalid-size"))
                continue
            seconds = time.perf_counter() - start
            logger.debug(f"{suite} size {size} {algorithm}: {seconds:.4f}s")
            rows.append(BenchRow(suite, size, algorithm, seconds, "ok"))
    return rows


def write_csv(rows: Iterable[BenchRow], stream: TextIO):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        seconds = "" if row.seconds is None else f"{row.seconds:.6f}"
        writer.writerow((row.suite, row.size, row.algorithm, seconds, row.status))
