#!/usr/bin/env python3
"""
Committee Election Tool

Computes winning committees under committee scoring rules, analyzes counting
functions against the fixed-majority criterion, builds counterexample and
reduction instances, and times the winner determination algorithms.

Usage:
    python3 elect.py winners data/example1.elec --rule bloc
    python3 elect.py winners data/example1.elec --rule cc-alpha --algorithm greedy --json
    python3 elect.py score data/example1.elec --rule perfectionist --committee a,f
    python3 elect.py analyze-g 0,1,1
    python3 elect.py check-fm data/cc-counterexample.elec --rule cc-alpha
    python3 elect.py witness --g 0,1,1 --m 4 --out-dir /tmp/witness
    python3 elect.py gen x3c --input data/x3c-yes.x3c --out /tmp/x3c.elec
    python3 elect.py bench greedy --sizes 10,12,14

Exit codes: 0 success, 1 other error, 2 malformed input, 3 precondition
violated, 4 enumeration cap exceeded, 130 interrupted.
"""

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

# Add multiwinner package to path
sys.path.insert(0, str(Path(__file__).parent))

from multiwinner.axioms import (
    FmVerdict,
    corollary_check,
    empirical_fm_check,
    fm_condition_check,
    is_fixed_majority_instance,
    witness_counting,
    witness_general,
)
from multiwinner.bench import DEFAULT_SIZES, SUITES, run_suite, write_csv
from multiwinner.election import Election
from multiwinner.election_io import load_election, parse_graph, parse_x3c, serialize_election
from multiwinner.errors import (
    CapExceededError,
    InvalidInputError,
    MultiwinnerError,
    ParseError,
    PreconditionError,
)
from multiwinner.generators import gen_fixed_majority_profile, gen_from_clique, gen_from_x3c, gen_impartial_culture
from multiwinner.limits import DEFAULT_LIMITS, Limits
from multiwinner.report import (
    RunReport,
    empirical_payload,
    fingerprint,
    fm_check_payload,
    format_score,
    winners_payload,
    witness_sidecar,
)
from multiwinner.scoring import (
    INFINITE,
    RULES,
    ScoringEvaluator,
    Tabulated,
    TopKCounting,
    builtin,
    committee_score,
    counting_function_of,
    counting_to_owa,
    format_values,
    is_concave,
    is_convex,
    parse_counting_function,
    singularity,
)
from multiwinner.solve import ALGORITHMS, compute_winners

logger = logging.getLogger("elect")

GEN_KINDS = ("impartial", "fixed-majority", "x3c", "clique")


@dataclass
class Config:
    """Global options shared by every command"""

    command: str
    json_output: bool
    decimal: bool
    seed: int
    threads: int
    cap: int | None
    verbose: bool

    @property
    def limits(self) -> Limits:
        return DEFAULT_LIMITS.with_overrides(enumeration_cap=self.cap, workers=self.threads)


def _int_list(text: str) -> list[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise InvalidInputError(f"expected comma-separated integers, got {text!r}") from None


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _resolve_rule(args, m: int, k: int | None) -> tuple[str, ScoringEvaluator, int]:
    """Rule name, evaluator and committee size from --rule/--g/--k."""
    if args.g:
        g = parse_counting_function(args.g)
        if k is not None and args.k is not None and args.k != g.k:
            raise InvalidInputError(f"--k {args.k} does not match the counting function (k={g.k})")
        if g.k > m:
            raise InvalidInputError(f"counting function for k={g.k} needs at least {g.k} candidates, got {m}")
        return f"g={g}", TopKCounting(g, m), g.k
    if not args.rule:
        raise InvalidInputError("one of --rule or --g is required")
    size = args.k if args.k is not None else k
    if size is None:
        raise InvalidInputError("--k is required")
    return args.rule, builtin(args.rule, m, size, args.t), size


def _emit(config: Config, report: RunReport, lines: list[str]):
    if config.json_output:
        print(report.to_json())
    else:
        for line in lines:
            print(line)


def _winner_lines(election: Election, result, config: Config) -> list[str]:
    lines = [election.format_committee(w) for w in result.winners]
    lines.append(f"score: {format_score(result.best_score, config.decimal)}")
    lines.append(f"ties: {len(result.winners)}")
    lines.append(f"algorithm: {result.algorithm}")
    lines.append(f"exact: {str(result.exact).lower()}")
    if result.truncated:
        lines.append("truncated: true")
    return lines


def cmd_winners(config: Config, args) -> int:
    text = _read_text(args.file)
    start = time.perf_counter()
    election, file_k = load_election(text)
    rule, evaluator, k = _resolve_rule(args, election.m, file_k)
    result = compute_winners(evaluator, election, k, args.algorithm, args.q, config.limits)
    payload = {"rule": rule, "k": k, **winners_payload(election, result)}
    report = RunReport("winners", fingerprint(text), result.algorithm, time.perf_counter() - start, payload)
    _emit(config, report, _winner_lines(election, result, config))
    return 0


def cmd_score(config: Config, args) -> int:
    text = _read_text(args.file)
    start = time.perf_counter()
    election, file_k = load_election(text)
    committee = election.committee(label.strip() for label in args.committee.split(","))
    rule, evaluator, k = _resolve_rule(args, election.m, committee.k)
    if k != committee.k:
        raise InvalidInputError(f"committee has {committee.k} members but the rule is for k={k}")
    score = committee_score(evaluator, election, committee)
    payload = {
        "rule": rule,
        "k": k,
        "committee": list(election.labels(committee)),
        "score": format_score(score),
    }
    report = RunReport("score", fingerprint(text), None, time.perf_counter() - start, payload)
    _emit(config, report, [f"{election.format_committee(committee)} score: {format_score(score, config.decimal)}"])
    return 0


def cmd_analyze(config: Config, args) -> int:
    start = time.perf_counter()
    g = parse_counting_function(args.spec)
    sing = singularity(g) if g.k >= 2 else None
    sing_text = "n/a" if sing is None else ("infinite" if sing is INFINITE else str(sing))
    check = fm_condition_check(g)
    corollary = corollary_check(g)
    owa = counting_to_owa(g)

    verdict = "yes" if check.satisfies else "no"
    if check.violation:
        v = check.violation
        verdict += f" (violation at k1={v.k1} k2={v.k2}: {format_score(v.lhs)} < {format_score(v.rhs)})"
    elif not check.nonconstant:
        verdict += " (constant)"
    lines = [
        f"g: {g}",
        f"k: {g.k}",
        f"singularity: {sing_text}",
        f"convex: {str(is_convex(g)).lower()}",
        f"concave: {str(is_concave(g)).lower()}",
        f"owa: {format_values(owa.lambdas)}",
        f"fixed-majority: {verdict}",
        f"corollary: {corollary.classification.value}",
    ]
    payload = {
        "g": [format_score(v) for v in g.g],
        "k": g.k,
        "singularity": sing_text,
        "convex": is_convex(g),
        "concave": is_concave(g),
        "owa": [format_score(v) for v in owa.lambdas],
        "fixed_majority": fm_check_payload(check),
        "corollary": corollary.classification.value,
    }
    report = RunReport("analyze-g", fingerprint(args.spec), None, time.perf_counter() - start, payload)
    _emit(config, report, lines)
    return 0


def cmd_check_fm(config: Config, args) -> int:
    text = _read_text(args.file)
    start = time.perf_counter()
    election, file_k = load_election(text)
    rule, evaluator, k = _resolve_rule(args, election.m, file_k)
    outcome = empirical_fm_check(evaluator, election, k, config.limits)
    payload = {"rule": rule, "k": k, **empirical_payload(election, outcome)}
    lines = [f"verdict: {outcome.verdict.value.upper()}"]
    if outcome.majority_committee is not None:
        lines.append(f"majority committee: {election.format_committee(outcome.majority_committee)}")
    if outcome.winners is not None:
        lines.extend(_winner_lines(election, outcome.winners, config))
    algorithm = outcome.winners.algorithm if outcome.winners else None
    report = RunReport("check-fm", fingerprint(text), algorithm, time.perf_counter() - start, payload)
    _emit(config, report, lines)
    return 0


def _verify_witness(witness, evaluator: ScoringEvaluator, limits: Limits) -> bool:
    election, k = witness.election, witness.k
    if is_fixed_majority_instance(election, k) != witness.majority_committee:
        return False
    beating = committee_score(evaluator, election, witness.beating_committee)
    majority = committee_score(evaluator, election, witness.majority_committee)
    if beating < majority:
        return False
    return empirical_fm_check(evaluator, election, k, limits).verdict is FmVerdict.FAIL


def cmd_witness(config: Config, args) -> int:
    start = time.perf_counter()
    if args.g:
        g = parse_counting_function(args.g)
        rule, evaluator = f"g={g}", TopKCounting(g, args.m)
    else:
        if not args.rule or args.k is None:
            raise InvalidInputError("witness needs --g, or --rule with --k")
        rule, evaluator = args.rule, builtin(args.rule, args.m, args.k, args.t)
    k = evaluator.k

    counting = counting_function_of(evaluator)
    if counting is not None:
        witness = witness_counting(counting, args.m, k)
    else:
        witness = witness_general(Tabulated.from_evaluator(evaluator), args.m, k)

    if witness is None:
        payload = {"rule": rule, "witness": None}
        report = RunReport("witness", None, None, time.perf_counter() - start, payload)
        _emit(config, report, ["no witness: the rule satisfies the fixed-majority criterion at this size"])
        return 0

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    election_path = out_dir / "witness.elec"
    sidecar_path = out_dir / "witness.json"
    election_text = serialize_election(witness.election, k)
    election_path.write_text(election_text, encoding="utf-8")
    sidecar = witness_sidecar(witness, rule)
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")

    verified = _verify_witness(witness, evaluator, config.limits)
    status = "PASS" if verified else "FAIL"
    payload = {"rule": rule, "witness": sidecar, "files": [str(election_path), str(sidecar_path)], "verification": status}
    report = RunReport("witness", fingerprint(election_text), None, time.perf_counter() - start, payload)
    lines = [
        f"wrote {election_path}",
        f"wrote {sidecar_path}",
        f"majority committee: {witness.election.format_committee(witness.majority_committee)}",
        f"beating committee: {witness.election.format_committee(witness.beating_committee)}",
        f"n_used: {witness.n_used}",
        f"verification: {status}",
    ]
    _emit(config, report, lines)
    return 0


def cmd_gen(config: Config, args) -> int:
    start = time.perf_counter()
    source = None
    result: dict[str, Any] = {"kind": args.kind}
    match args.kind:
        case "impartial":
            election = gen_impartial_culture(args.m, args.n, config.seed)
            k = args.k or 1
        case "fixed-majority":
            if args.k is None:
                raise InvalidInputError("gen fixed-majority needs --k")
            election, planted = gen_fixed_majority_profile(args.m, args.n, args.k, config.seed)
            k = args.k
            result["planted_committee"] = list(election.labels(planted))
        case "x3c":
            source = _read_text(args.input)
            instance = gen_from_x3c(parse_x3c(source))
            election, k = instance.election, instance.k
            result["target"] = format_score(instance.target)
            result["vacuous"] = instance.vacuous
        case "clique":
            if args.h is None or args.c is None or not args.g:
                raise InvalidInputError("gen clique needs --input, --h, --c and --g")
            source = _read_text(args.input)
            instance = gen_from_clique(parse_graph(source), args.h, parse_counting_function(args.g), args.c)
            election, k = instance.election, instance.k
            result["target"] = format_score(instance.target)
            result["g"] = [format_score(v) for v in instance.g.g]
        case _:
            raise InvalidInputError(f"unknown generator {args.kind!r}")

    text = serialize_election(election, k)
    result.update({"m": election.m, "n": election.n, "k": k})
    summary = [f"{key}: {value}" for key, value in result.items()]
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        result["out"] = args.out
        lines = [f"wrote {args.out}", *summary]
    else:
        lines = [f"# {line}" for line in summary] + text.splitlines()
    report = RunReport(
        "gen", fingerprint(source) if source else None, None, time.perf_counter() - start, result
    )
    if config.json_output and not args.out:
        result["election"] = text
    _emit(config, report, lines)
    return 0


def cmd_bench(config: Config, args) -> int:
    start = time.perf_counter()
    sizes = _int_list(args.sizes) if args.sizes else list(DEFAULT_SIZES[args.suite])
    rows = run_suite(args.suite, sizes, config.seed, config.limits)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            write_csv(rows, f)
    elif not config.json_output:
        write_csv(rows, sys.stdout)
    if config.json_output or args.out:
        payload = {
            "suite": args.suite,
            "rows": [
                {"size": r.size, "algorithm": r.algorithm, "seconds": r.seconds, "status": r.status} for r in rows
            ],
        }
        report = RunReport("bench", None, None, time.perf_counter() - start, payload)
        _emit(config, report, [f"wrote {args.out}"] if args.out else [])
    return 0


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool):
    """Global flags, accepted before and after the command."""

    def default(value):
        # suppressed defaults keep the top-level value unless the flag is repeated after the command
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--json", action="store_true", default=default(False), help="Print a JSON report")
    parser.add_argument("--decimal", action="store_true", default=default(False), help="Show scores as decimals")
    parser.add_argument("--seed", type=int, default=default(0), help="PRNG seed (default: 0)")
    parser.add_argument("--threads", type=int, default=default(1), help="Worker processes (default: 1)")
    parser.add_argument("--cap", type=int, default=default(None), help="Brute-force enumeration cap")
    parser.add_argument("--verbose", action="store_true", default=default(False), help="Debug logging on stderr")


def _add_rule_options(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--rule", choices=RULES, help="Built-in committee scoring rule")
    group.add_argument("--g", type=str, help="Counting function g(0..k), e.g. 0,1,1,2")
    parser.add_argument("--k", type=int, help="Committee size (default: from the election file)")
    parser.add_argument("--t", type=int, help="Approval width for pav (default: k)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Multiwinner committee elections with top-k-counting rules")
    _add_global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_options(common, suppress=True)
    commands = parser.add_subparsers(dest="command", required=True)

    winners = commands.add_parser("winners", parents=[common], help="Compute winning committees")
    winners.add_argument("file", help="Election file")
    _add_rule_options(winners)
    winners.add_argument("--algorithm", choices=ALGORITHMS, default="auto", help="Algorithm (default: auto)")
    winners.add_argument("--q", type=int, help="Bound on k - sing(g) for near-perfectionist")

    score = commands.add_parser("score", parents=[common], help="Score one committee")
    score.add_argument("file", help="Election file")
    _add_rule_options(score)
    score.add_argument("--committee", required=True, help="Comma-separated candidate labels")

    analyze = commands.add_parser("analyze-g", parents=[common], help="Analyze a counting function")
    analyze.add_argument("spec", help="Counting function g(0..k), e.g. 0,1,1")

    check = commands.add_parser("check-fm", parents=[common], help="Test the fixed-majority criterion")
    check.add_argument("file", help="Election file")
    _add_rule_options(check)

    witness = commands.add_parser("witness", parents=[common], help="Build a fixed-majority counterexample")
    _add_rule_options(witness)
    witness.add_argument("--m", type=int, required=True, help="Number of candidates (at least 2k)")
    witness.add_argument("--out-dir", default=".", help="Directory for witness.elec and witness.json")

    gen = commands.add_parser("gen", parents=[common], help="Generate an election")
    gen.add_argument("kind", choices=GEN_KINDS)
    gen.add_argument("--m", type=int, default=5, help="Candidates (default: 5)")
    gen.add_argument("--n", type=int, default=10, help="Voters (default: 10)")
    gen.add_argument("--k", type=int, help="Committee size")
    gen.add_argument("--input", help="X3C or graph file")
    gen.add_argument("--h", type=int, help="Clique size")
    gen.add_argument("--c", type=int, help="Clique reduction constant, k = (c + 2) h")
    gen.add_argument("--g", type=str, help="Convex counting function for the clique reduction")
    gen.add_argument("--out", help="Output election file (default: stdout)")

    bench = commands.add_parser("bench", parents=[common], help="Time the algorithms")
    bench.add_argument("suite", choices=SUITES)
    bench.add_argument("--sizes", help="Comma-separated sizes")
    bench.add_argument("--out", help="CSV output file (default: stdout)")
    return parser


HANDLERS = {
    "winners": cmd_winners,
    "score": cmd_score,
    "analyze-g": cmd_analyze,
    "check-fm": cmd_check_fm,
    "witness": cmd_witness,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(
        command=args.command,
        json_output=args.json,
        decimal=args.decimal,
        seed=args.seed,
        threads=args.threads,
        cap=args.cap,
        verbose=args.verbose,
    )
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        return HANDLERS[config.command](config, args)
    except (ParseError, InvalidInputError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except PreconditionError as e:
        print(f"ERROR: Precondition violated: {e}", file=sys.stderr)
        return 3
    except CapExceededError as e:
        print(f"ERROR: Cap exceeded: {e}", file=sys.stderr)
        return 4
    except (MultiwinnerError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
