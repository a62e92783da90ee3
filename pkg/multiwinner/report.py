"""
Run reports for the command line.

JSON output follows schema version 1:

    {"schema_version": 1, "command": ..., "input_fingerprint": "sha256:<hex>" | null,
     "algorithm": ... | null, "duration_seconds": ..., "result": {...}}

Scores are written as exact ``p/q`` strings, committees as lists of labels.
"""

import hashlib
import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

from .axioms import EmpiricalFmResult, FmCheckResult, FmWitness
from .election import Committee, Election
from .errors import InvalidInputError
from .winners import WinnerResult

SCHEMA_VERSION = 1


def fingerprint(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def format_score(value: Fraction, decimal: bool = False) -> str:
    """Exact ``p/q`` text, or a rounded decimal for display."""
    value = Fraction(value)
    if not decimal:
        return str(value)
    with localcontext() as context:
        context.prec = 12
        return format((Decimal(value.numerator) / Decimal(value.denominator)).normalize(), "f")


def parse_score(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"not an exact score: {text!r}") from None


@dataclass
class RunReport:
    command: str
    input_fingerprint: str | None
    algorithm: str | None
    duration_seconds: float
    result: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.duration_seconds < 0:
            raise InvalidInputError(f"negative duration {self.duration_seconds}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input_fingerprint": self.input_fingerprint,
            "algorithm": self.algorithm,
            "duration_seconds": self.duration_seconds,
            "result": self.result,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidInputError(f"unsupported schema version {data.get('schema_version')!r}")
        return cls(
            data["command"],
            data["input_fingerprint"],
            data["algorithm"],
            data["duration_seconds"],
            data["result"],
        )


def committee_labels(election: Election, committee: Committee) -> list[str]:
    return list(election.labels(committee))


def winners_payload(election: Election, result: WinnerResult) -> dict[str, Any]:
    return {
        "winners": [committee_labels(election, w) for w in result.winners],
        "best_score": format_score(result.best_score),
        "tie_count": len(result.winners),
        "exact": result.exact,
        "truncated": result.truncated,
    }


def fm_check_payload(check: FmCheckResult) -> dict[str, Any]:
    violation = None
    if check.violation:
        violation = {
            "k1": check.violation.k1,
            "k2": check.violation.k2,
            "lhs": format_score(check.violation.lhs),
            "rhs": format_score(check.violation.rhs),
        }
    return {"satisfies": check.satisfies, "nonconstant": check.nonconstant, "violation": violation}


def empirical_payload(election: Election, outcome: EmpiricalFmResult) -> dict[str, Any]:
    payload: dict[str, Any] = {"verdict": outcome.verdict.value.upper(), "majority_committee": None}
    if outcome.majority_committee is not None:
        payload["majority_committee"] = committee_labels(election, outcome.majority_committee)
    if outcome.winners is not None:
        payload.update(winners_payload(election, outcome.winners))
    return payload


def witness_sidecar(witness: FmWitness, rule: str) -> dict[str, Any]:
    """JSON document stored next to a witness election."""
    election = witness.election
    return {
        "rule": rule,
        "m": election.m,
        "k": witness.k,
        "n_used": witness.n_used,
        "majority_committee": committee_labels(election, witness.majority_committee),
        "beating_committee": committee_labels(election, witness.beating_committee),
        "violation": {"k1": witness.violation[0], "k2": witness.violation[1]} if witness.violation else None,
        "t": witness.t,
    }
