#!/usr/bin/env python3
"""Regenerate the derived election fixtures.

Builds the reduction elections for the bundled X3C and graph instances, a
seeded impartial-culture profile, a planted fixed-majority profile and the
Chamberlin-Courant counterexample, and writes them next to their sources.

Environment variables:
    FIXTURE_DIR  - Output directory (default: data/generated)
    FIXTURE_SEED - PRNG seed for the random profiles (default: 7)
"""

import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from multiwinner.axioms import witness_counting  # noqa: E402
from multiwinner.election_io import parse_graph, parse_x3c, write_election  # noqa: E402
from multiwinner.generators import (  # noqa: E402
    gen_fixed_majority_profile,
    gen_from_clique,
    gen_from_x3c,
    gen_impartial_culture,
)
from multiwinner.scoring import cc_counting, parse_counting_function  # noqa: E402

DATA = ROOT / "data"
# convex, k = 12 = (2 + 2) * 3, singularity 6
CLIQUE_G = "0,0,0,0,0,0,8/7,16/7,24/7,32/7,40/7,48/7,8"


def log(msg):
    print(msg, file=sys.stderr)


def main():
    out_dir = Path(os.environ.get("FIXTURE_DIR", DATA / "generated"))
    seed = int(os.environ.get("FIXTURE_SEED", "7"))
    out_dir.mkdir(parents=True, exist_ok=True)

    for name in ("x3c-yes", "x3c-no"):
        instance = gen_from_x3c(parse_x3c((DATA / f"{name}.x3c").read_text()))
        write_election(out_dir / f"{name}.elec", instance.election, instance.k)
        log(f"{name}: m={instance.election.m} n={instance.election.n} k={instance.k} target={instance.target}")

    g = parse_counting_function(CLIQUE_G)
    for name in ("triangle", "square"):
        instance = gen_from_clique(parse_graph((DATA / f"{name}.graph").read_text()), 3, g, 2)
        write_election(out_dir / f"clique-{name}.elec", instance.election, instance.k)
        log(f"clique-{name}: m={instance.election.m} n={instance.election.n} target={instance.target}")

    election = gen_impartial_culture(8, 12, seed)
    write_election(out_dir / "impartial-8x12.elec", election, 3)
    log(f"impartial-8x12: seed={seed}")

    election, planted = gen_fixed_majority_profile(8, 9, 3, seed)
    write_election(out_dir / "fixed-majority-8x9.elec", election, 3)
    log(f"fixed-majority-8x9: planted {election.format_committee(planted)}")

    witness = witness_counting(cc_counting(2), 4)
    write_election(out_dir / "cc-witness.elec", witness.election, witness.k)
    log(f"cc-witness: n_used={witness.n_used}")

    log(f"Fixtures written to {out_dir}")


if __name__ == "__main__":
    main()
