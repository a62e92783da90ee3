"""Shared fixtures and hypothesis strategies."""

import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from multiwinner.election import Election, default_labels
from multiwinner.election_io import read_election
from multiwinner.scoring import CountingFunction

DATA_DIR = Path(__file__).parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def example_election():
    """Eight voters over a..h, committee size 2."""
    return read_election(DATA_DIR / "example1.elec")[0]


@pytest.fixture
def cc_counterexample():
    """Two abcd voters and one cdab voter."""
    return read_election(DATA_DIR / "cc-counterexample.elec")[0]


@pytest.fixture
def partition_election():
    return read_election(DATA_DIR / "partition-example.elec")[0]


@st.composite
def elections(draw, min_m=2, max_m=6, min_n=1, max_n=6):
    """Small elections with default labels."""
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    votes = draw(st.lists(st.permutations(range(m)), min_size=n, max_size=n))
    return Election(default_labels(m), tuple(tuple(vote) for vote in votes))


@st.composite
def counting_functions(draw, k: int, max_step: int = 3):
    """Nondecreasing integer g(0..k) with g(0) = 0."""
    steps = draw(st.lists(st.integers(0, max_step), min_size=k, max_size=k))
    values = [0]
    for step in steps:
        values.append(values[-1] + step)
    return CountingFunction(tuple(values))


@st.composite
def concave_counting_functions(draw, k: int, max_step: int = 3):
    """Concave g: nonincreasing differentials."""
    steps = sorted(draw(st.lists(st.integers(0, max_step), min_size=k, max_size=k)), reverse=True)
    values = [0]
    for step in steps:
        values.append(values[-1] + step)
    return CountingFunction(tuple(values))


@st.composite
def elections_with_k(draw, min_m=2, max_m=6, max_n=6):
    election = draw(elections(min_m=min_m, max_m=max_m, max_n=max_n))
    k = draw(st.integers(1, election.m))
    return election, k
