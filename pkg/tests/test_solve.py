"""Tests for algorithm selection and the decision wrapper."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiwinner.election import Election
from multiwinner.errors import CapExceededError, InvalidInputError, PreconditionError
from multiwinner.limits import Limits
from multiwinner.scoring import RULES, CountingFunction, TopKCounting, builtin
from multiwinner.solve import (
    choose_algorithm,
    compute_winners,
    exists_committee_with_score,
    is_perfectionist_shaped,
)
from multiwinner.winners import brute_force_winners
from tests.conftest import elections


def many_voters(m: int, n: int) -> Election:
    """n rotations of 0..m-1."""
    return Election(tuple(f"c{i}" for i in range(m)), tuple(tuple((i + j) % m for j in range(m)) for i in range(n)))


class TestChooseAlgorithm:
    """Test automatic algorithm selection."""

    @pytest.mark.parametrize(
        "rule, k, expected",
        [
            ("sntv", 2, "separable"),
            ("bloc", 3, "separable"),
            ("k-borda", 2, "separable"),
            ("perfectionist", 3, "perfectionist"),
            ("sntv-perfectionist", 2, "sntv-perfectionist"),
            ("cc-alpha", 2, "near-perfectionist"),
            ("bloc-perfectionist", 3, "near-perfectionist"),
            ("cc-alpha", 5, "fpt-voters"),
            ("nearly-bloc", 6, "brute"),
            ("beta-cc", 2, "brute"),
        ],
    )
    def test_small_electorate(self, example_election, rule, k, expected):
        assert choose_algorithm(builtin(rule, 8, k), example_election, k) == expected

    def test_greedy_for_many_voters(self):
        election = many_voters(8, 20)
        assert choose_algorithm(builtin("cc-alpha", 8, 5), election, 5) == "greedy"

    def test_perfectionist_shape(self):
        assert is_perfectionist_shaped(CountingFunction((0, 0, 3)))
        assert not is_perfectionist_shaped(CountingFunction((0, 0, 0)))
        assert not is_perfectionist_shaped(CountingFunction((0, 1, 1)))


class TestComputeWinners:
    """Test dispatch to the individual algorithms."""

    def test_perfectionist_scaled(self, example_election):
        """Verify the Perfectionist count is scaled by g(k)."""
        f = TopKCounting(CountingFunction((0, 0, 5)), 8)
        result = compute_winners(f, example_election, 2, "perfectionist")
        assert result.best_score == 10
        assert result.winners == (example_election.committee("af"),)

    def test_named_algorithm(self, example_election):
        result = compute_winners(builtin("cc-alpha", 8, 2), example_election, 2, "fpt-voters")
        assert result.algorithm == "fpt-voters"
        assert result.winners == (example_election.committee("ef"),)

    def test_grouped(self, example_election):
        result = compute_winners(builtin("nearly-bloc", 8, 2), example_election, 2, "grouped")
        assert result.best_score == 2 and result.truncated

    def test_unknown_algorithm(self, example_election):
        with pytest.raises(InvalidInputError):
            compute_winners(builtin("bloc", 8, 2), example_election, 2, "simplex")

    def test_separable_needs_separable_rule(self, example_election):
        with pytest.raises(PreconditionError):
            compute_winners(builtin("cc-alpha", 8, 2), example_election, 2, "separable")

    def test_counting_algorithm_needs_counting_rule(self, example_election):
        with pytest.raises(PreconditionError):
            compute_winners(builtin("beta-cc", 8, 2), example_election, 2, "greedy")

    def test_greedy_needs_concave(self, example_election):
        with pytest.raises(PreconditionError):
            compute_winners(builtin("bloc-perfectionist", 8, 2), example_election, 2, "greedy")

    def test_shape_mismatch(self, example_election):
        with pytest.raises(InvalidInputError):
            compute_winners(builtin("bloc", 7, 2), example_election, 2)

    def test_cap(self, example_election):
        with pytest.raises(CapExceededError):
            compute_winners(builtin("beta-cc", 8, 2), example_election, 2, "brute", limits=Limits(enumeration_cap=10))

    @settings(max_examples=80, deadline=None)
    @given(elections(min_m=2, max_m=6, max_n=6), st.data())
    def test_auto_matches_brute_force(self, election, data):
        """Verify every exact algorithm auto picks agrees with brute force."""
        k = data.draw(st.integers(1, election.m))
        rule = data.draw(st.sampled_from(RULES))
        f = builtin(rule, election.m, k)
        result = compute_winners(f, election, k)
        expected = brute_force_winners(f, election, k)
        assert result.exact
        assert result.winners == expected.winners, f"{rule} via {result.algorithm}"
        assert result.best_score == expected.best_score


class TestDecision:
    """Test the score threshold decision."""

    def test_by_enumeration(self, example_election):
        f = builtin("cc-alpha", 8, 2)
        assert exists_committee_with_score(f, example_election, 2, 6)
        assert not exists_committee_with_score(f, example_election, 2, 7)

    def test_beyond_cap_uses_grouped_search(self, example_election):
        f = builtin("cc-alpha", 8, 2)
        limits = Limits(enumeration_cap=1)
        assert exists_committee_with_score(f, example_election, 2, "6", limits)
        assert not exists_committee_with_score(f, example_election, 2, "13/2", limits)

    def test_beyond_cap_other_rules(self, example_election):
        with pytest.raises(CapExceededError):
            exists_committee_with_score(builtin("beta-cc", 8, 2), example_election, 2, 40, Limits(enumeration_cap=1))
