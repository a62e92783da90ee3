"""Tests for the fixed-majority criterion, its witnesses and the shape corollaries."""

import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from multiwinner.axioms import (
    CorollaryClass,
    FmVerdict,
    bottom_sequence,
    corollary_check,
    counting_functions,
    empirical_fm_check,
    fm_condition_check,
    induced_counting_function,
    is_fixed_majority_instance,
    nonconvex_fm_functions,
    top_sequence,
    witness_counting,
    witness_general,
)
from multiwinner.election import Committee, Election
from multiwinner.errors import InvalidInputError, PreconditionError
from multiwinner.generators import gen_fixed_majority_profile
from multiwinner.scoring import (
    RULES,
    CountingFunction,
    Tabulated,
    TopKCounting,
    bloc_counting,
    builtin,
    cc_counting,
    committee_score,
    is_concave,
    is_convex,
    perfectionist_counting,
)
from tests.conftest import counting_functions as counting_function_strategy

NON_CONVEX_FM = CountingFunction((0, 1, 1, 2))


class TestConditionCheck:
    """Test the differential inequality on counting functions."""

    def test_bloc_satisfies(self):
        assert fm_condition_check(bloc_counting(3)).satisfies

    def test_perfectionist_satisfies(self):
        assert fm_condition_check(perfectionist_counting(4)).satisfies

    def test_cc_fails_at_first_pair(self):
        """Verify the first violation in (k1, k2) order is reported."""
        check = fm_condition_check(cc_counting(2))
        assert not check.satisfies
        assert (check.violation.k1, check.violation.k2) == (0, 1)
        assert (check.violation.lhs, check.violation.rhs) == (0, 1)

    def test_constant_fails_without_violation(self):
        check = fm_condition_check(CountingFunction((0, 0, 0)))
        assert not check.satisfies
        assert check.violation is None and not check.nonconstant

    def test_non_convex_example(self):
        """Verify (0,1,1,2) satisfies the criterion without being convex."""
        assert fm_condition_check(NON_CONVEX_FM).satisfies
        assert not is_convex(NON_CONVEX_FM)

    def test_k_mismatch(self):
        with pytest.raises(InvalidInputError):
            fm_condition_check(bloc_counting(2), k=3)


class TestCorollaries:
    """Test the shape classification against the exact check."""

    @pytest.mark.parametrize(
        "g, classification, expected",
        [
            (CountingFunction((0, 0, 0)), CorollaryClass.CONSTANT, False),
            (bloc_counting(3), CorollaryClass.CONVEX, True),
            (perfectionist_counting(3), CorollaryClass.CONVEX, True),
            (cc_counting(3), CorollaryClass.CONCAVE_NONLINEAR, False),
            (NON_CONVEX_FM, CorollaryClass.OTHER, None),
        ],
    )
    def test_classification(self, g, classification, expected):
        result = corollary_check(g)
        assert result.classification is classification
        assert result.expected is expected

    @given(st.integers(1, 5).flatmap(lambda k: counting_function_strategy(k)))
    def test_shape_implies_verdict(self, g):
        """Verify convex nonconstant g always satisfy and concave nonlinear g never do."""
        result = corollary_check(g)
        if is_convex(g) and not g.is_constant():
            assert result.check.satisfies
        if is_concave(g) and not g.is_linear():
            assert not result.check.satisfies

    def test_counting_functions_enumeration(self):
        assert [g.g for g in counting_functions(2, 1)] == [(0, 0, 0), (0, 0, 1), (0, 1, 1)]

    def test_nonconvex_family(self):
        found = nonconvex_fm_functions(3, 2)
        assert NON_CONVEX_FM in found
        assert all(not is_convex(g) for g in found)


class TestFixedMajorityInstances:
    """Test detection and empirical checks."""

    def test_detects_majority(self, cc_counterexample):
        assert is_fixed_majority_instance(cc_counterexample, 2) == Committee((0, 1))

    def test_no_majority(self, example_election):
        assert is_fixed_majority_instance(example_election, 2) is None

    def test_cc_fails_empirically(self, cc_counterexample):
        outcome = empirical_fm_check(builtin("cc-alpha", 4, 2), cc_counterexample, 2)
        assert outcome.verdict is FmVerdict.FAIL
        assert outcome.majority_committee == Committee((0, 1))
        assert len(outcome.winners.winners) == 4

    def test_bloc_passes_empirically(self, cc_counterexample):
        outcome = empirical_fm_check(builtin("bloc", 4, 2), cc_counterexample, 2)
        assert outcome.verdict is FmVerdict.PASS

    def test_not_applicable(self, example_election):
        outcome = empirical_fm_check(builtin("bloc", 8, 2), example_election, 2)
        assert outcome.verdict is FmVerdict.NOT_APPLICABLE
        assert outcome.winners is None


class TestCountingWitness:
    """Test counterexamples for counting functions."""

    def test_cc_minimal_witness(self):
        """Verify one split voter suffices for Chamberlin-Courant with k = 2."""
        witness = witness_counting(cc_counting(2), 4)
        election = witness.election
        assert witness.n_used == 1
        assert election.n == 3
        assert witness.violation == (0, 1)
        assert witness.beating_committee == election.committee("ad")
        f = builtin("cc-alpha", 4, 2)
        assert committee_score(f, election, witness.beating_committee) == 3
        assert committee_score(f, election, witness.majority_committee) == 2

    def test_satisfying_rule_has_no_witness(self):
        assert witness_counting(bloc_counting(2), 4) is None

    def test_constant_witness(self):
        witness = witness_counting(CountingFunction((0, 0, 0)), 4)
        assert witness.n_used == 0 and witness.election.n == 1
        assert witness.beating_committee != witness.majority_committee

    def test_needs_two_k_candidates(self):
        with pytest.raises(PreconditionError):
            witness_counting(cc_counting(2), 3)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3).flatmap(lambda k: st.tuples(counting_function_strategy(k), st.integers(2 * k, 2 * k + 2))))
    def test_witness_beats_majority(self, case):
        """Verify every witness is a fixed-majority election the majority committee does not win."""
        g, m = case
        assume(not g.is_constant() and not fm_condition_check(g).satisfies)
        witness = witness_counting(g, m)
        election, k = witness.election, g.k
        f = TopKCounting(g, m)
        assert is_fixed_majority_instance(election, k) == witness.majority_committee
        beating = committee_score(f, election, witness.beating_committee)
        assert beating > committee_score(f, election, witness.majority_committee)
        assert empirical_fm_check(f, election, k).verdict is FmVerdict.FAIL

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_one_voter_fewer_per_block_is_not_enough(self, k):
        """Verify the majority committee is not beaten once each block loses a voter."""
        m = 2 * k
        for g in counting_functions(k, 3):
            witness = witness_counting(g, m)
            if witness is None or witness.n_used == 0:
                continue
            n, votes = witness.n_used, witness.election.votes
            smaller = Election(witness.election.candidates, votes[:n] + votes[n + 1 : 2 * n])
            f = TopKCounting(g, m)
            majority = committee_score(f, smaller, witness.majority_committee)
            assert majority >= committee_score(f, smaller, witness.beating_committee), str(g)


@pytest.mark.slow
class TestCharacterizationSweep:
    """Compare the condition with elections for every small counting function."""

    @pytest.mark.parametrize("k", [2, 3])
    def test_all_counting_functions(self, k):
        m = 2 * k
        for g in counting_functions(k, 3):
            f = TopKCounting(g, m)
            if fm_condition_check(g).satisfies:
                for seed in range(100):
                    election, planted = gen_fixed_majority_profile(m, 5, k, seed)
                    outcome = empirical_fm_check(f, election, k)
                    assert outcome.verdict is FmVerdict.PASS, f"{g} seed {seed}"
                    assert outcome.majority_committee == planted
            else:
                witness = witness_counting(g, m)
                assert empirical_fm_check(f, witness.election, k).verdict is FmVerdict.FAIL, str(g)


class TestGeneralWitness:
    """Test counterexamples for scoring functions that are not top-k-counting."""

    def test_sequences(self):
        assert top_sequence(1, 3) == (1, 4, 5)
        assert bottom_sequence(1, 7, 3) == (3, 6, 7)
        assert top_sequence(3, 3) == (1, 2, 3)
        assert bottom_sequence(0, 7, 3) == (5, 6, 7)

    @pytest.mark.parametrize("rule, t", [("beta-cc", None), ("k-borda", None), ("sntv", None), ("pav", 3)])
    def test_witness_beats_majority(self, rule, t):
        f = builtin(rule, 5, 2, t)
        witness = witness_general(Tabulated.from_evaluator(f), 5, 2)
        election = witness.election
        assert is_fixed_majority_instance(election, 2) == witness.majority_committee
        assert committee_score(f, election, witness.beating_committee) > committee_score(
            f, election, witness.majority_committee
        )
        assert empirical_fm_check(f, election, 2).verdict is FmVerdict.FAIL

    @pytest.mark.parametrize("rule, t", [(rule, None) for rule in RULES] + [("pav", 3)])
    def test_one_voter_fewer_per_block_is_not_enough(self, rule, t):
        """Verify the majority committee is not beaten once each block loses a voter."""
        f = builtin(rule, 5, 2, t)
        witness = witness_general(Tabulated.from_evaluator(f), 5, 2)
        if witness is None:
            return
        n, votes = witness.n_used, witness.election.votes
        smaller = Election(witness.election.candidates, votes[:n] + votes[n + 1 : 2 * n])
        majority = committee_score(f, smaller, witness.majority_committee)
        assert majority >= committee_score(f, smaller, witness.beating_committee)

    def test_beta_cc_shape(self):
        """Verify the least t and n for beta-CC with m = 4 and k = 2."""
        witness = witness_general(Tabulated.from_evaluator(builtin("beta-cc", 4, 2)), 4, 2)
        assert (witness.t, witness.n_used) == (1, 1)
        assert witness.election.votes == ((0, 1, 2, 3), (0, 1, 2, 3), (2, 0, 3, 1))

    def test_top_k_counting_has_no_general_witness(self):
        f = Tabulated.from_evaluator(builtin("cc-alpha", 5, 2))
        assert witness_general(f, 5, 2) is None

    def test_needs_tabulated(self):
        with pytest.raises(InvalidInputError):
            witness_general(builtin("beta-cc", 5, 2), 5, 2)

    def test_induced_counting_function(self):
        assert induced_counting_function(Tabulated.from_evaluator(builtin("cc-alpha", 5, 2))) == cc_counting(2)
        assert induced_counting_function(Tabulated.from_evaluator(builtin("beta-cc", 5, 2))) is None

    @given(st.integers(1, 3).flatmap(lambda k: st.tuples(counting_function_strategy(k), st.integers(2 * k, 2 * k + 2))))
    def test_induced_function_of_counting_table(self, case):
        """Verify a top-k-counting table gives back its own nondecreasing g."""
        g, m = case
        induced = induced_counting_function(Tabulated.from_evaluator(TopKCounting(g, m)))
        assert induced == g
        assert all(a <= b for a, b in itertools.pairwise(induced.g))
