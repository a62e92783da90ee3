"""Tests for the SplitMix64 generator."""

import pytest

from multiwinner.errors import InvalidInputError
from multiwinner.prng import MASK64, SplitMix64


def reference_next(state: int) -> tuple[int, int]:
    """Independent rendition of one SplitMix64 step."""
    state = (state + 0x9E3779B97F4A7C15) % 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % 2**64
    return state, z ^ (z >> 31)


class TestSplitMix64:
    """Test the generator against its published update rule."""

    def test_seed_zero_first_output(self):
        """Verify the well-known first output for seed 0."""
        assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF

    def test_matches_reference(self):
        rng = SplitMix64(12345)
        state = 12345
        for _ in range(50):
            state, expected = reference_next(state)
            assert rng.next_u64() == expected

    def test_outputs_are_64_bit(self):
        rng = SplitMix64(-1)
        assert all(0 <= rng.next_u64() <= MASK64 for _ in range(100))

    def test_reproducible(self):
        assert [SplitMix64(9).next_u64() for _ in range(3)] == [SplitMix64(9).next_u64() for _ in range(3)]


class TestBoundedDraws:
    """Test rejection sampling and shuffles."""

    def test_below_range(self):
        rng = SplitMix64(3)
        draws = [rng.below(7) for _ in range(500)]
        assert set(draws) == set(range(7))

    def test_below_one(self):
        assert SplitMix64(3).below(1) == 0

    def test_below_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            SplitMix64(3).below(0)

    def test_permutation_is_permutation(self):
        perm = SplitMix64(42).permutation(20)
        assert sorted(perm) == list(range(20))

    def test_shuffle_order(self):
        """Verify Fisher-Yates runs from the last index down, one draw per swap."""
        items = list(range(5))
        SplitMix64(8).shuffle(items)
        rng = SplitMix64(8)
        expected = list(range(5))
        for i in range(4, 0, -1):
            j = rng.below(i + 1)
            expected[i], expected[j] = expected[j], expected[i]
        assert items == expected
