"""Password-space counting against enumeration oracles and known values."""

import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridpass.counting import (
    SpaceConfig,
    arrangements,
    brute_force_space,
    int_log2,
    total_space,
    valid_labelings,
)
from .oracles import labelings_by_composition, space_by_label_enumeration

GOLDEN_PATH = Path(__file__).parent / "data" / "prototype_space.json"


class TestValidLabelings:
    def test_two_slots_two_singleton_sets(self):
        # Brute force over all 2**2 labelings keeps the 2 covering both sets.
        assert valid_labelings(2, (1, 1)) == 2

    def test_pigeonhole_zero_when_k_below_set_count(self):
        assert valid_labelings(2, (1, 1, 1)) == 0

    def test_three_slots_three_sets_sized_112(self):
        # Brute force over all 4**3 labelings keeps the 12 covering all sets.
        assert valid_labelings(3, (1, 1, 2)) == 12

    def test_single_set_gives_full_power(self):
        assert valid_labelings(5, (7,)) == 7**5 == 16807

    def test_rejects_empty_sizes(self):
        with pytest.raises(ValueError):
            valid_labelings(3, ())

    def test_rejects_nonpositive_k(self):
        with pytest.raises(ValueError):
            valid_labelings(0, (2, 2))

    def test_rejects_zero_set_size(self):
        with pytest.raises(ValueError):
            valid_labelings(3, (2, 0))

    def test_rejects_too_many_sets(self):
        with pytest.raises(ValueError):
            valid_labelings(25, (1,) * 21)

    @pytest.mark.parametrize("k", range(1, 7))
    @pytest.mark.parametrize(
        "sizes", [(1,), (3,), (1, 1), (2, 3), (1, 2, 3), (2, 2, 2)]
    )
    def test_matches_composition_oracle(self, k, sizes):
        assert valid_labelings(k, sizes) == labelings_by_composition(k, sizes)

    @settings(max_examples=150, deadline=None)
    @given(
        k=st.integers(min_value=1, max_value=8),
        sizes=st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=4),
        bump=st.integers(min_value=0, max_value=3),
        which=st.integers(min_value=0),
    )
    def test_monotone_in_each_set_size_and_bounded_by_power(self, k, sizes, bump, which):
        sizes = tuple(sizes)
        base = valid_labelings(k, sizes)
        pool = sum(sizes)
        assert base <= pool**k
        if len(sizes) == 1:
            assert base == pool**k
        index = which % len(sizes)
        grown = tuple(
            s + bump if i == index else s for i, s in enumerate(sizes)
        )
        assert valid_labelings(k, grown) >= base


class TestArrangements:
    def test_four_cells_two_singletons(self):
        assert arrangements(4, 2, (1, 1)) == 12

    def test_one_cell_one_element(self):
        assert arrangements(1, 1, (1,)) == 1

    def test_zero_propagates_from_labelings(self):
        assert arrangements(4, 2, (1, 1, 1)) == 0

    def test_rejects_k_above_n(self):
        with pytest.raises(ValueError):
            arrangements(3, 4, (1, 1))


class TestTotalSpace:
    def test_singleton_space(self):
        result = total_space(SpaceConfig(1, (1,), 1, 1))
        assert result.total == 1
        assert result.entropy_bits == 0.0

    def test_prototype_matches_golden_value_and_independent_recount(self):
        config = SpaceConfig(16, (40, 90, 50), 3, 16)
        result = total_space(config)
        golden = json.loads(GOLDEN_PATH.read_text())
        assert result.total == int(golden["total"])
        assert abs(result.entropy_bits - golden["entropy_bits"]) < 1e-9
        # Cross-check the headline number against the composition-based
        # counting route, which never touches inclusion-exclusion.
        recount = sum(
            math.comb(16, k) * labelings_by_composition(k, (40, 90, 50))
            for k in range(3, 17)
        )
        assert result.total == recount
        assert 119.5 <= result.entropy_bits <= 120.5

    def test_total_is_sum_of_per_k(self):
        result = total_space(SpaceConfig(6, (2, 2), 2, 5))
        assert result.total == sum(result.per_k.values())

    def test_small_config_equals_brute_force(self):
        config = SpaceConfig(4, (1, 1), 2, 4)
        assert total_space(config).total == brute_force_space(config)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SpaceConfig(4, (), 1, 2)
        with pytest.raises(ValueError):
            SpaceConfig(4, (1, 1), 1, 2)  # k_min below set count
        with pytest.raises(ValueError):
            SpaceConfig(4, (1, 1), 3, 2)
        with pytest.raises(ValueError):
            SpaceConfig(4, (1, 1), 2, 5)  # k_max above cells

    def test_entropy_matches_total_within_1e9_relative(self):
        result = total_space(SpaceConfig(16, (40, 90, 50), 3, 16))
        reconstructed = 2.0 ** (result.entropy_bits - result.total.bit_length())
        exact = result.total / 2**result.total.bit_length()
        assert abs(reconstructed - exact) / exact <= 1e-9


class TestBruteForceSpace:
    def test_four_cells_two_singletons(self):
        assert brute_force_space(SpaceConfig(4, (1, 1), 2, 2)) == 12

    def test_two_cells_one_doubleton(self):
        assert brute_force_space(SpaceConfig(2, (2,), 1, 2)) == 8

    def test_matches_direct_label_enumeration(self):
        for n, sizes, k_min, k_max in [
            (3, (1, 2), 2, 3),
            (4, (2, 1), 2, 4),
            (4, (1, 1, 1), 3, 4),
            (5, (2, 2), 2, 4),
        ]:
            assert brute_force_space(
                SpaceConfig(n, sizes, k_min, k_max)
            ) == space_by_label_enumeration(n, sizes, k_min, k_max)

    def test_rejects_oversized_inputs(self):
        with pytest.raises(ValueError):
            brute_force_space(SpaceConfig(9, (1, 1), 2, 3))
        with pytest.raises(ValueError):
            brute_force_space(SpaceConfig(8, (5, 5), 2, 8))


class TestIntLog2:
    def test_exact_on_powers_of_two(self):
        for exponent in (0, 1, 10, 53, 64, 100, 500, 2000):
            assert int_log2(2**exponent) == float(exponent)

    def test_matches_math_log2_on_small_values(self):
        for value in range(1, 4096):
            assert int_log2(value) == pytest.approx(math.log2(value), abs=1e-12)

    def test_huge_value_does_not_overflow(self):
        value = 3**5000
        expected = 5000 * math.log2(3)
        assert int_log2(value) == pytest.approx(expected, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            int_log2(0)
