from fractions import Fraction

import pytest

from csa_floor.oracle import (
    EnumerationTooLarge,
    exact_beta,
    exact_event_probabilities,
)
from csa_floor.stopping_sets import CATALOG_BY_ID, beta_exact

EXACT_CLASSES = ("S1", "S2", "S3", "S4", "S5", "S8")
CHECK_N = (6, 8, 12)


class TestExactBeta:
    def test_s1_at_10(self):
        assert exact_beta(CATALOG_BY_ID["S1"], 10) == Fraction(1, 10)

    def test_s5_at_6(self):
        assert exact_beta(CATALOG_BY_ID["S5"], 6) == Fraction(1, 15)

    def test_s8_at_10(self):
        assert exact_beta(CATALOG_BY_ID["S8"], 10) == Fraction(1, 120)

    @pytest.mark.parametrize("cid", EXACT_CLASSES)
    @pytest.mark.parametrize("n", CHECK_N)
    def test_printed_formulas_exact(self, cid, n):
        sclass = CATALOG_BY_ID[cid]
        assert exact_beta(sclass, n) == beta_exact(sclass, n)

    @pytest.mark.parametrize("n", CHECK_N)
    def test_s7_ratio_is_n_over_n_minus_1(self, n):
        sclass = CATALOG_BY_ID["S7"]
        ratio = exact_beta(sclass, n) / beta_exact(sclass, n)
        assert ratio == Fraction(n, n - 1)

    @pytest.mark.parametrize("n", CHECK_N)
    def test_s6_discrepancy_ratio_recorded(self, n):
        # enumeration of the degree-2 triangle disagrees with the printed
        # formula; the exact count is 8(n-2)/(n^2 (n-1)^2) and the ratio to
        # the printed value stays within the documented band
        sclass = CATALOG_BY_ID["S6"]
        got = exact_beta(sclass, n)
        assert got == Fraction(8 * (n - 2), n**2 * (n - 1) ** 2)
        ratio = got / beta_exact(sclass, n)
        assert Fraction(3, 2) <= ratio <= Fraction(3, 1)

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationTooLarge):
            exact_beta(CATALOG_BY_ID["S8"], 5000)


class TestExactEvents:
    def test_single_degree1_user_always_resolves(self):
        tally = exact_event_probabilities((1,), 7)
        assert tally.unresolved == {0: Fraction(1)}
        assert tally.labels == {}

    def test_two_degree2_users_fail_only_as_s5(self):
        tally = exact_event_probabilities((2, 2), 6)
        assert tally.unresolved[2] == Fraction(1, 15)
        assert tally.unresolved[0] == Fraction(14, 15)
        assert tally.labels == {"S5": Fraction(1, 15)}
        assert tally.unresolved[2] == exact_beta(CATALOG_BY_ID["S5"], 6)

    def test_three_degree2_triangle_probability(self):
        tally = exact_event_probabilities((2, 2, 2), 6)
        assert tally.labels["S6"] == Fraction(32, 900)

    def test_probabilities_sum_to_one_exactly(self):
        for degrees in ((2, 2), (2, 2, 2), (1, 2, 3)):
            tally = exact_event_probabilities(degrees, 6)
            assert sum(tally.unresolved.values()) == Fraction(1)

    def test_degree0_user_labelled(self):
        tally = exact_event_probabilities((0, 1), 5)
        assert tally.unresolved == {1: Fraction(1)}
        assert tally.labels == {"Degree0": Fraction(1)}

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationTooLarge):
            exact_event_probabilities((8, 8, 8), 30)

    def test_degree_larger_than_slots_rejected(self):
        with pytest.raises(ValueError):
            exact_event_probabilities((4,), 3)
