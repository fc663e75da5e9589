"""Closed-form evaluators: worked values, invariants, quoted-constant flags."""

import math
from fractions import Fraction

import pytest

from qubuslab import analytics as an


class TestJoinYield:
    def test_approx_value(self):
        assert an.join_yield(10, 0.75, "approx") == pytest.approx(
            18.333333333333332, rel=1e-12
        )

    def test_exact_sum_value(self):
        # frozen from direct term-by-term summation
        assert an.join_yield(10, 0.75, "exact-sum") == pytest.approx(
            18.33333420753479, rel=1e-12
        )

    def test_deterministic_gate(self):
        for L in (1, 5, 12):
            assert an.join_yield(L, 1.0, "approx") == 2 * L - 1
            assert an.join_yield(L, 1.0, "exact-sum") == 2 * L - 1

    def test_half_probability_large_chain(self):
        assert an.join_yield(200, 0.5, "approx") == pytest.approx(2 * 200 - 3)

    def test_sum_converges_to_closed_form(self):
        for p in (0.4, 0.6, 0.85):
            gaps = [
                abs(an.join_yield(L, p, "exact-sum") - an.join_yield(L, p, "approx"))
                for L in (10, 20, 40)
            ]
            assert gaps[0] >= gaps[1] >= gaps[2]
            assert gaps[2] <= max(4.0 * (1 - p) ** 40 / p, 1e-11)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            an.join_yield(5, 0.5, "guess")


class TestCriticalLength:
    def test_reference_points(self):
        assert an.critical_length(0.5) == pytest.approx(3.0)
        assert an.critical_length(0.75) == pytest.approx(5.0 / 3.0)
        assert an.critical_length(1.0) == pytest.approx(1.0)

    def test_variants(self):
        v = an.critical_length_variants(0.5)
        assert v["logical-gate"] == pytest.approx(2.0)
        assert v["direct-interaction"] == pytest.approx(4.0)

    def test_minimal_chain_length(self):
        assert an.minimal_chain_length(0.75) == 2
        assert an.minimal_chain_length(0.5) == 4  # next integer above 3

    def test_zero_probability_rejected(self):
        with pytest.raises(ValueError):
            an.critical_length(0.0)


class TestMergeScaling:
    def test_three_quarter_law(self):
        ms = an.merge_scaling(10, 0.75)
        assert ms.n_quoted_law == pytest.approx(8 * 10 - 44 / 3, rel=1e-12)
        # the printed sum agrees at p = 3/4 where its limit is integral
        assert ms.n_sum_floor == pytest.approx(ms.n_quoted_law, rel=1e-12)

    def test_half_law_uses_quoted_build_cost(self):
        ms = an.merge_scaling(10, 0.5)
        assert ms.n_quoted_law == pytest.approx(16 * 10 - 50)
        assert an.merge_n_law(4, 0.5, 4, 14.0) == pytest.approx(14.0)

    def test_half_sum_readings_differ_from_law(self):
        """The printed sum limit log2(3)+1 is non-integral; neither rounding
        reproduces the quoted 16L-50 law."""
        ms = an.merge_scaling(10, 0.5)
        assert ms.n_sum_floor == pytest.approx(12 * 10 - 38)
        assert ms.n_sum_ceil == pytest.approx(44 * 10 - 134)
        assert ms.n_sum_floor != pytest.approx(ms.n_quoted_law)

    def test_time_ceiling_matches_quoted_form(self):
        ms = an.merge_scaling(10, 0.5)
        assert ms.t_sum_ceil == pytest.approx(14 + 2 * math.log2(10 - 3), rel=1e-12)

    def test_minimal_chain_cost_is_inverse_probability(self):
        assert an.merge_n_law(2, 0.75, 2, float(Fraction(4, 3))) == pytest.approx(
            4.0 / 3.0, rel=1e-12
        )

    def test_below_critical_rejected(self):
        with pytest.raises(ValueError):
            an.merge_scaling(1.5, 0.75)


class TestDcScaling:
    def test_survivor_count(self):
        assert an.dc_scaling(0.5, 1024, k=3)["C"] == pytest.approx(16.0)

    def test_per_chain_ops(self):
        vals = an.dc_scaling(0.75, 1, L=9)
        assert vals["N_dc"] == pytest.approx(float(Fraction(388, 27)), rel=1e-12)

    def test_round_zero(self):
        vals = an.dc_scaling(0.75, 100, k=0)
        assert vals == {
            "k": 0, "L": 1, "C": 100.0, "Q": 100.0, "W": 0.0,
            "G": 0.0, "N_dc": 0.0, "T_dc": 0.0,
        }

    def test_identities(self):
        for k in range(1, 9):
            vals = an.dc_scaling(0.6, 4096, k=k)
            assert vals["Q"] == pytest.approx(vals["C"] * (2 ** (k - 1) + 1))
            assert vals["W"] == pytest.approx(4096 - vals["Q"])

    def test_off_grid_length_refused(self):
        with pytest.raises(ValueError):
            an.dc_scaling(0.5, 16, L=10)

    def test_time_is_round_count(self):
        vals = an.dc_scaling(0.5, 256, k=5)
        assert vals["T_dc"] == pytest.approx(1 + math.log2(vals["L"] - 1))


class TestSeqScaling:
    def test_reference_point(self):
        n, t = an.seq_scaling(41, 0.75)
        assert n == pytest.approx(80.0)
        assert t == pytest.approx(41 * 4 / 3 - 4 / 3)

    def test_drift_interpretation(self):
        # one net qubit every two attempts at p = 3/4
        n, _ = an.seq_scaling(3, 0.75)
        assert n == pytest.approx(4.0)

    def test_deterministic_gate(self):
        n, t = an.seq_scaling(10, 1.0, t=2.0)
        assert n == pytest.approx(9.0)
        assert t == pytest.approx(18.0)

    def test_non_growing_rejected(self):
        with pytest.raises(ValueError):
            an.seq_scaling(10, 0.5)


class TestVerticalCost:
    def test_three_quarter_composition(self):
        V, NV = an.vertical_cost(0.75)
        assert V == pytest.approx(14.0 / 3.0, rel=1e-12)
        assert NV == pytest.approx(140.0 / 3.0, rel=1e-12)

    def test_half_composition_flags(self):
        V, NV = an.vertical_cost(0.5)
        assert V == pytest.approx(6.0)
        assert NV == pytest.approx(94.0)
        quoted = an.QUOTED_CONSTANTS["vertical-ops-p-1/2"]
        assert quoted.value == 70.0 and quoted.status == "flagged"

    def test_unit_probability_limit(self):
        assert an.vertical_cost(1.0)[0] == pytest.approx(4.0)

    def test_custom_law(self):
        V, NV = an.vertical_cost(0.75, lambda L: 2.0 * L)
        assert NV == pytest.approx(2 * (2 * 14 / 3) + 4 / 3)


class TestReferenceSeries:
    def test_known_series(self):
        assert an.reference_series("rus-pf-0.6").slope == 185.0
        assert an.reference_series("rus-pf-0.6").intercept == -1115.0
        assert an.reference_series("rus-pf-0.4").slope == 16.6
        assert an.reference_series("paper-8L-44/3").value(10) == pytest.approx(
            65.33333333, rel=1e-9
        )
        assert an.reference_series("linear-optics-p-half").value(10) == pytest.approx(110.0)

    def test_unknown_series(self):
        with pytest.raises(ValueError):
            an.reference_series("mystery")


class TestCrossoverAndConstants:
    def test_crossover_location(self):
        assert an.merge_crossover(0.75) == pytest.approx(255.92141727672606, rel=1e-6)

    def test_dc_cheaper_below_crossover(self):
        merge = an.reference_series("paper-8L-44/3")
        assert an.dc_series_value(129, 0.75) < merge.value(129)
        assert an.dc_series_value(257, 0.75) > merge.value(257)

    def test_flagged_constants_present(self):
        names = {c.name for c in an.flagged_constants()}
        assert "vacuum-error-alpha-theta-2" in names
        assert "vertical-ops-p-1/2" in names
        assert "minimal-build-cost-p-1/2" in names

    def test_rus_vertical_constant_stored(self):
        assert an.QUOTED_CONSTANTS["rus-vertical-ops-pf-0.2"].value == 32.5


class TestScalingPoint:
    def test_sequential_point(self):
        pt = an.scaling_point("sequential", 0.75, L=41)
        assert pt.N == pytest.approx(80.0)
        assert pt.T == pytest.approx(40 / 0.75)

    def test_vertical_point(self):
        pt = an.scaling_point("vertical_link", 0.5)
        assert pt.extras["V"] == pytest.approx(6.0)
        assert pt.N == pytest.approx(2.0)

    def test_dc_point(self):
        pt = an.scaling_point("divide_conquer", 0.5, n=1024, k=3)
        assert pt.extras["C"] == pytest.approx(16.0)
        assert pt.extras["Q"] == pytest.approx(16.0 * 5)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            an.scaling_point("magic", 0.5)
