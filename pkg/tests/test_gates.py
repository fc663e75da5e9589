"""Gate protocols: outcome tables, corrections, budgets, geometric sequences."""

import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qubuslab import busim, gates
from qubuslab.busim import QubitState, fidelity
from qubuslab.oracles import graph_state_vector

ODD_BELL = QubitState(2, np.array([0, 1, 1, 0]) / math.sqrt(2))
EVEN_BELL = QubitState(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
BETA_STAR = math.sqrt(math.pi / 8.0)


def corrected(outcome):
    return gates.apply_corrections(outcome.posterior, outcome.corrections)


class TestErrorBudget:
    def test_momentum_value(self):
        budget = gates.error_budget(1000.0, 0.003)
        assert budget.p_err_momentum == pytest.approx(
            0.0013499179750735917, rel=1e-12
        )

    def test_position_value(self):
        budget = gates.error_budget(1.0e6, 0.003)
        assert budget.p_err_position == pytest.approx(
            3.3977270703315683e-06, rel=1e-12
        )

    def test_vacuum_value_at_separation_two(self):
        budget = gates.error_budget(2000.0, 0.001)
        assert budget.p_err_vacuum == pytest.approx(
            1.1253517471925912e-07, rel=1e-12
        )

    def test_regime_flag_at_pi(self):
        assert gates.error_budget(500.0, 0.0063).momentum_regime_ok
        assert 0.5 * math.erfc(math.pi / math.sqrt(2)) < 1e-3
        assert not gates.error_budget(1000.0, 0.003).momentum_regime_ok

    def test_conclusion_regime_point(self):
        """Weak-interaction working point: alpha 1e3, theta 1e-3."""
        budget = gates.error_budget(1000.0, 0.001)
        assert budget.separation_parameter == pytest.approx(1.0)
        assert budget.p_err_momentum == pytest.approx(
            0.5 * math.erfc(1000.0 * math.sin(0.001) / math.sqrt(2)), rel=1e-12
        )
        assert budget.p_err_vacuum == pytest.approx(math.exp(-4.0), rel=1e-12)

    def test_degenerate_angle(self):
        budget = gates.error_budget(1.0, 0.0)
        assert budget.p_err_momentum == pytest.approx(0.5)
        assert budget.p_err_position == pytest.approx(0.5)
        assert budget.p_err_vacuum == pytest.approx(1.0)

    def test_alpha_positive_required(self):
        with pytest.raises(ValueError):
            gates.error_budget(0.0, 0.1)


class TestMomentumParityGate:
    def test_outcome_table(self):
        outs = {o.label: o for o in gates.momentum_parity_outcomes(1000.0, 0.003)}
        assert outs["odd-bell"].probability == pytest.approx(0.5, abs=1e-12)
        assert outs["product-00"].probability == pytest.approx(0.25, abs=1e-12)
        assert outs["product-11"].probability == pytest.approx(0.25, abs=1e-12)
        assert fidelity(corrected(outs["odd-bell"]), ODD_BELL) >= 1 - 1e-12

    def test_forced_and_sampled_selection(self):
        out = gates.parity_gate_momentum(1000.0, 0.003, outcome="odd-bell")
        assert out.label == "odd-bell"
        sampled = gates.parity_gate_momentum(
            1000.0, 0.003, outcome="sampled", rng=np.random.default_rng(0)
        )
        assert sampled.label in ("odd-bell", "product-00", "product-11")

    def test_product_input_is_certain(self):
        out = gates.momentum_parity_outcomes(1000.0, 0.003, QubitState.basis(2, 0))
        assert len(out) == 1
        assert out[0].label == "product-00"
        assert out[0].probability == pytest.approx(1.0)

    @pytest.mark.parametrize("alpha,theta", [(50.0, 0.3), (4000.0, 0.0007)])
    def test_probabilities_independent_of_parameters(self, alpha, theta):
        """Outcome weights depend on the branch structure, not on the bus."""
        outs = {o.label: o.probability
                for o in gates.momentum_parity_outcomes(alpha, theta)}
        assert outs["odd-bell"] == pytest.approx(0.5, abs=1e-12)
        pos = {o.label: o.probability
               for o in gates.position_parity_outcomes(alpha, theta)}
        assert pos["even-bell"] == pytest.approx(0.5, abs=1e-12)
        three = {o.label: o.probability
                 for o in gates.three_qubit_outcomes(alpha, theta)}
        assert three["ghz"] == pytest.approx(0.25, abs=1e-12)

    def test_warning_in_degenerate_regime(self):
        with pytest.warns(UserWarning, match="poorly separated"):
            gates.parity_gate_momentum(1.0, 0.0, outcome="mixed")

    def test_skewed_input_weights(self):
        """Outcome weights are the input populations of each parity sector."""
        amps = np.array([0.8, 0.4, 0.2, 0.4j])
        state = QubitState(2, amps, normalize=True)
        outs = {o.label: o for o in gates.momentum_parity_outcomes(100.0, 0.1, state)}
        norm2 = float(np.vdot(amps, amps).real)
        assert outs["product-00"].probability == pytest.approx(0.64 / norm2, abs=1e-12)
        assert outs["odd-bell"].probability == pytest.approx(0.20 / norm2, abs=1e-12)
        assert outs["product-11"].probability == pytest.approx(0.16 / norm2, abs=1e-12)
        post = outs["odd-bell"].posterior.amplitudes
        assert post[1] / post[2] == pytest.approx(2.0, abs=1e-12)

    def test_wrong_register_size(self):
        with pytest.raises(ValueError):
            gates.momentum_parity_outcomes(100.0, 0.01, QubitState.plus(3))


class TestPositionParityGate:
    def test_even_and_odd_outcomes(self):
        outs = {o.label: o for o in gates.position_parity_outcomes(100.0, 0.3)}
        assert outs["even-bell"].probability == pytest.approx(0.5, abs=1e-12)
        assert outs["odd-bell"].probability == pytest.approx(0.5, abs=1e-12)
        assert fidelity(corrected(outs["even-bell"]), EVEN_BELL) >= 1 - 1e-9
        assert fidelity(corrected(outs["odd-bell"]), ODD_BELL) >= 1 - 1e-9

    def test_degenerate_angle_single_peak(self):
        outs = gates.position_parity_outcomes(100.0, 0.0)
        assert len(outs) == 1
        assert outs[0].label == "mixed"


class TestBucketParityGate:
    def test_vacuum_outcome(self):
        outs = gates.bucket_parity_outcomes(2.0, 0.4)
        vac = outs[0]
        assert vac.label == "odd-bell"
        assert fidelity(vac.posterior, ODD_BELL) >= 1 - 1e-12
        overlap = math.exp(-4.0 * 2.0**2 * math.sin(0.4) ** 2)
        assert vac.probability == pytest.approx(0.5 + 0.5 * overlap, rel=1e-9)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_resolved_posteriors_reach_canonical_bells(self, n):
        outs = gates.bucket_parity_outcomes(2.0, 0.4, number_resolving=True, n_max=6)
        by_label = {o.label: o for o in outs}
        o = by_label[f"even-bell-{n}"]
        sign = 1.0 if n % 2 == 0 else -1.0
        target = QubitState(2, np.array([1, 0, 0, sign]) / math.sqrt(2))
        assert fidelity(corrected(o), target) >= 1 - 1e-12

    def test_resolved_weights_follow_displaced_poisson(self):
        alpha, theta = 2.0, 0.4
        lam = abs(alpha * (np.exp(2j * theta) - 1)) ** 2
        outs = gates.bucket_parity_outcomes(alpha, theta, number_resolving=True, n_max=4)
        for o in outs[1:]:
            n = int(o.label.rsplit("-", 1)[1])
            expect = 0.5 * math.exp(-lam) * lam**n / math.factorial(n)
            assert o.probability == pytest.approx(expect, rel=1e-9)

    def test_click_outcome_is_heralded_failure(self):
        outs = gates.bucket_parity_outcomes(2.0, 0.4)
        click = outs[1]
        assert click.label == "click"
        overlap = math.exp(-4.0 * 2.0**2 * math.sin(0.4) ** 2)
        assert click.probability == pytest.approx(0.5 - 0.5 * overlap, rel=1e-9)


class TestThreeQubitGate:
    def test_outcome_probabilities(self):
        outs = {o.label: o for o in gates.three_qubit_outcomes(1000.0, 0.003)}
        assert outs["ghz"].probability == pytest.approx(0.25, abs=1e-12)
        assert outs["bell-q3-0"].probability == pytest.approx(0.25, abs=1e-12)
        assert outs["bell-q3-1"].probability == pytest.approx(0.25, abs=1e-12)
        assert outs["product-001"].probability == pytest.approx(0.125, abs=1e-12)
        assert outs["product-110"].probability == pytest.approx(0.125, abs=1e-12)

    def test_ghz_posterior(self):
        outs = {o.label: o for o in gates.three_qubit_outcomes(1000.0, 0.003)}
        amps = np.zeros(8)
        amps[0] = amps[7] = 1 / math.sqrt(2)
        assert fidelity(corrected(outs["ghz"]), QubitState(3, amps)) >= 1 - 1e-12

    def test_bell_posterior_carries_third_qubit(self):
        """The heralded pair comes with qubit 3 in the matching basis state."""
        outs = {o.label: o for o in gates.three_qubit_outcomes(1000.0, 0.003)}
        amps0 = np.zeros(8)
        amps0[0b010] = amps0[0b100] = 1 / math.sqrt(2)
        assert fidelity(corrected(outs["bell-q3-0"]), QubitState(3, amps0)) >= 1 - 1e-12
        amps1 = np.zeros(8)
        amps1[0b011] = amps1[0b101] = 1 / math.sqrt(2)
        assert fidelity(corrected(outs["bell-q3-1"]), QubitState(3, amps1)) >= 1 - 1e-12

    def test_exact_probability_fractions(self):
        outs = gates.three_qubit_outcomes(1000.0, 0.003)
        fracs = sorted(o.exact_probability for o in outs)
        assert fracs == [
            Fraction(1, 8), Fraction(1, 8),
            Fraction(1, 4), Fraction(1, 4), Fraction(1, 4),
        ]


class TestCascade:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_pair_success_scaling(self, n):
        assert gates.cascade_pair_success(n) == Fraction(2 ** (n - 1) - 1, 2 ** (n - 1))

    def test_gate_time_doubles(self):
        times = [gates.cascade_gate_time(n) for n in range(2, 8)]
        assert times == [2, 4, 8, 16, 32, 64]

    def test_four_qubit_peak_count(self):
        outs = gates.cascade_outcomes(4, 1000.0, 0.001)
        assert len(outs) == 9
        assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-12)
        singles = [o for o in outs if o.exact_probability == Fraction(1, 16)]
        assert len(singles) == 2  # only the two extreme product states fail

    def test_two_qubit_reduction(self):
        """The n=2 cascade is a parity gate with success chance 1/2."""
        assert gates.cascade_pair_success(2) == Fraction(1, 2)
        outs = gates.cascade_outcomes(2, 1000.0, 0.003)
        assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-12)
        entangled = [o for o in outs if o.label not in ("product-01", "product-10")]
        assert sum(o.probability for o in entangled) == pytest.approx(0.5, abs=1e-12)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            gates.cascaded_gate(1, 100.0, 0.01)

    def test_probability_sum_invariant(self):
        for n in (3, 5, 8):
            outs = gates.cascade_outcomes(n, 200.0, 0.002)
            assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-9)

    def test_sampled_frequencies_match_table(self):
        """Sampling the heralded outcome reproduces the exact weights."""
        rng = np.random.default_rng(40)
        counts = {}
        n_draws = 4000
        for _ in range(n_draws):
            out = gates.three_qubit_gate(1000.0, 0.003, outcome="sampled", rng=rng)
            counts[out.label] = counts.get(out.label, 0) + 1
        expected = {o.label: o.probability
                    for o in gates.three_qubit_outcomes(1000.0, 0.003)}
        for label, prob in expected.items():
            stderr = math.sqrt(prob * (1 - prob) / n_draws)
            assert counts.get(label, 0) / n_draws == pytest.approx(
                prob, abs=4 * stderr
            )


class TestGeometricCz:
    def test_canonical_coupling(self):
        res = gates.geometric_cz(BETA_STAR, 1j * BETA_STAR)
        assert res.bus_spread == 0.0
        assert res.cz_fidelity == pytest.approx(1.0, abs=1e-12)

    def test_twenty_random_inputs(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            state = QubitState(2, v, normalize=True)
            res = gates.geometric_cz(1j * BETA_STAR, BETA_STAR, state)
            cz = state.amplitudes * np.array([1, 1, 1, -1])
            fid = fidelity(
                gates.apply_corrections(res.posterior, res.corrections),
                QubitState(2, cz, normalize=True),
            )
            assert fid >= 1 - 1e-12

    def test_zero_area_is_identity(self):
        state = QubitState(2, np.array([0.5, 0.5j, -0.5, 0.5]), normalize=True)
        res = gates.geometric_cz(0.4, 0.7, state)  # conj(b1) b2 real
        assert fidelity(res.posterior, state) == pytest.approx(1.0, abs=1e-12)
        assert res.corrections is None

    def test_branch_phase_signs(self):
        """Opposite-sign branches pick up the conjugate geometric phase."""
        res = gates.geometric_cz(BETA_STAR, 1j * BETA_STAR)
        amps = res.posterior.amplitudes * 2.0
        area = 2.0 * np.imag(np.conj(BETA_STAR) * 1j * BETA_STAR)
        assert amps[0] == pytest.approx(np.exp(1j * area), abs=1e-12)
        assert amps[1] == pytest.approx(np.exp(-1j * area), abs=1e-12)


class TestCompiledConditionalDisplacement:
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_direct_displacement(self, seed):
        rng = np.random.default_rng(seed)
        alpha = float(rng.uniform(0.2, 1.5))
        theta = float(rng.uniform(-1.0, 1.0))
        seq, corr = gates.compile_conditional_displacement(alpha, theta, 0)
        assert corr == ()
        start = busim.attach_bus(QubitState.plus(1), complex(rng.normal(), rng.normal()))
        via = gates.run_sequence(start, seq)
        direct = busim.apply_conditional_displacement(
            start, 0, 2j * alpha * math.sin(theta)
        )
        assert_allclose(via.bus, direct.bus, atol=1e-12)
        assert_allclose(via.coeff, direct.coeff, atol=1e-12)

    def test_zero_angle_collapses(self):
        seq, _ = gates.compile_conditional_displacement(0.8, 0.0, 0)
        start = busim.attach_bus(QubitState.plus(1), 0.3)
        out = gates.run_sequence(start, seq)
        assert_allclose(out.bus, start.bus, atol=1e-12)

    def test_plus_branch_lands_at_offset(self):
        alpha, theta = 0.9, 0.4
        seq, _ = gates.compile_conditional_displacement(alpha, theta, 0)
        start = busim.attach_bus(QubitState.basis(1, 0), 0.25 - 0.1j)
        out = gates.run_sequence(start, seq)
        assert out.bus[0] == pytest.approx(
            0.25 - 0.1j + 2j * alpha * math.sin(theta), abs=1e-12
        )


def run_and_correct(maker, n, beta, start_bus=0.0):
    seq, corrections = maker(n, beta)
    out = gates.run_sequence(busim.attach_bus(QubitState.plus(n), start_bus), seq)
    return out, gates.apply_corrections(busim.extract_qubits(out), corrections), seq


class TestStarSequence:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_reaches_star_graph(self, n):
        out, state, seq = run_and_correct(gates.star_sequence, n, BETA_STAR, 0.45)
        assert busim.bus_spread(out) == 0.0
        target = graph_state_vector(n, [(0, k) for k in range(1, n)])
        assert abs(np.vdot(target, state.amplitudes)) ** 2 >= 1 - 1e-12

    def test_two_interactions_per_qubit(self):
        seq, _ = gates.star_sequence(5, BETA_STAR)
        counts = {}
        for step in seq.steps:
            counts[step.qubit] = counts.get(step.qubit, 0) + 1
        assert counts == {q: 2 for q in range(5)}

    def test_reduces_to_geometric_cz(self):
        _, state, _ = run_and_correct(gates.star_sequence, 2, BETA_STAR)
        res = gates.geometric_cz(1j * BETA_STAR, BETA_STAR)
        direct = gates.apply_corrections(res.posterior, res.corrections)
        assert fidelity(state, direct) == pytest.approx(1.0, abs=1e-12)

    def test_spread_zero_any_beta(self):
        for n, beta in ((3, 0.21), (7, 1.3), (12, 0.77)):
            seq, _ = gates.star_sequence(n, beta)
            out = gates.run_sequence(
                busim.attach_bus(QubitState.plus(n), 0.19 - 0.6j), seq
            )
            assert busim.bus_spread(out) == 0.0


class TestChainSequence:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_reaches_linear_cluster(self, n):
        out, state, seq = run_and_correct(gates.chain_sequence, n, BETA_STAR, 0.45)
        assert busim.bus_spread(out) == 0.0
        target = graph_state_vector(n, [(k, k + 1) for k in range(n - 1)])
        assert abs(np.vdot(target, state.amplitudes)) ** 2 >= 1 - 1e-12

    def test_bus_tracks_at_most_two_qubits(self):
        """After a qubit's second kick the bus forgets everything before it."""
        n = 6
        seq, _ = gates.chain_sequence(n, BETA_STAR)
        state = busim.attach_bus(QubitState.plus(n), 0.3)
        done_second = set()
        seen_counts = {}
        for step in seq.steps:
            state = busim.run_displacement_program(
                state, [(step.qubit, step.amount)]
            )
            seen_counts[step.qubit] = seen_counts.get(step.qubit, 0) + 1
            if seen_counts[step.qubit] == 2:
                done_second.add(step.qubit)
                # bus must be identical across sign assignments of finished qubits
                buses = {}
                for bits, (_, bus) in state.branch_map().items():
                    key = tuple(
                        (bits >> (n - 1 - q)) & 1
                        for q in range(n)
                        if q not in done_second
                    )
                    buses.setdefault(key, []).append(complex(bus))
                for group in buses.values():
                    spread = max(
                        abs(a - b) for a in group for b in group
                    )
                    assert spread <= 1e-12

    def test_spread_zero_up_to_twelve_qubits(self):
        rng = np.random.default_rng(3)
        for n in (6, 9, 12):
            beta = float(rng.uniform(0.1, 1.2))
            seq, _ = gates.chain_sequence(n, beta)
            out = gates.run_sequence(
                busim.attach_bus(QubitState.plus(n), complex(rng.normal(), rng.normal())),
                seq,
            )
            assert busim.bus_spread(out) == 0.0


class TestCorrectionSolver:
    def test_solves_pure_z_frame(self):
        state = QubitState.plus(2)
        rotated = busim.apply_z_phase(busim.apply_z_phase(state, 0, 0.7), 1, -0.4)
        corr = gates.solve_local_z_corrections(rotated, state)
        assert corr is not None
        assert fidelity(gates.apply_corrections(rotated, corr), state) >= 1 - 1e-12

    def test_rejects_unreachable_target(self):
        plus = QubitState.plus(2)
        bell = EVEN_BELL
        assert gates.solve_local_z_corrections(plus, bell) is None

    def test_partial_support(self):
        post = QubitState(2, np.array([0, 1, 1j, 0]) / math.sqrt(2))
        corr = gates.solve_local_z_corrections(post, ODD_BELL)
        assert corr is not None
        assert fidelity(gates.apply_corrections(post, corr), ODD_BELL) >= 1 - 1e-12
