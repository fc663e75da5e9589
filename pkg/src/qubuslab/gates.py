"""Entangling-gate protocols built from single bus interactions.

Every protocol enumerates its exhaustive outcome table (label, exact
probability from branch enumeration, posterior, local corrections) and can
also sample or force one outcome.  Probabilities are properties of the
branch structure alone; the dependence on the bus amplitude and interaction
angle only enters the separately reported error budget.

Local corrections use Z phases diag(1, e^{i angle}) and Paulis; applying an
outcome's corrections to its posterior reaches the canonical target state up
to a global phase.
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import busim
from .busim import HybridState, QubitState

__all__ = [
    "Correction",
    "GateOutcome",
    "GateErrorBudget",
    "Interaction",
    "InteractionSequence",
    "apply_corrections",
    "error_budget",
    "run_sequence",
    "momentum_parity_outcomes",
    "parity_gate_momentum",
    "position_parity_outcomes",
    "parity_gate_position",
    "bucket_parity_outcomes",
    "parity_gate_bucket",
    "three_qubit_outcomes",
    "three_qubit_gate",
    "cascade_outcomes",
    "cascaded_gate",
    "cascade_pair_success",
    "cascade_gate_time",
    "geometric_cz",
    "compile_conditional_displacement",
    "star_sequence",
    "chain_sequence",
    "solve_local_z_corrections",
]

PEAK_ERROR_WARN = 0.1


# ---------------------------------------------------------------------------
# corrections


@dataclass(frozen=True)
class Correction:
    """One single-qubit correction: a Pauli or a Z phase angle."""

    qubit: int
    op: str  # "X", "Y", "Z", or "phase"
    angle: float | None = None

    def __post_init__(self):
        if self.op == "phase" and self.angle is None:
            raise ValueError("phase correction needs an angle")
        if self.op not in ("X", "Y", "Z", "phase"):
            raise ValueError(f"unsupported correction op {self.op!r}")


def apply_corrections(state: QubitState, corrections) -> QubitState:
    for c in corrections:
        if c.op == "phase":
            state = busim.apply_z_phase(state, c.qubit, c.angle)
        else:
            state = busim.apply_pauli(state, c.qubit, c.op)
    return state


def solve_local_z_corrections(
    posterior: QubitState, target: QubitState, tol: float = 1e-9
):
    """Per-qubit Z phases mapping posterior onto target up to a global phase.

    Works on the common support of the two states; returns None when the
    supports differ, the magnitudes disagree, or no product of single-qubit
    phases reproduces the amplitude ratios.
    """
    n = posterior.qubit_count
    a = posterior.amplitudes
    t = target.amplitudes
    support = np.flatnonzero(np.abs(a) > tol)
    if not np.array_equal(support, np.flatnonzero(np.abs(t) > tol)):
        return None
    ratios = t[support] / a[support]
    if np.max(np.abs(np.abs(ratios) - np.abs(ratios[0]))) > 1e-6:
        return None
    phis = np.angle(ratios / ratios[0])
    rows = np.array(
        [[(int(b) >> (n - 1 - q)) & 1 for q in range(n)] for b in support],
        dtype=np.float64,
    )
    rows = rows - rows[0]
    deltas, *_ = np.linalg.lstsq(rows, phis, rcond=None)
    if not _phases_match(a, t, support, deltas, n, tol):
        deltas = _grid_search_phases(a, t, support, n, tol)
        if deltas is None:
            return None
    return tuple(
        Correction(q, "phase", float(d))
        for q, d in enumerate(deltas)
        if abs(cmath.exp(1j * d) - 1.0) > 1e-12
    )


def _phases_match(a, t, support, deltas, n, tol) -> bool:
    corrected = a[support].astype(np.complex128).copy()
    for q, d in enumerate(deltas):
        bit = (support >> (n - 1 - q)) & 1
        corrected *= np.exp(1j * d * bit)
    g = t[support[0]] / corrected[0]
    return bool(np.max(np.abs(g * corrected - t[support])) <= math.sqrt(tol))


def _grid_search_phases(a, t, support, n, tol):
    grid = [k * math.pi / 4.0 for k in range(8)]
    for combo in itertools.product(grid, repeat=n):
        if _phases_match(a, t, support, combo, n, tol):
            return np.array(combo)
    return None


# ---------------------------------------------------------------------------
# outcome and budget records


@dataclass(frozen=True)
class GateOutcome:
    """One heralded protocol outcome.

    ``probability`` is exact from branch enumeration; ``window_probability``
    (when set) additionally accounts for Gaussian tail leakage across the
    homodyne decision thresholds.  ``gate_time`` counts interaction time in
    units of one unit-angle bus rotation.
    """

    label: str
    probability: float
    posterior: QubitState
    corrections: tuple = ()
    gate_time: float = 0.0
    window_probability: float | None = None
    exact_probability: Fraction | None = None


@dataclass(frozen=True)
class GateErrorBudget:
    """Closed-form misassignment and false-vacuum error values.

    ``p_err_momentum`` and ``p_err_position`` are midpoint-threshold errors
    for Gaussian peaks whose phase-space angles differ by theta;
    ``p_err_vacuum`` is the false-vacuum weight exp(-4 (alpha theta)^2).
    """

    p_err_momentum: float
    p_err_position: float
    p_err_vacuum: float
    separation_parameter: float
    momentum_regime_ok: bool

    def __post_init__(self):
        if not (0.0 <= self.p_err_momentum <= 0.5 + 1e-12):
            raise ValueError("momentum error outside [0, 1/2]")
        if not (0.0 <= self.p_err_position <= 0.5 + 1e-12):
            raise ValueError("position error outside [0, 1/2]")
        if not (0.0 <= self.p_err_vacuum <= 1.0 + 1e-12):
            raise ValueError("vacuum error outside [0, 1]")


def error_budget(alpha: float, theta: float) -> GateErrorBudget:
    """Evaluate the three closed-form error expressions at (alpha, theta)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return GateErrorBudget(
        p_err_momentum=0.5 * math.erfc(alpha * math.sin(theta) / math.sqrt(2.0)),
        p_err_position=0.5 * math.erfc(alpha * (1.0 - math.cos(theta)) / math.sqrt(2.0)),
        p_err_vacuum=math.exp(-4.0 * abs(alpha * theta) ** 2),
        separation_parameter=alpha * theta,
        momentum_regime_ok=alpha * math.sin(theta) >= math.pi,
    )


def _warn_if_unresolved(alpha: float, theta: float, which: str) -> None:
    budget = error_budget(alpha, theta)
    err = budget.p_err_momentum if which == "momentum" else budget.p_err_position
    if err >= PEAK_ERROR_WARN:
        warnings.warn(
            f"{which} peaks poorly separated at alpha={alpha}, theta={theta}: "
            f"misassignment error {err:.3g}",
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# interaction sequences


@dataclass(frozen=True)
class Interaction:
    """One bus primitive: a conditional rotation or a (conditional) displacement."""

    kind: str  # "rotate" or "displace"
    amount: complex
    qubit: int | None = None  # None = unconditional (displacements only)

    def __post_init__(self):
        if self.kind not in ("rotate", "displace"):
            raise ValueError(f"unknown interaction kind {self.kind!r}")
        if self.kind == "rotate" and self.qubit is None:
            raise ValueError("rotations must be conditioned on a qubit")


@dataclass(frozen=True)
class InteractionSequence:
    register_size: int
    steps: tuple

    def __post_init__(self):
        if not self.steps:
            raise ValueError("sequence must contain at least one interaction")
        for s in self.steps:
            if s.qubit is not None and not 0 <= s.qubit < self.register_size:
                raise ValueError(f"qubit {s.qubit} outside register")

    def displacement_only(self) -> bool:
        return all(s.kind == "displace" for s in self.steps)


def run_sequence(state: HybridState, sequence: InteractionSequence) -> HybridState:
    """Execute a sequence on a hybrid state.

    Displacement-only sequences go through the exact out-and-back program so
    closed loops restore the bus amplitude bit for bit; mixed sequences are
    applied one primitive at a time.
    """
    if state.qubit_count != sequence.register_size:
        raise ValueError("register size mismatch")
    if sequence.displacement_only():
        return busim.run_displacement_program(
            state, [(s.qubit, s.amount) for s in sequence.steps]
        )
    for s in sequence.steps:
        if s.kind == "rotate":
            state = busim.apply_conditional_rotation(state, s.qubit, float(s.amount.real))
        elif s.qubit is None:
            state = busim.apply_displacement(state, s.amount)
        else:
            state = busim.apply_conditional_displacement(state, s.qubit, s.amount)
    return state


# ---------------------------------------------------------------------------
# canonical targets


def _bell_odd() -> QubitState:
    return QubitState(2, np.array([0, 1, 1, 0]) / math.sqrt(2.0))


def _bell_even(sign: int = 1) -> QubitState:
    return QubitState(2, np.array([1, 0, 0, sign]) / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# homodyne parity gates


def _prepare(alpha, theta, state, n):
    if state is None:
        state = QubitState.plus(n)
    if state.qubit_count != n:
        raise ValueError(f"protocol needs a {n}-qubit register")
    hybrid = busim.attach_bus(state, alpha)
    return state, hybrid


def _pick(outcomes, outcome, rng, weights=None):
    if outcome == "sampled":
        if rng is None:
            raise ValueError("sampling an outcome requires an rng")
        w = weights if weights is not None else [o.probability for o in outcomes]
        idx = rng.choice(len(outcomes), p=np.array(w) / sum(w))
        return outcomes[int(idx)]
    for o in outcomes:
        if o.label == outcome:
            return o
    raise ValueError(
        f"unknown outcome {outcome!r}; expected one of "
        f"{[o.label for o in outcomes]} or 'sampled'"
    )


def _classify_two_qubit(members: frozenset) -> str:
    if members == {1, 2}:
        return "odd-bell"
    if members == {0, 3}:
        return "even-bell"
    if members == {0}:
        return "product-00"
    if members == {3}:
        return "product-11"
    if members == {1}:
        return "product-01"
    if members == {2}:
        return "product-10"
    return "mixed"


def _homodyne_outcomes(hybrid, phi, gate_time, classify, target_for):
    model = busim.homodyne_pdf(hybrid, phi)
    outcomes = []
    for idx, peak in enumerate(model.peaks):
        projected = busim.homodyne_project(hybrid, phi, idx)
        label = classify(peak.members)
        target = target_for(label, peak.members)
        corrections = ()
        if target is not None:
            solved = solve_local_z_corrections(projected.posterior, target)
            if solved is not None:
                corrections = solved
        outcomes.append(
            GateOutcome(
                label=label,
                probability=peak.weight,
                posterior=projected.posterior,
                corrections=corrections,
                gate_time=gate_time,
                window_probability=projected.probability,
            )
        )
    return tuple(outcomes)


def momentum_parity_outcomes(alpha, theta, state: QubitState | None = None):
    """Outcome table of the two-qubit momentum-quadrature parity gate.

    Both qubits rotate the bus by +-theta; the momentum quadrature then
    resolves the odd subspace (unrotated bus) from |00> and |11>.
    """
    state, hybrid = _prepare(alpha, theta, state, 2)
    hybrid = busim.apply_conditional_rotation(hybrid, 0, theta)
    hybrid = busim.apply_conditional_rotation(hybrid, 1, theta)

    def target_for(label, members):
        if label == "odd-bell":
            return _bell_odd()
        return None

    return _homodyne_outcomes(
        hybrid, math.pi / 2.0, 2.0, _classify_two_qubit, target_for
    )


def parity_gate_momentum(
    alpha, theta, state=None, outcome="sampled", rng=None
) -> GateOutcome:
    _warn_if_unresolved(alpha, theta, "momentum")
    return _pick(momentum_parity_outcomes(alpha, theta, state), outcome, rng)


def position_parity_outcomes(alpha, theta, state: QubitState | None = None):
    """Outcome table of the position-quadrature parity gate.

    The even branches sit at 2 alpha cos(2 theta) and the odd branches at
    2 alpha, so both outcomes project onto entangled parity subspaces."""
    state, hybrid = _prepare(alpha, theta, state, 2)
    hybrid = busim.apply_conditional_rotation(hybrid, 0, theta)
    hybrid = busim.apply_conditional_rotation(hybrid, 1, theta)

    def target_for(label, members):
        if label == "odd-bell":
            return _bell_odd()
        if label == "even-bell":
            return _bell_even()
        return None

    return _homodyne_outcomes(hybrid, 0.0, 2.0, _classify_two_qubit, target_for)


def parity_gate_position(
    alpha, theta, state=None, outcome="sampled", rng=None
) -> GateOutcome:
    _warn_if_unresolved(alpha, theta, "position")
    return _pick(position_parity_outcomes(alpha, theta, state), outcome, rng)


# ---------------------------------------------------------------------------
# bucket (photon detection) parity gate


def bucket_parity_outcomes(
    alpha, theta, state: QubitState | None = None, number_resolving=False, n_max=None
):
    """Outcome table of the displaced-bus photon-detection parity gate.

    The bus is displaced back by -alpha so the odd branches reach the vacuum
    exactly; detection then distinguishes vacuum (odd Bell) from the
    displaced even branches.  With number resolution the photon count n
    heralds (|00> + (-1)^n |11>)/sqrt(2) up to the reported corrections, with
    weights sampled from the displaced-branch photon distribution.
    """
    state, hybrid = _prepare(alpha, theta, state, 2)
    hybrid = busim.apply_conditional_rotation(hybrid, 0, theta)
    hybrid = busim.apply_conditional_rotation(hybrid, 1, theta)
    hybrid = busim.apply_displacement(hybrid, -complex(alpha))

    vac = busim.measure_bucket(hybrid, outcome="vacuum")
    outcomes = [
        GateOutcome(
            label="odd-bell",
            probability=vac.probability,
            posterior=vac.posterior,
            corrections=(),
            gate_time=2.0,
        )
    ]
    if number_resolving:
        click = busim.measure_bucket(hybrid, outcome="click")
        limit = n_max if n_max is not None else len(click.components)
        for n, pn, post in click.components[:limit]:
            target = _bell_even(1 if n % 2 == 0 else -1)
            corr = solve_local_z_corrections(post, target)
            outcomes.append(
                GateOutcome(
                    label=f"even-bell-{n}",
                    probability=pn,
                    posterior=post,
                    corrections=corr if corr is not None else (),
                    gate_time=2.0,
                )
            )
    else:
        click = busim.measure_bucket(hybrid, outcome="click")
        placeholder = click.components[0][2] if click.components else state
        outcomes.append(
            GateOutcome(
                label="click",
                probability=click.probability,
                posterior=placeholder,
                corrections=(),
                gate_time=2.0,
            )
        )
    return tuple(outcomes)


def parity_gate_bucket(
    alpha, theta, state=None, number_resolving=False, outcome="sampled", rng=None
) -> GateOutcome:
    outcomes = bucket_parity_outcomes(alpha, theta, state, number_resolving)
    if outcome == "sampled" and number_resolving:
        weights = [o.probability for o in outcomes]
        total = sum(weights)
        weights = [w / total for w in weights]
        return _pick(outcomes, "sampled", rng, weights)
    return _pick(outcomes, outcome, rng)


# ---------------------------------------------------------------------------
# three-qubit gate and its cascade generalization


def _cascade_schedule(n: int):
    """Rotation multiples (theta, theta, 2 theta, ..., -2**(n-2) theta)."""
    if n < 2:
        raise ValueError("cascade needs at least two qubits")
    mult = [1, 1] + [2 ** (k - 2) for k in range(3, n + 1)]
    mult[-1] = -(2 ** (n - 2))
    return mult


def cascade_gate_time(n: int) -> int:
    """Interaction time in unit-angle rotations; doubles per added qubit."""
    return sum(abs(m) for m in _cascade_schedule(n))


def _cascade_peaks(n: int):
    """Exact peak table: rotation multiple -> (weight, members)."""
    mult = _cascade_schedule(n)
    peaks: dict[int, list[int]] = {}
    for bits in range(2**n):
        rot = sum(
            m * (1 - 2 * ((bits >> (n - 1 - q)) & 1)) for q, m in enumerate(mult)
        )
        peaks.setdefault(rot, []).append(bits)
    return peaks


def cascade_pair_success(n: int) -> Fraction:
    """Exact chance that qubits 0 and 1 end entangled: 1 - 2**(1-n)."""
    peaks = _cascade_peaks(n)
    success = Fraction(0)
    for members in peaks.values():
        pair_patterns = {((b >> (n - 1)) & 1, (b >> (n - 2)) & 1) for b in members}
        if len(pair_patterns) >= 2:
            success += Fraction(len(members), 2**n)
    return success


def _cascade_label(n: int, members: list[int]) -> str:
    if len(members) == 1:
        return "product-" + format(members[0], f"0{n}b")
    pair_patterns = {((b >> (n - 1)) & 1, (b >> (n - 2)) & 1) for b in members}
    if n == 3 and set(members) == {0, 7}:
        return "ghz"
    if n == 3 and pair_patterns == {(0, 1), (1, 0)}:
        third = members[0] & 1
        return f"bell-q3-{third}"
    if len(members) == 2 and members[0] + members[1] == 2**n - 1:
        return "ghz"
    if len(pair_patterns) >= 2:
        return "entangled"
    return "mixed"


def cascade_outcomes(n: int, alpha, theta, state: QubitState | None = None):
    """Outcome table for the n-qubit single-pass entangler."""
    state, hybrid = _prepare(alpha, theta, state, n)
    for q, m in enumerate(_cascade_schedule(n)):
        hybrid = busim.apply_conditional_rotation(hybrid, q, m * theta)
    gate_time = float(cascade_gate_time(n))
    peaks = _cascade_peaks(n)

    def classify(members: frozenset) -> str:
        return _cascade_label(n, sorted(members))

    def target_for(label, members):
        if label == "ghz" and len(members) == 2:
            amps = np.zeros(2**n, dtype=np.complex128)
            for b in members:
                amps[b] = 1.0 / math.sqrt(2.0)
            return QubitState(n, amps)
        if label.startswith("bell-q3"):
            amps = np.zeros(2**n, dtype=np.complex128)
            for b in members:
                amps[b] = 1.0 / math.sqrt(2.0)
            return QubitState(n, amps)
        return None

    outcomes = _homodyne_outcomes(hybrid, math.pi / 2.0, gate_time, classify, target_for)
    exact = {}
    for rot, members in peaks.items():
        exact[frozenset(members)] = Fraction(len(members), 2**n)
    decorated = []
    for o in outcomes:
        key = frozenset(
            int(b) for b in np.flatnonzero(np.abs(o.posterior.amplitudes) > 1e-12)
        )
        frac = exact.get(key)
        decorated.append(
            GateOutcome(
                label=o.label,
                probability=o.probability,
                posterior=o.posterior,
                corrections=o.corrections,
                gate_time=o.gate_time,
                window_probability=o.window_probability,
                exact_probability=frac,
            )
        )
    return tuple(decorated)


def three_qubit_outcomes(alpha, theta, state: QubitState | None = None):
    """Five-peak outcome table of the theta, theta, -2 theta protocol."""
    return cascade_outcomes(3, alpha, theta, state)


def three_qubit_gate(alpha, theta, state=None, outcome="sampled", rng=None) -> GateOutcome:
    if state is not None and state.qubit_count != 3:
        raise ValueError("protocol needs a 3-qubit register")
    _warn_if_unresolved(alpha, theta, "momentum")
    return _pick(three_qubit_outcomes(alpha, theta, state), outcome, rng)


def cascaded_gate(n: int, alpha, theta, outcome="sampled", rng=None) -> GateOutcome:
    if n < 2:
        raise ValueError("cascade needs at least two qubits")
    _warn_if_unresolved(alpha, theta, "momentum")
    return _pick(cascade_outcomes(n, alpha, theta), outcome, rng)


# ---------------------------------------------------------------------------
# measurement-free geometric gates


def _zz_corrections(pairs, n: int):
    """Z phases turning prod_k exp(i phi_k Z_a Z_b) into controlled-Z gates.

    Each factor exp(i phi Z_a Z_b) equals a controlled-Z up to Z(2 phi) on
    both endpoints exactly when exp(4 i phi) = -1; returns None otherwise.
    """
    totals = [0.0] * n
    for (a, b), phi in pairs:
        if abs(cmath.exp(4j * phi) + 1.0) > 1e-9:
            return None
        totals[a] += 2.0 * phi
        totals[b] += 2.0 * phi
    out = []
    for q, t in enumerate(totals):
        if abs(cmath.exp(1j * t) - 1.0) > 1e-12:
            out.append(Correction(q, "phase", t % (2.0 * math.pi)))
    return tuple(out)


@dataclass(frozen=True)
class GeometricResult:
    posterior: QubitState
    corrections: tuple | None
    cz_fidelity: float | None
    bus_spread: float


def geometric_cz(beta1: complex, beta2: complex, state: QubitState | None = None) -> GeometricResult:
    """Four-displacement loop acting as exp(2 i Im(conj(beta1) beta2) Z1 Z2).

    The loop closes for every branch so the bus disentangles exactly; with
    Im(conj(beta1) beta2) = +-pi/8 the register unitary is a controlled-Z up
    to the reported Z-phase corrections.
    """
    if state is None:
        state = QubitState.plus(2)
    if state.qubit_count != 2:
        raise ValueError("geometric gate couples exactly two qubits")
    seq = InteractionSequence(
        2,
        (
            Interaction("displace", complex(beta1), 0),
            Interaction("displace", complex(beta2), 1),
            Interaction("displace", -complex(beta1), 0),
            Interaction("displace", -complex(beta2), 1),
        ),
    )
    hybrid = run_sequence(busim.attach_bus(state, 0.0), seq)
    spread = busim.bus_spread(hybrid)
    posterior = busim.extract_qubits(hybrid)
    phi = 2.0 * (np.conj(beta1) * beta2).imag
    corrections = _zz_corrections([((0, 1), phi)], 2)
    fid = None
    if corrections is not None:
        cz = state.amplitudes * np.where(np.arange(4) == 3, -1.0, 1.0)
        fid = busim.fidelity(
            apply_corrections(posterior, corrections), QubitState(2, cz)
        )
    return GeometricResult(posterior, corrections, fid, spread)


def compile_conditional_displacement(alpha: float, theta: float, qubit: int):
    """Rotation-displacement sequence equal to a conditional displacement.

    Emits D(alpha cos theta) R(theta Z) D(-2 alpha) R(-theta Z)
    D(alpha cos theta), which composes to the conditional displacement
    D(2 i alpha sin(theta) Z) with no residual branch phase under this
    module's phase conventions, so the correction list is empty.
    """
    if isinstance(alpha, complex) and alpha.imag != 0.0:
        raise ValueError("alpha must be real")
    a = float(alpha.real) if isinstance(alpha, complex) else float(alpha)
    seq = InteractionSequence(
        qubit + 1,
        (
            Interaction("displace", complex(a * math.cos(theta)), None),
            Interaction("rotate", complex(theta), qubit),
            Interaction("displace", complex(-2.0 * a), None),
            Interaction("rotate", complex(-theta), qubit),
            Interaction("displace", complex(a * math.cos(theta)), None),
        ),
    )
    return seq, ()


def star_sequence(n: int, beta: float):
    """Out-and-back displacements generating a star graph centered on qubit 0.

    Qubit 0 is displaced along the imaginary axis and every other qubit along
    the real axis, each exactly twice.  With beta = sqrt(pi/8) the register
    unitary is a controlled-Z from qubit 0 to every leaf, up to the returned
    Z-phase corrections.
    """
    if n < 2:
        raise ValueError("star needs at least two qubits")
    b = float(beta)
    steps = [Interaction("displace", 1j * b, 0)]
    steps += [Interaction("displace", complex(b), q) for q in range(1, n)]
    steps += [Interaction("displace", -1j * b, 0)]
    steps += [Interaction("displace", complex(-b), q) for q in range(1, n)]
    phi = -2.0 * b * b
    corrections = _zz_corrections([((0, q), phi) for q in range(1, n)], n)
    return InteractionSequence(n, tuple(steps)), corrections


def chain_sequence(n: int, beta: float):
    """Interleaved displacements generating a linear cluster state.

    The ordering opens at most two qubits at a time, so the bus carries
    information about at most two neighbours at any point and disentangles
    from each qubit as soon as its second interaction is done.  Couplings
    alternate sign: exp(2 i beta^2 sum_k (-1)^(k+1) Z_k Z_(k+1)) with qubits
    numbered from 0.
    """
    if n < 2:
        raise ValueError("chain needs at least two qubits")
    b = float(beta)

    def direction(q: int) -> complex:
        return 1j * b if q % 2 == 0 else complex(b)

    order: list[tuple[int, int]] = [(0, +1), (1, +1)]
    for q in range(2, n):
        order.append((q - 2, -1))
        order.append((q, +1))
    order.append((n - 2, -1))
    order.append((n - 1, -1))
    steps = tuple(
        Interaction("displace", sign * direction(q), q) for q, sign in order
    )
    pairs = [((k, k + 1), 2.0 * b * b * (1 if k % 2 else -1)) for k in range(n - 1)]
    corrections = _zz_corrections(pairs, n)
    return InteractionSequence(n, steps), corrections
