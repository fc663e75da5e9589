"""Exact simulator for qubit registers coupled to a single coherent bus mode.

The joint state of n matter qubits and the bus is always a finite
superposition of (bit-pattern, coherent amplitude) branches, so rotations,
displacements and measurements of the bus all have closed forms.  No Fock
truncation is involved; amplitudes in the 1e3-1e4 range are handled by doing
every coherent-state overlap in the log domain.

Conventions used throughout:

* qubit q of an n-qubit pattern ``bits`` is the bit at position n-1-q, so
  ``bits`` doubles as the index into a dense amplitude vector;
* the Z eigenvalue of a qubit is +1 for bit 0 and -1 for bit 1;
* a displacement by beta maps |gamma> to exp(i Im(beta conj(gamma))) |gamma+beta>;
* a bus rotation by theta maps |gamma> to |gamma e^{i theta}> with no extra phase;
* the quadrature X(phi) = a^dag e^{i phi} + a e^{-i phi} has mean
  2 Re(beta e^{-i phi}) and variance 1 in a coherent state, and its
  eigenfunction phase convention is fixed by :func:`quadrature_overlap`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PhysicalParams",
    "HybridState",
    "QubitState",
    "Peak",
    "PeakModel",
    "HomodyneOutcome",
    "BucketOutcome",
    "init_plus_state",
    "attach_bus",
    "apply_conditional_rotation",
    "apply_conditional_displacement",
    "apply_displacement",
    "run_displacement_program",
    "homodyne_pdf",
    "homodyne_project",
    "measure_bucket",
    "bus_spread",
    "extract_qubits",
    "quadrature_overlap",
    "coherent_overlap",
    "fidelity",
    "apply_z_phase",
    "apply_pauli",
]

NORM_TOL = 1e-9
PEAK_GROUP_TOL = 1e-9
BRANCH_MERGE_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class PhysicalParams:
    """Dispersive coupling parameters of one qubit-bus interaction.

    ``chi`` and ``theta`` are stored exactly as derived: chi = g**2 / delta
    and theta = chi * t_int.
    """

    g: float
    delta: float
    chi: float
    t_int: float
    theta: float

    @classmethod
    def from_coupling(cls, g: float, delta: float, t_int: float) -> "PhysicalParams":
        if delta == 0:
            raise ValueError("detuning must be nonzero in the dispersive limit")
        chi = g**2 / delta
        return cls(g=g, delta=delta, chi=chi, t_int=t_int, theta=chi * t_int)

    def __post_init__(self):
        if self.chi != self.g**2 / self.delta:
            raise ValueError("chi must equal g**2/delta exactly")
        if self.theta != self.chi * self.t_int:
            raise ValueError("theta must equal chi*t_int exactly")


class QubitState:
    """Dense register state: 2**n complex amplitudes, unit L2 norm."""

    __slots__ = ("qubit_count", "amplitudes")

    def __init__(self, qubit_count: int, amplitudes, normalize: bool = False):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2**qubit_count:
            raise ValueError(
                f"expected {2 ** qubit_count} amplitudes, got {amps.shape[0]}"
            )
        nrm = float(np.linalg.norm(amps))
        if normalize:
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / nrm
        elif abs(nrm - 1.0) > 1e-6:
            raise ValueError(f"amplitudes not normalized (norm={nrm!r})")
        self.qubit_count = qubit_count
        self.amplitudes = amps

    @classmethod
    def plus(cls, n: int) -> "QubitState":
        return cls(n, np.full(2**n, 2.0 ** (-n / 2), dtype=np.complex128))

    @classmethod
    def basis(cls, n: int, bits: int) -> "QubitState":
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[bits] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        return f"QubitState(n={self.qubit_count})"


def fidelity(a: QubitState, b: QubitState) -> float:
    """|<a|b>|**2 for two register states."""
    if a.qubit_count != b.qubit_count:
        raise ValueError("register sizes differ")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def apply_z_phase(state: QubitState, qubit: int, angle: float) -> QubitState:
    """diag(1, e^{i angle}) on one qubit."""
    n = state.qubit_count
    _check_qubit(qubit, n)
    bits = np.arange(2**n)
    mask = (bits >> (n - 1 - qubit)) & 1
    amps = state.amplitudes * np.exp(1j * angle * mask)
    return QubitState(n, amps)


def apply_pauli(state: QubitState, qubit: int, pauli: str) -> QubitState:
    n = state.qubit_count
    _check_qubit(qubit, n)
    idx = np.arange(2**n)
    flip = idx ^ (1 << (n - 1 - qubit))
    z_sign = 1 - 2 * ((idx >> (n - 1 - qubit)) & 1)
    amps = state.amplitudes
    if pauli == "X":
        amps = amps[flip]
    elif pauli == "Z":
        amps = amps * z_sign
    elif pauli == "Y":
        amps = amps[flip] * (1j * z_sign)
    else:
        raise ValueError(f"unknown Pauli {pauli!r}")
    return QubitState(n, amps)


class HybridState:
    """Superposition of (bit-pattern, coefficient, bus amplitude) branches.

    There is at most one branch per bit pattern; the constructor merges
    branches whose bits and bus agree to within ``BRANCH_MERGE_TOL``.
    Instances are treated as immutable: every operation returns a new state.
    """

    __slots__ = ("qubit_count", "bits", "coeff", "bus")

    def __init__(self, qubit_count: int, bits, coeff, bus):
        if qubit_count < 1:
            raise ValueError("register must hold at least one qubit")
        bits = np.asarray(bits, dtype=np.int64).reshape(-1)
        coeff = np.asarray(coeff, dtype=np.complex128).reshape(-1)
        bus = np.asarray(bus, dtype=np.complex128).reshape(-1)
        if not (bits.shape == coeff.shape == bus.shape):
            raise ValueError("bits, coeff and bus must have equal lengths")
        if bits.size == 0:
            raise ValueError("state needs at least one branch")
        if bits.min() < 0 or bits.max() >= 2**qubit_count:
            raise ValueError("bit pattern out of range for register size")
        bits, coeff, bus = _merge_branches(bits, coeff, bus)
        self.qubit_count = qubit_count
        self.bits = bits
        self.coeff = coeff
        self.bus = bus

    def branch_count(self) -> int:
        return int(self.bits.size)

    def norm(self) -> float:
        """Norm including bus overlaps between equal-bits branches."""
        total = 0.0
        for group in _groups_by_key(self.bits):
            c = self.coeff[group]
            b = self.bus[group]
            if group.size == 1:
                total += float(abs(c[0]) ** 2)
            else:
                ov = coherent_overlap(b[None, :], b[:, None])
                total += float(np.real(np.einsum("i,j,ij->", c, c.conj(), ov)))
        return math.sqrt(max(total, 0.0))

    def validate(self, tol: float = NORM_TOL) -> None:
        if len(set(self.bits.tolist())) != self.bits.size:
            raise ValueError("duplicate bit patterns with distinct bus amplitudes")
        nrm = self.norm()
        if abs(nrm - 1.0) > tol:
            raise ValueError(f"state norm {nrm!r} outside tolerance {tol}")

    def branch_map(self) -> dict[int, tuple[complex, complex]]:
        return {
            int(b): (complex(c), complex(u))
            for b, c, u in zip(self.bits, self.coeff, self.bus)
        }

    def __repr__(self):
        return f"HybridState(n={self.qubit_count}, branches={self.branch_count()})"


def _merge_branches(bits, coeff, bus):
    order = np.lexsort((bus.real, bus.imag, bits))
    bits, coeff, bus = bits[order], coeff[order], bus[order]
    out_b, out_c, out_u = [], [], []
    for b, c, u in zip(bits, coeff, bus):
        if out_b and out_b[-1] == b and abs(u - out_u[-1]) <= BRANCH_MERGE_TOL:
            out_c[-1] += c
        else:
            out_b.append(int(b))
            out_c.append(complex(c))
            out_u.append(complex(u))
    keep = [i for i, c in enumerate(out_c) if c != 0]
    if not keep:
        raise ValueError("all branches cancelled; zero state")
    return (
        np.array([out_b[i] for i in keep], dtype=np.int64),
        np.array([out_c[i] for i in keep], dtype=np.complex128),
        np.array([out_u[i] for i in keep], dtype=np.complex128),
    )


def _groups_by_key(keys: np.ndarray):
    """Index groups of equal adjacent keys (keys assumed sorted)."""
    boundaries = np.flatnonzero(np.diff(keys)) + 1
    return np.split(np.arange(keys.size), boundaries)


def _check_qubit(q: int, n: int) -> None:
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n}-qubit register")


def _signs(bits: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Z eigenvalues (+1 for bit 0, -1 for bit 1) of one qubit per branch."""
    return 1.0 - 2.0 * ((bits >> (n - 1 - qubit)) & 1)


# ---------------------------------------------------------------------------
# overlaps


def coherent_overlap(bra, ket):
    """<bra|ket> for coherent amplitudes, evaluated in the log domain.

    The magnitude exponent is formed from the amplitude difference before
    exponentiation, which stays finite for amplitudes of order 1e4.
    """
    bra = np.asarray(bra, dtype=np.complex128)
    ket = np.asarray(ket, dtype=np.complex128)
    log_mag = -0.5 * np.abs(ket - bra) ** 2
    phase = np.imag(np.conj(bra) * ket)
    return np.exp(log_mag + 1j * phase)


def quadrature_overlap(x, beta: complex, phi: float):
    """Eigenfunction overlap <x|beta> of the X(phi) quadrature.

    With b = beta e^{-i phi}, the convention is
    (2 pi)^{-1/4} exp(-(x - 2 Re b)^2 / 4 + i Im(b) x - i Im(b) Re(b)),
    which makes single-branch posteriors phase free and reproduces the
    closed-form coherent overlap when integrated over x.
    """
    b = beta * cmath.exp(-1j * phi)
    x = np.asarray(x, dtype=np.float64)
    logmag = -((x - 2.0 * b.real) ** 2) / 4.0
    phase = b.imag * x - b.imag * b.real
    return (2.0 * math.pi) ** -0.25 * np.exp(logmag + 1j * phase)


# ---------------------------------------------------------------------------
# state preparation and unitary evolution


def init_plus_state(n: int, alpha: complex) -> HybridState:
    """Uniform superposition over all n-bit patterns, bus in |alpha>."""
    if n < 1:
        raise ValueError("register must hold at least one qubit")
    dim = 2**n
    return HybridState(
        n,
        np.arange(dim, dtype=np.int64),
        np.full(dim, 2.0 ** (-n / 2), dtype=np.complex128),
        np.full(dim, complex(alpha), dtype=np.complex128),
    )


def attach_bus(state: QubitState, alpha: complex) -> HybridState:
    """Couple a fresh bus |alpha> to a register state (nonzero amplitudes only)."""
    nz = np.flatnonzero(np.abs(state.amplitudes) > 0)
    return HybridState(
        state.qubit_count,
        nz.astype(np.int64),
        state.amplitudes[nz],
        np.full(nz.size, complex(alpha), dtype=np.complex128),
    )


def apply_conditional_rotation(state: HybridState, qubit: int, theta: float) -> HybridState:
    """Rotate the bus by +theta (bit 0) or -theta (bit 1) of one qubit."""
    _check_qubit(qubit, state.qubit_count)
    s = _signs(state.bits, qubit, state.qubit_count)
    bus = state.bus * np.exp(1j * theta * s)
    return HybridState(state.qubit_count, state.bits, state.coeff.copy(), bus)


def apply_conditional_displacement(state: HybridState, qubit: int, beta: complex) -> HybridState:
    """Displace the bus by +beta or -beta conditioned on one qubit.

    Each branch picks up the displacement composition phase
    exp(i Im(s beta conj(gamma))); compositions of these phases are what
    produce the geometric entangling phases of the measurement-free gates.
    """
    _check_qubit(qubit, state.qubit_count)
    s = _signs(state.bits, qubit, state.qubit_count)
    d = s * complex(beta)
    coeff = state.coeff * np.exp(1j * np.imag(d * np.conj(state.bus)))
    return HybridState(state.qubit_count, state.bits, coeff, state.bus + d)


def apply_displacement(state: HybridState, beta: complex) -> HybridState:
    """Unconditional bus displacement by beta."""
    d = complex(beta)
    coeff = state.coeff * np.exp(1j * np.imag(d * np.conj(state.bus)))
    return HybridState(state.qubit_count, state.bits, coeff, state.bus + d)


def run_displacement_program(state: HybridState, steps) -> HybridState:
    """Run a sequence of (qubit | None, beta) displacements with exact returns.

    The bus of each branch is recomputed at every step from the multiset of
    still-open displacements, so a sequence in which every displacement is
    later undone restores the original amplitude bit for bit (out-and-back
    sequences end with bus spread exactly zero rather than a rounding
    residue).  Phases follow the same composition rule as the incremental
    operations.
    """
    n = state.qubit_count
    bits = state.bits
    new_coeff = state.coeff.copy()
    new_bus = state.bus.copy()
    for i in range(bits.size):
        gamma0 = complex(state.bus[i])
        open_disp: list[complex] = []
        phase = 0.0
        for qubit, beta in steps:
            if qubit is None:
                d = complex(beta)
            else:
                _check_qubit(qubit, n)
                s = 1.0 - 2.0 * ((int(bits[i]) >> (n - 1 - qubit)) & 1)
                d = s * complex(beta)
            gamma = gamma0 + sum(open_disp, start=0j)
            phase += (d * gamma.conjugate()).imag
            if -d in open_disp:
                open_disp.remove(-d)
            else:
                open_disp.append(d)
        new_coeff[i] *= cmath.exp(1j * phase)
        new_bus[i] = gamma0 + sum(open_disp, start=0j)
    return HybridState(n, bits, new_coeff, new_bus)


# ---------------------------------------------------------------------------
# measurements


@dataclass(frozen=True)
class Peak:
    center: float
    weight: float
    members: frozenset


@dataclass(frozen=True)
class PeakModel:
    """Gaussian-mixture model of a homodyne outcome distribution.

    Each peak is a unit-variance Gaussian; centers are 2 Re(bus e^{-i phi})
    and weights are the squared norms of the member branch groups.
    """

    phi: float
    peaks: tuple

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x, dtype=np.float64)
        for p in self.peaks:
            out += p.weight * _normal_pdf(x - p.center)
        return out

    def windows(self):
        """Decision windows: midpoints between adjacent centers."""
        centers = [p.center for p in self.peaks]
        lows = [-math.inf] + [(a + b) / 2 for a, b in zip(centers, centers[1:])]
        highs = lows[1:] + [math.inf]
        return list(zip(lows, highs))

    def window_probability(self, index: int) -> float:
        """Chance of the outcome landing in peak ``index``'s window (all tails)."""
        lo, hi = self.windows()[index]
        total = 0.0
        for p in self.peaks:
            total += p.weight * (_normal_cdf(hi - p.center) - _normal_cdf(lo - p.center))
        return total


def _normal_pdf(t):
    return np.exp(-np.asarray(t, dtype=np.float64) ** 2 / 2.0) / math.sqrt(2.0 * math.pi)


def _normal_cdf(t) -> float:
    if t == math.inf:
        return 1.0
    if t == -math.inf:
        return 0.0
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def homodyne_pdf(state: HybridState, phi: float) -> PeakModel:
    """Group branches into quadrature peaks for the X(phi) measurement."""
    centers = 2.0 * np.real(state.bus * cmath.exp(-1j * phi))
    order = np.argsort(centers, kind="stable")
    peaks = []
    group: list[int] = []

    def flush(group):
        idx = np.array(group)
        weight = 0.0
        gbits = state.bits[idx]
        for sub in _groups_by_key(np.sort(gbits)):
            members = idx[np.argsort(gbits, kind="stable")][sub]
            c = state.coeff[members]
            b = state.bus[members]
            ov = coherent_overlap(b[None, :], b[:, None])
            weight += float(np.real(np.einsum("i,j,ij->", c, c.conj(), ov)))
        center = float(np.mean(centers[idx]))
        peaks.append(Peak(center, weight, frozenset(int(b) for b in gbits)))

    for i in order:
        if group and centers[i] - centers[group[-1]] > PEAK_GROUP_TOL:
            flush(group)
            group = []
        group.append(int(i))
    flush(group)
    return PeakModel(phi=phi, peaks=tuple(peaks))


@dataclass(frozen=True)
class HomodyneOutcome:
    kind: str  # "peak" or "value"
    probability: float  # window probability for peaks, density for forced x
    posterior: QubitState
    peak: Peak | None = None
    x: float | None = None


def homodyne_project(state: HybridState, phi: float, outcome) -> HomodyneOutcome:
    """Project on a homodyne outcome: a peak index or a forced real value x.

    Peak selection keeps the member branches, multiplies each coefficient by
    the quadrature eigenfunction overlap evaluated at the peak center, and
    renormalizes; the reported probability is the window mass including tail
    leakage from the other peaks.  A forced x keeps every branch weighted by
    <x|bus> and reports the probability density at x.
    """
    nrm = state.norm()
    if abs(nrm - 1.0) > 1e-6:
        raise ValueError(f"state not normalized (norm={nrm!r})")
    model = homodyne_pdf(state, phi)
    if isinstance(outcome, (int, np.integer)) and not isinstance(outcome, bool):
        if not 0 <= outcome < len(model.peaks):
            raise ValueError(f"no peak with index {outcome}")
        peak = model.peaks[outcome]
        keep = np.array([int(b) in peak.members for b in state.bits])
        if not keep.any():
            raise ValueError("selected peak has no member branches")
        return HomodyneOutcome(
            kind="peak",
            probability=model.window_probability(int(outcome)),
            posterior=_project_at(state, phi, peak.center, keep),
            peak=peak,
        )
    x = float(outcome)
    keep = np.ones(state.bits.size, dtype=bool)
    return HomodyneOutcome(
        kind="value",
        probability=float(model.density(x)),
        posterior=_project_at(state, phi, x, keep),
        x=x,
    )


def _project_at(state: HybridState, phi: float, x: float, keep: np.ndarray) -> QubitState:
    amps = np.zeros(2**state.qubit_count, dtype=np.complex128)
    idx = np.flatnonzero(keep)
    overlaps = np.array(
        [quadrature_overlap(x, complex(state.bus[i]), phi) for i in idx]
    )
    np.add.at(amps, state.bits[idx], state.coeff[idx] * overlaps)
    return QubitState(state.qubit_count, amps, normalize=True)


@dataclass(frozen=True)
class BucketOutcome:
    outcome: object  # "vacuum", "click", or a photon number
    probability: float
    posterior: QubitState | None
    components: tuple = ()  # for "click": (n, probability, QubitState) entries


def measure_bucket(
    state: HybridState,
    number_resolving: bool = False,
    outcome=None,
    rng: np.random.Generator | None = None,
    vacuum_tol: float = 1e-9,
    tail_tol: float = 1e-12,
) -> BucketOutcome:
    """Photon detection on the bus: vacuum/click, or a resolved photon number.

    Vacuum keeps the branches whose bus amplitude is zero (within
    ``vacuum_tol``); the reported probability is the exact vacuum weight
    including the exponentially small contribution of displaced branches.
    A resolved outcome n weights each branch by <n|bus>, evaluated in the
    log domain.  Without number resolution the non-vacuum result is the
    heralded-unknown-phase mixture, reported as its per-n components.
    """
    nrm = state.norm()
    if abs(nrm - 1.0) > 1e-6:
        raise ValueError(f"state not normalized (norm={nrm!r})")
    p_vac, vac_posterior = _vacuum_branch(state, vacuum_tol)
    if outcome is None:
        if number_resolving:
            outcome = _sample_photon_number(state, rng, tail_tol)
        else:
            if rng is None:
                raise ValueError("sampling a bucket outcome requires an rng")
            outcome = "vacuum" if rng.random() < p_vac else "click"
    if outcome == "vacuum":
        return BucketOutcome("vacuum", p_vac, vac_posterior)
    if outcome == "click":
        components = tuple(
            (n, pn, post)
            for n, pn, post in _photon_components(state, tail_tol)
            if n > 0
        )
        return BucketOutcome("click", 1.0 - p_vac, None, components)
    n = int(outcome)
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    if n == 0:
        return BucketOutcome(0, p_vac, vac_posterior)
    pn, post = _photon_projection(state, n)
    return BucketOutcome(n, pn, post)


def _vacuum_branch(state: HybridState, vacuum_tol: float):
    pn, _ = _photon_projection(state, 0)
    keep = np.abs(state.bus) <= vacuum_tol
    if keep.any():
        amps = np.zeros(2**state.qubit_count, dtype=np.complex128)
        np.add.at(amps, state.bits[keep], state.coeff[keep])
        posterior = QubitState(state.qubit_count, amps, normalize=True)
    else:
        _, posterior = _photon_projection(state, 0)
    return pn, posterior


def _photon_projection(state: HybridState, n: int):
    """Exact weight and posterior of the photon-number outcome n."""
    b = state.bus
    absb = np.abs(b)
    with np.errstate(divide="ignore"):
        log_mag = -0.5 * absb**2 + n * np.where(absb > 0, np.log(absb), -np.inf)
    log_mag = log_mag - 0.5 * math.lgamma(n + 1)
    if n == 0:
        log_mag = -0.5 * absb**2
    phase = n * np.angle(b)
    top = float(np.max(log_mag))
    if top == -math.inf:
        return 0.0, None
    w = np.exp(log_mag - top + 1j * phase)
    amps = np.zeros(2**state.qubit_count, dtype=np.complex128)
    np.add.at(amps, state.bits, state.coeff * w)
    nrm2 = float(np.vdot(amps, amps).real)
    prob = nrm2 * math.exp(2.0 * top)
    if nrm2 == 0.0:
        return prob, None
    return prob, QubitState(state.qubit_count, amps / math.sqrt(nrm2))


def _photon_components(state: HybridState, tail_tol: float):
    lam = float(np.max(np.abs(state.bus)) ** 2)
    n_max = int(lam + 12.0 * math.sqrt(lam + 1.0) + 25.0)
    total = 0.0
    out = []
    for n in range(n_max + 1):
        pn, post = _photon_projection(state, n)
        if post is not None:
            out.append((n, pn, post))
        total += pn
        if 1.0 - total < tail_tol and n > lam:
            break
    return out


def _sample_photon_number(state, rng, tail_tol):
    if rng is None:
        raise ValueError("sampling a bucket outcome requires an rng")
    u = rng.random()
    acc = 0.0
    last = 0
    for n, pn, _ in _photon_components(state, tail_tol):
        acc += pn
        last = n
        if u < acc:
            return n
    return last


# ---------------------------------------------------------------------------
# disentanglement


def bus_spread(state: HybridState) -> float:
    """Largest pairwise distance between branch bus amplitudes."""
    b = state.bus
    if b.size <= 1:
        return 0.0
    if b.size <= 1024:
        return float(np.max(np.abs(b[None, :] - b[:, None])))
    best = 0.0
    for i in range(0, b.size, 512):
        chunk = b[i : i + 512]
        best = max(best, float(np.max(np.abs(chunk[None, :] - b[:, None]))))
    return best


def extract_qubits(state: HybridState, tol: float = 1e-9) -> QubitState:
    """Drop a bus that is no longer entangled with the register.

    Requires the branch bus amplitudes to agree within ``tol``; the common
    coherent factor carries no relative phase, so the register amplitudes
    are just the branch coefficients, renormalized.
    """
    spread = bus_spread(state)
    if spread >= tol:
        raise ValueError(
            f"bus still entangled with the register (spread {spread:.3e} >= {tol:.3e})"
        )
    amps = np.zeros(2**state.qubit_count, dtype=np.complex128)
    np.add.at(amps, state.bits, state.coeff)
    return QubitState(state.qubit_count, amps, normalize=True)
