"""Independent reference implementations used to cross-check the fast paths.

Everything here deliberately avoids the branch bookkeeping of
:mod:`qubuslab.busim` and the tableau algebra of :mod:`qubuslab.graphstab`:
the bus is expanded in a truncated number basis, register states are dense
vectors, and stabilizer claims are verified by brute-force operator action.
These routines are slow and only meant for small systems.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from .busim import HybridState, QubitState

__all__ = [
    "FockOracle",
    "hybrid_to_dense",
    "two_gaussian_misassignment",
    "graph_state_vector",
    "statevector_stabilizer_signs",
    "pauli_matrix",
    "apply_pauli_string",
    "state_stabilized_by",
]

_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class FockOracle:
    """Dense qubit-register x truncated-Fock simulator.

    State layout: vector of shape (2**n * dim,), index = bits * dim + k with
    k the photon number.  Same qubit conventions as busim (qubit 0 is the
    most significant bit, Z eigenvalue +1 for bit 0).
    """

    def __init__(self, n_qubits: int, fock_dim: int):
        self.n = n_qubits
        self.dim = fock_dim
        a = np.diag(np.sqrt(np.arange(1, fock_dim)), k=1)
        self._a = a
        self._num = np.diag(np.arange(fock_dim, dtype=np.float64))

    def coherent_vector(self, beta: complex) -> np.ndarray:
        ns = np.arange(self.dim)
        with np.errstate(divide="ignore"):
            logmag = -0.5 * abs(beta) ** 2 + ns * (
                math.log(abs(beta)) if beta != 0 else -math.inf
            )
        logmag -= np.array([0.5 * math.lgamma(k + 1) for k in ns])
        vec = np.exp(logmag) * np.exp(1j * ns * np.angle(beta))
        if beta == 0:
            vec = np.zeros(self.dim, dtype=np.complex128)
            vec[0] = 1.0
        return vec

    def initial_state(self, register: QubitState, alpha: complex) -> np.ndarray:
        return np.kron(register.amplitudes, self.coherent_vector(alpha))

    def displacement(self, beta: complex) -> np.ndarray:
        return expm(beta * self._a.conj().T - np.conj(beta) * self._a)

    def rotation(self, theta: float) -> np.ndarray:
        return np.diag(np.exp(1j * theta * np.arange(self.dim)))

    def _qubit_signs(self, qubit: int) -> np.ndarray:
        bits = np.arange(2**self.n)
        return 1.0 - 2.0 * ((bits >> (self.n - 1 - qubit)) & 1)

    def _apply_conditional(self, state, qubit, op_plus, op_minus):
        psi = state.reshape(2**self.n, self.dim)
        signs = self._qubit_signs(qubit)
        out = np.empty_like(psi)
        out[signs > 0] = psi[signs > 0] @ op_plus.T
        out[signs < 0] = psi[signs < 0] @ op_minus.T
        return out.reshape(-1)

    def conditional_rotation(self, state, qubit: int, theta: float):
        return self._apply_conditional(
            state, qubit, self.rotation(theta), self.rotation(-theta)
        )

    def conditional_displacement(self, state, qubit: int, beta: complex):
        return self._apply_conditional(
            state, qubit, self.displacement(beta), self.displacement(-beta)
        )

    def unconditional_displacement(self, state, beta: complex):
        psi = state.reshape(2**self.n, self.dim)
        return (psi @ self.displacement(beta).T).reshape(-1)


def hybrid_to_dense(state: HybridState, oracle: FockOracle) -> np.ndarray:
    """Expand a branch state in the oracle's truncated joint basis."""
    out = np.zeros(2**state.qubit_count * oracle.dim, dtype=np.complex128)
    for b, c, u in zip(state.bits, state.coeff, state.bus):
        out[int(b) * oracle.dim : (int(b) + 1) * oracle.dim] += c * oracle.coherent_vector(
            complex(u)
        )
    return out


def two_gaussian_misassignment(separation: float) -> float:
    """Midpoint-threshold error between two unit-variance Gaussians.

    Numerically integrates the tail of N(0, 1) beyond separation/2; the
    closed form is erfc(separation / (2 sqrt 2)) / 2.
    """

    def pdf(x):
        return math.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)

    upper = max(separation / 2.0 + 40.0, 50.0)
    value, _ = quad(pdf, separation / 2.0, upper, epsabs=1e-16, epsrel=1e-12)
    return value


# ---------------------------------------------------------------------------
# dense stabilizer checks


def pauli_matrix(pauli: str) -> np.ndarray:
    """Dense matrix of a Pauli string such as "XZI"."""
    out = np.array([[1.0]], dtype=np.complex128)
    for ch in pauli:
        out = np.kron(out, _PAULI[ch])
    return out


def apply_pauli_string(vec: np.ndarray, pauli: str) -> np.ndarray:
    n = len(pauli)
    out = vec
    idx = np.arange(2**n)
    for q, ch in enumerate(pauli):
        if ch == "I":
            continue
        flip = idx ^ (1 << (n - 1 - q))
        z_sign = 1 - 2 * ((idx >> (n - 1 - q)) & 1)
        if ch == "X":
            out = out[flip]
        elif ch == "Z":
            out = out * z_sign
        elif ch == "Y":
            out = out[flip] * (1j * z_sign)
    return out


def graph_state_vector(n: int, edges) -> np.ndarray:
    """|+>^n with a controlled-Z on every edge."""
    vec = np.full(2**n, 2.0 ** (-n / 2), dtype=np.complex128)
    idx = np.arange(2**n)
    for u, v in edges:
        bu = (idx >> (n - 1 - u)) & 1
        bv = (idx >> (n - 1 - v)) & 1
        vec = vec * np.where((bu & bv) == 1, -1.0, 1.0)
    return vec


def statevector_stabilizer_signs(vec: np.ndarray, paulis, tol: float = 1e-9):
    """Signs s with P|psi> = s|psi>, or None where P does not stabilize."""
    signs = []
    for p in paulis:
        image = apply_pauli_string(vec, p)
        ov = np.vdot(vec, image)
        if abs(abs(ov) - 1.0) <= tol and abs(ov.imag) <= tol:
            signs.append(1 if ov.real > 0 else -1)
        else:
            signs.append(None)
    return signs


def state_stabilized_by(vec: np.ndarray, paulis, signs, tol: float = 1e-9) -> bool:
    """Whether every signed Pauli string fixes the vector exactly."""
    for p, s in zip(paulis, signs):
        image = s * apply_pauli_string(vec, p)
        if np.max(np.abs(image - vec)) > tol:
            return False
    return True


def stabilizer_group_of_statevector(vec: np.ndarray, tol: float = 1e-9):
    """All signed Pauli strings stabilizing a small state (brute force)."""
    n = int(round(math.log2(vec.size)))
    found = []
    for combo in itertools.product("IXYZ", repeat=n):
        p = "".join(combo)
        (sign,) = statevector_stabilizer_signs(vec, [p], tol)
        if sign is not None:
            found.append((sign, p))
    return found
