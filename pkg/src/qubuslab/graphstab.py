"""Stabilizer engine for graph states: fusion, recovery and comparison.

A tableau holds n independent commuting Pauli generators with +-1 signs.
Operations return updated copies; measurement randomness comes from a caller
supplied generator or a forced outcome, so growth simulations can keep one
seeded stream per trial.

Chain bookkeeping (which qubit sits where in which chain, dangling bonds)
lives in a :class:`ChainRegistry` beside the tableau; the quantum state never
knows about chain identities.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GraphSpec",
    "StabilizerTableau",
    "ChainRegistry",
    "graph_state",
    "measure_pauli",
    "measure_pauli_string",
    "apply_hadamard",
    "apply_pauli",
    "apply_corrections",
    "fuse",
    "recover_failure",
    "equals_up_to_corrections",
    "canonical_form",
    "parse_edge_list",
    "PARITY2_OUTCOMES",
    "GATE3_OUTCOMES",
]

PARITY2_OUTCOMES = ("success-even", "success-odd", "fail-00", "fail-11")
GATE3_OUTCOMES = ("ghz", "bell-q3-0", "bell-q3-1", "product-001", "product-110")


# ---------------------------------------------------------------------------
# graph specs


@dataclass(frozen=True)
class GraphSpec:
    """Undirected simple graph over vertices 0..n-1."""

    n: int
    edges: frozenset

    @classmethod
    def from_edges(cls, n: int, edges) -> "GraphSpec":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            norm.add((min(u, v), max(u, v)))
        return cls(n=n, edges=frozenset(norm))

    @classmethod
    def chain(cls, n: int) -> "GraphSpec":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, n: int, center: int = 0) -> "GraphSpec":
        return cls.from_edges(n, [(center, v) for v in range(n) if v != center])

    def neighbours(self, v: int):
        return sorted(
            b if a == v else a for a, b in self.edges if v in (a, b)
        )

    def to_edge_list(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in sorted(self.edges))


def parse_edge_list(text: str, n: int | None = None) -> GraphSpec:
    """Read a graph from lines of "u v" pairs; blank lines and # comments ok."""
    edges = []
    top = -1
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {ln}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        top = max(top, u, v)
    if n is None:
        n = top + 1
    return GraphSpec.from_edges(n, edges)


# ---------------------------------------------------------------------------
# tableau representation


class StabilizerTableau:
    """n commuting, independent Pauli generators with signs.

    Row i of ``x``/``z`` holds the symplectic bits of generator i; ``sign``
    is 0 for +1 and 1 for -1.
    """

    __slots__ = ("n", "x", "z", "sign")

    def __init__(self, n: int, x=None, z=None, sign=None):
        self.n = n
        self.x = np.zeros((n, n), dtype=np.uint8) if x is None else np.array(x, dtype=np.uint8)
        self.z = np.zeros((n, n), dtype=np.uint8) if z is None else np.array(z, dtype=np.uint8)
        self.sign = np.zeros(n, dtype=np.uint8) if sign is None else np.array(sign, dtype=np.uint8)

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n, self.x.copy(), self.z.copy(), self.sign.copy())

    def generator_strings(self):
        """Generators as (sign, pauli-string) pairs, qubit 0 leftmost."""
        out = []
        for i in range(self.n):
            chars = []
            for q in range(self.n):
                xb, zb = self.x[i, q], self.z[i, q]
                chars.append("IXZY"[xb + 2 * zb] if xb + 2 * zb != 3 else "Y")
            out.append((1 - 2 * int(self.sign[i]), "".join(chars)))
        return out

    def validate(self) -> None:
        for i in range(self.n):
            for j in range(i + 1, self.n):
                anti = int(
                    (self.x[i] & self.z[j]).sum() + (self.z[i] & self.x[j]).sum()
                ) % 2
                if anti:
                    raise ValueError(f"generators {i} and {j} anticommute")
        m = np.concatenate([self.x, self.z], axis=1).astype(np.uint8)
        if _gf2_rank(m) != self.n:
            raise ValueError("generators are not independent")

    def __repr__(self):
        gens = ", ".join(
            ("+" if s > 0 else "-") + p for s, p in self.generator_strings()
        )
        return f"StabilizerTableau({gens})"


def _gf2_rank(m: np.ndarray) -> int:
    m = m.copy() % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _pauli_product_phase(x1, z1, x2, z2) -> int:
    """Phase exponent (mod 4, even for commuting products) of P1 * P2."""
    g = 0
    for a, b, c, d in zip(
        x1.tolist(), z1.tolist(), x2.tolist(), z2.tolist()
    ):
        if a == 0 and b == 0:
            continue
        if a == 1 and b == 0:  # X * ...
            g += d * (2 * c - 1)
        elif a == 0 and b == 1:  # Z * ...
            g += c * (1 - 2 * d)
        else:  # Y * ...
            g += d - c
    return g % 4


def _row_multiply(tab: StabilizerTableau, target: int, source: int) -> None:
    g = _pauli_product_phase(
        tab.x[target], tab.z[target], tab.x[source], tab.z[source]
    )
    total = 2 * int(tab.sign[target]) + 2 * int(tab.sign[source]) + g
    if total % 2:
        raise AssertionError("row product produced an imaginary sign")
    tab.sign[target] = (total // 2) % 2
    tab.x[target] ^= tab.x[source]
    tab.z[target] ^= tab.z[source]


def graph_state(spec: GraphSpec) -> StabilizerTableau:
    """Generators X_v prod_{u ~ v} Z_u with + signs."""
    tab = StabilizerTableau(spec.n)
    for v in range(spec.n):
        tab.x[v, v] = 1
        for u in spec.neighbours(v):
            tab.z[v, u] = 1
    return tab


# ---------------------------------------------------------------------------
# Clifford updates


def apply_hadamard(tab: StabilizerTableau, qubit: int) -> StabilizerTableau:
    tab = tab.copy()
    xq = tab.x[:, qubit].copy()
    zq = tab.z[:, qubit].copy()
    tab.sign ^= xq & zq
    tab.x[:, qubit] = zq
    tab.z[:, qubit] = xq
    return tab


def apply_pauli(tab: StabilizerTableau, qubit: int, pauli: str) -> StabilizerTableau:
    """Conjugate every generator by a single-qubit Pauli (sign flips only)."""
    tab = tab.copy()
    xq, zq = tab.x[:, qubit], tab.z[:, qubit]
    if pauli == "X":
        tab.sign ^= zq
    elif pauli == "Z":
        tab.sign ^= xq
    elif pauli == "Y":
        tab.sign ^= xq ^ zq
    else:
        raise ValueError(f"unknown Pauli {pauli!r}")
    return tab


def apply_corrections(tab: StabilizerTableau, corrections) -> StabilizerTableau:
    """Apply (qubit, op) pairs with op in X, Y, Z, H."""
    for qubit, op in corrections:
        if op == "H":
            tab = apply_hadamard(tab, qubit)
        else:
            tab = apply_pauli(tab, qubit, op)
    return tab


# ---------------------------------------------------------------------------
# measurements


def _string_to_bits(n: int, pauli: dict[int, str]):
    xt = np.zeros(n, dtype=np.uint8)
    zt = np.zeros(n, dtype=np.uint8)
    for q, ch in pauli.items():
        if ch == "X":
            xt[q] = 1
        elif ch == "Z":
            zt[q] = 1
        elif ch == "Y":
            xt[q] = zt[q] = 1
        else:
            raise ValueError(f"unknown Pauli {ch!r}")
    return xt, zt


def measure_pauli_string(
    tab: StabilizerTableau,
    pauli: dict[int, str],
    forced: int | None = None,
    rng: np.random.Generator | None = None,
):
    """Measure a (multi-qubit) Pauli observable; returns (outcome, tableau).

    Deterministic outcomes are computed by expressing the observable inside
    the generator group; random outcomes need ``forced`` or ``rng``.
    """
    xt, zt = _string_to_bits(tab.n, pauli)
    anti = ((tab.x @ zt) + (tab.z @ xt)) % 2
    hits = np.flatnonzero(anti)
    tab = tab.copy()
    if hits.size:
        p = int(hits[0])
        for r in hits[1:]:
            _row_multiply(tab, int(r), p)
        if forced is None:
            if rng is None:
                raise ValueError("random measurement outcome needs forced or rng")
            outcome = 1 if rng.integers(2) == 0 else -1
        else:
            outcome = int(forced)
            if outcome not in (1, -1):
                raise ValueError("forced outcome must be +1 or -1")
        tab.x[p] = xt
        tab.z[p] = zt
        tab.sign[p] = 0 if outcome == 1 else 1
        return outcome, tab
    outcome = _deterministic_sign(tab, xt, zt)
    if forced is not None and int(forced) != outcome:
        raise ValueError(
            f"outcome is deterministic ({outcome:+d}); cannot force {forced:+d}"
        )
    return outcome, tab


def _deterministic_sign(tab: StabilizerTableau, xt, zt) -> int:
    """Sign of a Pauli that lies in the stabilizer group."""
    m = np.concatenate([tab.x, tab.z], axis=1) % 2
    target = np.concatenate([xt, zt]) % 2
    combo = _gf2_solve(m.T, target)
    if combo is None:
        raise ValueError("measured Pauli neither commutes into nor hits the group")
    acc_x = np.zeros(tab.n, dtype=np.uint8)
    acc_z = np.zeros(tab.n, dtype=np.uint8)
    phase = 0  # units of i
    sign = 0
    for r in np.flatnonzero(combo):
        phase = (phase + _pauli_product_phase(acc_x, acc_z, tab.x[r], tab.z[r])) % 4
        sign ^= int(tab.sign[r])
        acc_x ^= tab.x[r]
        acc_z ^= tab.z[r]
    if phase % 2:
        raise AssertionError("stabilizer product has imaginary phase")
    sign ^= (phase // 2) % 2
    return 1 - 2 * sign


def _gf2_solve(a: np.ndarray, b: np.ndarray):
    """One solution x of a x = b over GF(2), or None."""
    a = a.copy() % 2
    b = b.copy() % 2
    rows, cols = a.shape
    piv_col_of_row = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if a[rr, c]:
                pivot = rr
                break
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        b[r], b[pivot] = b[pivot], b[r]
        for rr in range(rows):
            if rr != r and a[rr, c]:
                a[rr] ^= a[r]
                b[rr] ^= b[r]
        piv_col_of_row.append(c)
        r += 1
        if r == rows:
            break
    x = np.zeros(cols, dtype=np.uint8)
    for row, c in enumerate(piv_col_of_row):
        x[c] = b[row]
    for row in range(len(piv_col_of_row), rows):
        if b[row]:
            return None
    return x


def measure_pauli(
    tab: StabilizerTableau,
    qubit: int,
    basis: str,
    forced: int | None = None,
    rng: np.random.Generator | None = None,
):
    """Single-qubit X, Y or Z measurement; returns (outcome, tableau)."""
    if basis not in ("X", "Y", "Z"):
        raise ValueError(f"basis must be X, Y or Z, got {basis!r}")
    if not 0 <= qubit < tab.n:
        raise ValueError(f"qubit {qubit} out of range")
    return measure_pauli_string(tab, {qubit: basis}, forced=forced, rng=rng)


# ---------------------------------------------------------------------------
# chain registry


@dataclass
class ChainRegistry:
    """Classical bookkeeping of chains and dangling bonds beside a tableau."""

    backbones: dict = field(default_factory=dict)  # chain id -> list of qubits
    danglers: dict = field(default_factory=dict)  # dangler qubit -> anchor qubit
    chain_of: dict = field(default_factory=dict)  # qubit -> chain id
    tees: list = field(default_factory=list)  # (junction qubit, branch chain id)
    _next_id: int = 0

    @classmethod
    def disjoint_chains(cls, lengths):
        """Registry plus graph spec for side-by-side fresh chains."""
        reg = cls()
        edges = []
        q = 0
        for length in lengths:
            qubits = list(range(q, q + length))
            reg.new_chain(qubits)
            edges.extend((a, a + 1) for a in qubits[:-1])
            q += length
        return reg, GraphSpec.from_edges(q, edges)

    def new_chain(self, qubits) -> int:
        cid = self._next_id
        self._next_id += 1
        self.backbones[cid] = list(qubits)
        for qb in qubits:
            self.chain_of[qb] = cid
        return cid

    def degree(self, qubit: int) -> int:
        if qubit in self.danglers:
            return 1
        deg = sum(1 for anchor in self.danglers.values() if anchor == qubit)
        cid = self.chain_of.get(qubit)
        if cid is not None:
            backbone = self.backbones[cid]
            i = backbone.index(qubit)
            deg += (1 if i > 0 else 0) + (1 if i < len(backbone) - 1 else 0)
        return deg

    def is_end(self, qubit: int) -> bool:
        return self.degree(qubit) <= 1

    def chain_length(self, qubit: int) -> int:
        return len(self.backbones[self.chain_of[qubit]])

    def neighbour(self, qubit: int):
        """The unique graph neighbour of a degree<=1 qubit, or None."""
        if qubit in self.danglers:
            return self.danglers[qubit]
        for d, anchor in self.danglers.items():
            if anchor == qubit:
                return d  # only valid when qubit has no backbone neighbour
        cid = self.chain_of.get(qubit)
        if cid is None:
            return None
        backbone = self.backbones[cid]
        i = backbone.index(qubit)
        if len(backbone) == 1:
            return None
        return backbone[i + 1] if i == 0 else backbone[i - 1]

    def _oriented(self, qubit: int):
        """Backbone of qubit's chain, reversed if needed so it ends at qubit."""
        cid = self.chain_of[qubit]
        backbone = self.backbones[cid]
        if backbone[-1] == qubit:
            return cid, list(backbone)
        if backbone[0] == qubit:
            return cid, list(reversed(backbone))
        raise ValueError(f"qubit {qubit} is not a chain end")

    def fuse_success(self, a: int, b: int) -> None:
        """Merge b's chain into a's; b becomes a dangling bond on a."""
        cid_a, spine_a = self._oriented(a)
        cid_b, spine_b = self._oriented(b)
        if cid_a == cid_b:
            raise ValueError("cannot fuse a chain with itself")
        rest = list(reversed(spine_b))[1:]  # b's chain from b's neighbour outward
        merged = spine_a + rest
        del self.backbones[cid_b]
        self.backbones[cid_a] = merged
        for qb in rest:
            self.chain_of[qb] = cid_a
        del self.chain_of[b]
        self.danglers[b] = a

    def fuse_tee(self, a: int, b: int, c: int) -> None:
        """Three-way join: b's chain merges through a, c's hangs off a.

        Both b and c become dangling bonds on a.  The remainder of c's chain
        stays registered as its own backbone; the junction is recorded in
        ``tees`` so a census can tell branches from free chains.
        """
        cid_c, spine_c = self._oriented(c)
        self.fuse_success(a, b)
        rest_c = list(reversed(spine_c))[1:]
        del self.chain_of[c]
        self.danglers[c] = a
        if rest_c:
            self.backbones[cid_c] = rest_c
            self.tees.append((a, cid_c))
        else:
            del self.backbones[cid_c]

    def remove(self, qubit: int) -> None:
        if qubit in self.danglers:
            del self.danglers[qubit]
            return
        cid = self.chain_of.pop(qubit)
        backbone = self.backbones[cid]
        backbone.remove(qubit)
        if not backbone:
            del self.backbones[cid]

    def census(self, qubit: int):
        """(backbone length, dangler count) of the chain containing qubit."""
        cid = self.chain_of.get(qubit)
        if cid is None:
            cid = self.chain_of[self.danglers[qubit]]
        backbone = self.backbones[cid]
        dangs = sum(1 for anchor in self.danglers.values() if anchor in backbone)
        return len(backbone), dangs


# ---------------------------------------------------------------------------
# fusion and recovery


def fuse(
    tab: StabilizerTableau,
    qubits,
    variant: str,
    outcome: str,
    registry: ChainRegistry | None = None,
):
    """Join chains at their end qubits with a parity or three-qubit projection.

    Returns (label, tableau, corrections); corrections already applied.
    Failure outcomes project the involved qubits to known product states but
    remove nothing from the chains; recovery is a separate explicit step.
    """
    if variant == "parity-2":
        return _fuse_parity2(tab, qubits, outcome, registry)
    if variant == "gate-3":
        return _fuse_gate3(tab, qubits, outcome, registry)
    raise ValueError(f"unknown fuse variant {variant!r}")


def _warn_not_ends(qubits, registry) -> None:
    if registry is None:
        return
    bad = [q for q in qubits if not registry.is_end(q)]
    if bad:
        warnings.warn(
            f"fusing non-end qubits {bad} (degree > 1); chain bookkeeping skipped",
            stacklevel=3,
        )


def _odd_frame_corrections(tab, b: int, registry):
    """Corrections mapping the odd parity branch onto the even one.

    On a graph state, X_b equals Z on b's neighbourhood, so flipping the
    parity frame with X_b leaves residual Z's on b's former neighbours.  The
    neighbourhood is read off the generator group directly (the element with
    X exactly at b), falling back to the registry when that fails.
    """
    corrections = [(b, "X")]
    neigh = _graph_neighbourhood(tab, b)
    if neigh is None and registry is not None:
        nb = registry.neighbour(b)
        neigh = [] if nb is None else [nb]
    if neigh is None:
        warnings.warn(
            f"could not derive the neighbourhood of qubit {b}; odd-branch "
            "correction may leave residual signs",
            stacklevel=4,
        )
        neigh = []
    corrections.extend((q, "Z") for q in neigh)
    return corrections


def _graph_neighbourhood(tab: StabilizerTableau, q: int):
    """Vertices carrying Z in the group element whose X part is exactly e_q."""
    target = np.zeros(tab.n, dtype=np.uint8)
    target[q] = 1
    combo = _gf2_solve((tab.x % 2).T, target)
    if combo is None:
        return None
    zpart = np.zeros(tab.n, dtype=np.uint8)
    for r in np.flatnonzero(combo):
        zpart ^= tab.z[r]
    zpart[q] = 0  # a Y at q would only add a phase, not a neighbour
    return [int(v) for v in np.flatnonzero(zpart)]


def _fuse_parity2(tab, qubits, outcome, registry):
    a, b = qubits
    if outcome not in PARITY2_OUTCOMES:
        raise ValueError(f"outcome {outcome!r} not in {PARITY2_OUTCOMES}")
    _warn_not_ends(qubits, registry)
    corrections = []
    if outcome in ("success-even", "success-odd"):
        if outcome == "success-odd":
            corrections = _odd_frame_corrections(tab, b, registry)
        forced = 1 if outcome == "success-even" else -1
        _, tab = measure_pauli_string(tab, {a: "Z", b: "Z"}, forced=forced)
        for q, op in corrections:
            tab = apply_pauli(tab, q, op)
        tab = apply_hadamard(tab, b)
        if registry is not None and registry.is_end(a) and registry.is_end(b):
            registry.fuse_success(a, b)
        return outcome, tab, tuple(corrections)
    forced = 1 if outcome == "fail-00" else -1
    _, tab = measure_pauli_string(tab, {a: "Z"}, forced=forced)
    _, tab = measure_pauli_string(tab, {b: "Z"}, forced=forced)
    return outcome, tab, ()


def _fuse_gate3(tab, qubits, outcome, registry):
    a, b, c = qubits
    if outcome not in GATE3_OUTCOMES:
        raise ValueError(f"outcome {outcome!r} not in {GATE3_OUTCOMES}")
    _warn_not_ends(qubits, registry)
    corrections = []
    if outcome == "ghz":
        _, tab = measure_pauli_string(tab, {a: "Z", b: "Z"}, forced=1)
        _, tab = measure_pauli_string(tab, {b: "Z", c: "Z"}, forced=1)
        tab = apply_hadamard(tab, b)
        tab = apply_hadamard(tab, c)
        if registry is not None and all(registry.is_end(q) for q in qubits):
            registry.fuse_tee(a, b, c)
        return outcome, tab, ()
    if outcome.startswith("bell-q3"):
        third_bit = int(outcome[-1])
        corrections = _odd_frame_corrections(tab, b, registry)
        neigh_c = _graph_neighbourhood(tab, c) or []
        _, tab = measure_pauli_string(tab, {a: "Z", b: "Z"}, forced=-1)
        for q, op in corrections:
            tab = apply_pauli(tab, q, op)
        _, tab = measure_pauli_string(tab, {c: "Z"}, forced=1 if third_bit == 0 else -1)
        if third_bit == 1:
            for q in neigh_c:
                tab = apply_pauli(tab, q, "Z")
                corrections.append((q, "Z"))
        tab = apply_hadamard(tab, b)
        if registry is not None and registry.is_end(a) and registry.is_end(b):
            registry.fuse_success(a, b)
            if registry.chain_of.get(c) is not None or c in registry.danglers:
                registry.remove(c)
        return outcome, tab, tuple(corrections)
    bits = outcome.split("-")[1]
    for q, ch in zip((a, b, c), bits):
        _, tab = measure_pauli_string(tab, {q: "Z"}, forced=1 if ch == "0" else -1)
    return outcome, tab, ()


def recover_failure(
    tab: StabilizerTableau,
    end_qubit: int,
    registry: ChainRegistry,
    rng: np.random.Generator | None = None,
    forced: int | None = None,
):
    """Measure out a chain-end qubit and repair its neighbour.

    The qubit is Z measured; on outcome -1 a Z correction is applied to its
    backbone neighbour, after which the shortened chain is again a graph
    state.  The qubit leaves the active chain bookkeeping.
    """
    if not registry.is_end(end_qubit):
        raise ValueError(
            f"qubit {end_qubit} has degree > 1; interior recovery is unsupported"
        )
    neighbour = registry.neighbour(end_qubit)
    outcome, tab = measure_pauli(tab, end_qubit, "Z", forced=forced, rng=rng)
    if outcome == -1 and neighbour is not None:
        tab = apply_pauli(tab, neighbour, "Z")
    registry.remove(end_qubit)
    return outcome, tab


# ---------------------------------------------------------------------------
# group comparison


def canonical_form(tab: StabilizerTableau) -> tuple:
    """Row-reduced echelon form (with signs) of the generator group."""
    work = tab.copy()
    m = np.concatenate([work.x, work.z], axis=1)
    rank = 0
    cols = 2 * work.n
    for c in range(cols):
        pivot = None
        for r in range(rank, work.n):
            if m[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
            work.x[[rank, pivot]] = work.x[[pivot, rank]]
            work.z[[rank, pivot]] = work.z[[pivot, rank]]
            work.sign[[rank, pivot]] = work.sign[[pivot, rank]]
        for r in range(work.n):
            if r != rank and m[r, c]:
                _row_multiply(work, r, rank)
                m[r] = np.concatenate([work.x[r], work.z[r]])
        rank += 1
        if rank == work.n:
            break
    key = tuple(
        (int(work.sign[i]),) + tuple(int(v) for v in m[i]) for i in range(work.n)
    )
    return tuple(sorted(key))


def equals_up_to_corrections(
    tab: StabilizerTableau, spec: GraphSpec, corrections=()
) -> bool:
    """Whether corrected generators generate exactly the graph-state group."""
    if tab.n != spec.n:
        raise ValueError("qubit counts differ")
    corrected = apply_corrections(tab, corrections)
    return canonical_form(corrected) == canonical_form(graph_state(spec))
