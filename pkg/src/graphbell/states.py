"""Dense statevectors for graph states and the six-qubit experimental states.

Amplitudes are indexed by bitstrings with qubit 1 as the most significant bit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .errors import CapExceededError, GraphBellError, LengthMismatchError, MalformedInputError, NonHermitianError
from .pauli import PauliString, QubitOrder

MAX_QUBITS = 8
NORM_TOL = 1e-12

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = (KET0 + KET1) / np.sqrt(2)
KET_MINUS = (KET0 - KET1) / np.sqrt(2)

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class GraphSpec:
    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphBellError("graph needs at least one vertex")
        clean = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphBellError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphBellError(f"edge ({u}, {v}) outside vertices 1..{self.n}")
            clean.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(clean))

    def neighbors(self, i: int) -> list[int]:
        out = [v for u, v in self.edges if u == i] + [u for u, v in self.edges if v == i]
        return sorted(out)


def path_graph(n: int) -> GraphSpec:
    return GraphSpec(n, frozenset((i, i + 1) for i in range(1, n)))


def y_shape_graph() -> GraphSpec:
    """Six-vertex tree: a path 1-2-3-4 that forks at vertex 4 into 5 and 6.

    The vertex labels are a convention of this package only.
    """
    return GraphSpec(6, frozenset({(1, 2), (2, 3), (3, 4), (4, 5), (4, 6)}))


def parse_graph_text(text: str) -> GraphSpec:
    """Read a graph document: vertex count on the first line, then ``u v`` per edge.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedInputError("empty graph document")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.replace(",", " ").split()
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise MalformedInputError(f"malformed graph document: {exc}") from exc
    try:
        return GraphSpec(n, frozenset(edges))
    except GraphBellError as exc:
        raise MalformedInputError(str(exc)) from exc


def stabilizer_generators(g: GraphSpec) -> list[PauliString]:
    """X on each vertex times Z on its neighbourhood, one generator per vertex."""
    gens = []
    for i in range(1, g.n + 1):
        ops = {j: "Z" for j in g.neighbors(i)}
        ops[i] = "X"
        gens.append(PauliString.from_map(g.n, ops))
    return gens


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    label: str = ""
    n: int = field(init=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if amps.size < 2 or 2**n != amps.size:
            raise GraphBellError(f"amplitude count {amps.size} is not a power of two")
        if n > MAX_QUBITS:
            raise CapExceededError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise GraphBellError(f"state is not normalised (|psi|^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_unnormalized(cls, amps: np.ndarray, label: str = "") -> "StateVector":
        """Normalise and fix the global phase (first nonzero amplitude real positive)."""
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        amps = amps / np.linalg.norm(amps)
        nz = np.flatnonzero(np.abs(amps) > 1e-14)
        if nz.size:
            amps = amps * (abs(amps[nz[0]]) / amps[nz[0]])
        amps[np.abs(amps) < 1e-15] = 0
        return cls(amps, label)

    def amplitude(self, bits: str, order: QubitOrder | None = None) -> complex:
        """Amplitude of a basis state written as a bitstring in ``order``."""
        if order is None:
            order = QubitOrder.canonical(self.n)
        if len(bits) != self.n or order.n != self.n:
            raise LengthMismatchError("bitstring length does not match the state")
        index = 0
        for q, b in zip(order.positions, bits):
            if b == "1":
                index |= 1 << (self.n - q)
        return complex(self.amplitudes[index])

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def product_ket(n: int, factors: Mapping[int, np.ndarray]) -> np.ndarray:
    """Tensor product of single-qubit kets keyed by qubit index 1..n."""
    if sorted(factors) != list(range(1, n + 1)):
        raise GraphBellError("product ket needs exactly one factor per qubit")
    return reduce(np.kron, (np.asarray(factors[q], dtype=complex) for q in range(1, n + 1)))


def basis_ket(bits: str, order: QubitOrder | None = None) -> np.ndarray:
    order = order or QubitOrder.canonical(len(bits))
    return product_ket(order.n, {q: KET1 if b == "1" else KET0 for q, b in zip(order.positions, bits)})


def graph_state(g: GraphSpec) -> StateVector:
    """Joint +1 eigenstate of the graph's generators, via CZ on every edge of |+>^n."""
    if g.n > MAX_QUBITS:
        raise CapExceededError(f"{g.n} qubits exceeds the dense cap of {MAX_QUBITS}")
    idx = np.arange(2**g.n)
    bit = {q: (idx >> (g.n - q)) & 1 for q in range(1, g.n + 1)}
    parity = np.zeros(idx.size, dtype=np.int64)
    for u, v in g.edges:
        parity ^= bit[u] & bit[v]
    return StateVector.from_unnormalized(1.0 - 2.0 * parity, label=f"graph(n={g.n})")


def _sum_of_products(n: int, terms: Iterable[tuple[complex, Mapping[int, np.ndarray]]]) -> np.ndarray:
    return sum(c * product_ket(n, f) for c, f in terms)


def lc4_state() -> StateVector:
    """Four-photon state with H -> 0, V -> 1 on qubits 1..4."""
    bell_24_plus = [(1, {2: KET0, 4: KET0}), (1, {2: KET1, 4: KET1})]
    bell_24_minus = [(1, {2: KET0, 4: KET0}), (-1, {2: KET1, 4: KET1})]
    terms = [(c, {1: KET0, 3: KET0, **f}) for c, f in bell_24_plus]
    terms += [(c, {1: KET1, 3: KET1, **f}) for c, f in bell_24_minus]
    return StateVector.from_unnormalized(_sum_of_products(4, terms), "LC4")


def lc6_state() -> StateVector:
    """Six-qubit linear-cluster-type state in the experimental basis.

    Qubits 5 and 6 are the spatial modes of photons 1 and 4; qubit 2 carries
    the rotated basis |~0> = |+>, |~1> = |->.
    """
    pair_plus = [(1, {5: KET0, 1: KET0}), (1, {5: KET1, 1: KET1})]
    pair_minus = [(1, {5: KET0, 1: KET0}), (-1, {5: KET1, 1: KET1})]
    tail_a = [(1, {2: KET_PLUS, 4: KET0, 6: KET0}), (1, {2: KET_MINUS, 4: KET1, 6: KET1})]
    tail_b = [(1, {2: KET_MINUS, 4: KET0, 6: KET0}), (1, {2: KET_PLUS, 4: KET1, 6: KET1})]
    terms = []
    for (c1, f1), (c2, f2) in itertools.product(pair_plus, tail_a):
        terms.append((c1 * c2, {**f1, 3: KET0, **f2}))
    for (c1, f1), (c2, f2) in itertools.product(pair_minus, tail_b):
        terms.append((c1 * c2, {**f1, 3: KET1, **f2}))
    return StateVector.from_unnormalized(_sum_of_products(6, terms), "LC6")


Y6_ORDER = QubitOrder((1, 3, 2, 4, 5, 6))
Y6_BASIS_TERMS = ("000000", "001101", "110111", "111010")


def y6_state() -> StateVector:
    """Equal superposition of four basis states, written in qubit order 1-3-2-4-5-6."""
    amps = sum(basis_ket(bits, Y6_ORDER) for bits in Y6_BASIS_TERMS)
    return StateVector.from_unnormalized(amps, "Y6")


def ghz_state(n: int = 6) -> StateVector:
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1
    return StateVector.from_unnormalized(amps, f"GHZ{n}")


_NAMED = {"LC4": lc4_state, "LC6": lc6_state, "Y6": y6_state, "GHZ6": ghz_state}


def build_named_state(name: str) -> StateVector:
    try:
        return _NAMED[name.upper()]()
    except KeyError:
        raise GraphBellError(f"unknown state {name!r}; choose from {sorted(_NAMED)}") from None


def apply_pauli(amps: np.ndarray, p: PauliString) -> np.ndarray:
    """Return ``P |amps>`` using bit masks, without forming the matrix."""
    n = p.n
    if amps.size != 2**n:
        raise LengthMismatchError(f"state has {amps.size} amplitudes, operator acts on {n} qubits")
    idx = np.arange(amps.size)
    zsign = 1 - 2 * (np.bitwise_count(idx & p.z_mask) & 1).astype(np.int64)
    # Y = i X Z on each qubit
    n_y = sum(1 for a in p.axes if a == "Y")
    coeff = 1j ** ((p.phase + n_y) % 4)
    out = np.empty_like(amps, dtype=complex)
    out[idx ^ p.x_mask] = coeff * zsign * amps
    return out


def expectation(s: StateVector, p: PauliString) -> float:
    """<s|P|s> for a Hermitian Pauli string."""
    if not p.is_hermitian:
        raise NonHermitianError(f"{p} is not Hermitian")
    if p.n != s.n:
        raise LengthMismatchError(f"operator acts on {p.n} qubits, state has {s.n}")
    return float(np.vdot(s.amplitudes, apply_pauli(s.amplitudes, p)).real)


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of ``p`` (phase included)."""
    mat = reduce(np.kron, (_PAULI_MATRICES[a] for a in p.axes))
    return (1j**p.phase) * mat
