"""Exact stabilizer-state fidelity and the F > 1/2 entanglement criterion.

For a stabilizer state |G><G| = 2^-k * sum over the group, so the fidelity of
any state with |G> is the average of the group-element expectations.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bell import LC6_GENERATORS, Y6_GENERATORS
from .errors import GraphBellError, LengthMismatchError, NonHermitianError
from .noise import DepolarizingNoise, damping_factor, dm_expectation
from .pauli import PauliString, QubitOrder, commutes, format_token, product
from .states import StateVector, expectation

GME_THRESHOLD = 0.5

_NAMED_GENERATORS = {
    "LC4": (4, [{1: "Z", 3: "Z"}, {2: "Z", 4: "Z"}, {1: "X", 3: "X", 2: "Z"}, {1: "Z", 2: "X", 4: "X"}]),
    "LC6": (6, list(LC6_GENERATORS.values())),
    "Y6": (6, list(Y6_GENERATORS.values())),
    "GHZ6": (6, [{1: "X", 2: "X", 3: "X", 4: "X", 5: "X", 6: "X"}]
             + [{i: "Z", i + 1: "Z"} for i in range(1, 6)]),
}


def named_state_generators(name: str) -> list[PauliString]:
    """A complete commuting generator set for one of the named states."""
    try:
        n, spec = _NAMED_GENERATORS[name.upper()]
    except KeyError:
        raise GraphBellError(f"unknown state {name!r}; choose from {sorted(_NAMED_GENERATORS)}") from None
    return [PauliString.from_map(n, ops) for ops in spec]


@dataclass(frozen=True)
class StabilizerGroup:
    generators: tuple[PauliString, ...]
    elements: tuple[PauliString, ...]

    @property
    def n(self) -> int:
        return self.generators[0].n

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: PauliString) -> bool:
        return p in set(self.elements)

    def weight_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(e.weight for e in self.elements).items()))

    def dump(self, order: QubitOrder | None = None) -> str:
        """One ``token weight`` line per element."""
        lines = [f"{format_token(e, order, explicit_plus=True)} {e.weight}" for e in self.elements]
        return "\n".join(lines) + "\n"


def stabilizer_group(generators: Sequence[PauliString]) -> StabilizerGroup:
    gens = tuple(generators)
    if not gens:
        raise GraphBellError("need at least one generator")
    for g in gens:
        if not g.is_hermitian:
            raise NonHermitianError(f"generator {g} is not Hermitian")
    for a, b in itertools.combinations(gens, 2):
        if not commutes(a, b):
            raise GraphBellError(f"generators {a} and {b} do not commute")
    n = gens[0].n
    elements = []
    seen = set()
    for mask in range(2 ** len(gens)):
        chosen = [g for k, g in enumerate(gens) if mask >> k & 1]
        el = product(chosen, n=n)
        if el.axes in seen:
            raise GraphBellError("generators are not independent")
        seen.add(el.axes)
        elements.append(el)
    return StabilizerGroup(gens, tuple(elements))


def exact_fidelity(state: StateVector | np.ndarray, group: StabilizerGroup) -> float:
    """Overlap of a pure state or density matrix with the group's stabilizer state."""
    dim = 2**group.n
    if group.order != dim:
        raise LengthMismatchError(f"group of order {group.order} does not fix a state on {group.n} qubits")
    if isinstance(state, StateVector):
        if state.n != group.n:
            raise LengthMismatchError(f"state has {state.n} qubits, group acts on {group.n}")
        total = sum(expectation(state, e) for e in group.elements)
    else:
        rho = np.asarray(state, dtype=complex)
        if rho.shape != (dim, dim):
            raise LengthMismatchError(f"density matrix shape {rho.shape} does not match {group.n} qubits")
        total = sum(dm_expectation(rho, e) for e in group.elements)
    return float(total / group.order)


def fidelity_under_noise(group: StabilizerGroup, noise: DepolarizingNoise) -> float:
    """Fidelity of the depolarized stabilizer state with itself."""
    return float(sum(damping_factor(e, noise) for e in group.elements) / group.order)


def gme_check(fidelity: float) -> bool:
    if not 0.0 <= fidelity <= 1.0:
        raise GraphBellError(f"fidelity {fidelity} outside [0, 1]")
    return fidelity > GME_THRESHOLD
