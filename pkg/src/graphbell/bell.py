"""Stabilizer-composed Bell operators: expansion, quantum value, LHV bound.

The LHV bound is found by exhaustive search over deterministic local
assignments. Each qubit is treated as its own party and every distinct
non-identity axis it is measured in gets an independent +-1 value.
"""
from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .errors import CapExceededError, GraphBellError, MalformedInputError, NonHermitianError
from .pauli import PauliString, QubitOrder, commutes, format_token, parse_token, product
from .states import StateVector, expectation, pauli_matrix

DEFAULT_LHV_CAP = 2**24
LHV_CAP_ENV = "GRAPHBELL_LHV_CAP"
_CHUNK = 2**18

LC6_ORDER = QubitOrder((5, 1, 3, 2, 4, 6))
Y6_ORDER = QubitOrder((1, 3, 2, 4, 5, 6))

# generators named by the paper's vertex labels, listed in expansion-pattern order
LC6_GENERATORS = {
    "g5": {5: "z", 1: "Z"},
    "g1": {5: "x", 1: "X", 3: "Z"},
    "g3": {1: "Z", 3: "X", 2: "Z"},
    "g2": {3: "Z", 2: "X", 4: "Z"},
    "g4": {2: "Z", 4: "X", 6: "x"},
    "g6": {4: "Z", 6: "z"},
}
Y6_GENERATORS = {
    "g3": {1: "Z", 3: "Z"},
    "g1": {1: "X", 3: "X", 2: "X", 5: "x"},
    "g5": {1: "Z", 5: "z"},
    "g2": {1: "Z", 2: "Z", 4: "Z"},
    "g4": {2: "X", 4: "X", 6: "x"},
    "g6": {4: "Z", 6: "z"},
}
# g4 as printed in the source text; it anticommutes with g1 on qubit 2
Y6_G4_AS_PRINTED = {2: "Z", 4: "Z", 6: "z"}


@dataclass(frozen=True)
class BellOperator:
    terms: tuple[PauliString, ...]
    label: str = ""
    lhv_bound: float | None = None
    order: QubitOrder | None = None
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise GraphBellError("a Bell operator needs at least one term")
        n = terms[0].n
        seen: dict[tuple[str, ...], int] = {}
        for t in terms:
            if t.n != n:
                raise GraphBellError("all terms must act on the same number of qubits")
            if not t.is_hermitian:
                raise NonHermitianError(f"term {t} is not Hermitian")
            if seen.get(t.axes, t.sign) != t.sign:
                raise GraphBellError(f"terms with axes {''.join(t.axes)} appear with both signs")
            seen[t.axes] = t.sign
        if self.lhv_bound is not None and not self.lhv_bound > 0:
            raise GraphBellError(f"LHV bound must be positive, got {self.lhv_bound}")
        object.__setattr__(self, "terms", terms)
        if self.order is None:
            object.__setattr__(self, "order", QubitOrder.canonical(n))

    @property
    def n(self) -> int:
        return self.terms[0].n

    def tokens(self, order: QubitOrder | None = None) -> list[str]:
        return [format_token(t, order or self.order) for t in self.terms]

    def with_bound(self, bound: float) -> "BellOperator":
        return replace(self, lhv_bound=float(bound))


def expand_bell(ga: PauliString, gb: PauliString, gc: PauliString, gd: PauliString,
                ge: PauliString, gf: PauliString, *, label: str = "",
                order: QubitOrder | None = None) -> BellOperator:
    """Multiply out ``(1+ga) gb (1+gc) (1+gd) ge (1+gf)`` into 16 signed terms.

    The generators must be Hermitian and pairwise commuting, which makes every
    term Hermitian.
    """
    gens = (ga, gb, gc, gd, ge, gf)
    for g in gens:
        if not g.is_hermitian:
            raise NonHermitianError(f"generator {g} is not Hermitian")
    for a, b in itertools.combinations(gens, 2):
        if not commutes(a, b):
            raise GraphBellError(f"generators {a} and {b} do not commute")
    n = ga.n
    ident = PauliString.identity(n)
    terms = []
    for use_a, use_c, use_d, use_f in itertools.product((False, True), repeat=4):
        factors = [
            ga if use_a else ident, gb,
            gc if use_c else ident, gd if use_d else ident,
            ge, gf if use_f else ident,
        ]
        terms.append(product(factors))
    return BellOperator(tuple(terms), label=label, order=order)


def _named_generators(spec: dict[str, dict[int, str]]) -> list[PauliString]:
    return [PauliString.from_map(6, ops) for ops in spec.values()]


def lc6_operator() -> BellOperator:
    op = expand_bell(*_named_generators(LC6_GENERATORS), label="B_LC6", order=LC6_ORDER)
    meta = {
        "pattern": "(1+g5) g1 (1+g3) (1+g2) g4 (1+g6)",
        "generators": {k: format_token(PauliString.from_map(6, v), LC6_ORDER) for k, v in LC6_GENERATORS.items()},
    }
    return replace(op, metadata=meta)


def y6_operator() -> BellOperator:
    op = expand_bell(*_named_generators(Y6_GENERATORS), label="B_Y6", order=Y6_ORDER)
    meta = {
        "pattern": "(1+g3) g1 (1+g5) (1+g2) g4 (1+g6)",
        "generators": {k: format_token(PauliString.from_map(6, v), Y6_ORDER) for k, v in Y6_GENERATORS.items()},
        "g4_correction": {
            "printed": format_token(PauliString.from_map(6, Y6_G4_AS_PRINTED), Y6_ORDER),
            "used": format_token(PauliString.from_map(6, Y6_GENERATORS["g4"]), Y6_ORDER),
        },
    }
    return replace(op, metadata=meta)


def mermin_ghz6(n: int = 6) -> BellOperator:
    """Full-correlation X/Y stabilizer elements of the n-qubit GHZ state.

    Every string with Y on an even-sized set S and X elsewhere, signed by
    (-1)^(|S|/2) so that it stabilizes (|0..0> + |1..1>)/sqrt(2).
    """
    terms = []
    for ys in itertools.product((False, True), repeat=n):
        k = sum(ys)
        if k % 2:
            continue
        axes = tuple("Y" if y else "X" for y in ys)
        terms.append(PauliString(0 if (k // 2) % 2 == 0 else 2, axes))
    return BellOperator(tuple(terms), label=f"Mermin_GHZ{n}",
                        metadata={"construction": "all X/Y strings with an even number of Y"})


_NAMED_OPERATORS = {"LC6": lc6_operator, "Y6": y6_operator, "MERMIN": mermin_ghz6, "MERMIN_GHZ6": mermin_ghz6}


def named_operator(name: str) -> BellOperator:
    try:
        return _NAMED_OPERATORS[name.upper()]()
    except KeyError:
        raise GraphBellError(f"unknown operator {name!r}; choose lc6, y6 or mermin") from None


def quantum_value(b: BellOperator, s: StateVector) -> float:
    return float(sum(t.sign * expectation(s, t.unsigned()) for t in b.terms))


@dataclass(frozen=True)
class LhvResult:
    bound: float
    assignment: dict[tuple[int, str], int]
    n_assignments: int


def default_lhv_cap() -> int:
    raw = os.environ.get(LHV_CAP_ENV)
    if raw is None:
        return DEFAULT_LHV_CAP
    try:
        return int(float(raw))
    except ValueError:
        raise GraphBellError(f"{LHV_CAP_ENV}={raw!r} is not a number") from None


def lhv_search(b: BellOperator, cap: int | None = None, workers: int = 1) -> LhvResult:
    """Exhaustive maximum of the operator over deterministic +-1 assignments."""
    cap = default_lhv_cap() if cap is None else cap
    variables = sorted({(q, a) for t in b.terms for q, a in enumerate(t.axes, start=1) if a != "I"})
    n_vars = len(variables)
    total = 2**n_vars
    if total > cap:
        raise CapExceededError(
            f"LHV search over 2^{n_vars} = {total} assignments exceeds the cap of {cap} "
            f"(raise it with {LHV_CAP_ENV})"
        )
    var_bit = {v: k for k, v in enumerate(variables)}
    masks = np.array(
        [sum(1 << var_bit[(q, a)] for q, a in enumerate(t.axes, start=1) if a != "I") for t in b.terms],
        dtype=np.int64,
    )
    signs = np.array([t.sign for t in b.terms], dtype=np.int64)

    def scan(start: int) -> tuple[int, int]:
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        parity = np.bitwise_count(idx[:, None] & masks[None, :]) & 1
        values = (signs[None, :] * (1 - 2 * parity.astype(np.int64))).sum(axis=1)
        k = int(np.argmax(values))
        return int(values[k]), int(idx[k])

    starts = range(0, total, _CHUNK)
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, starts))
    else:
        results = [scan(s) for s in starts]
    best, best_idx = max(results, key=lambda r: (r[0], -r[1]))
    assignment = {v: 1 - 2 * ((best_idx >> var_bit[v]) & 1) for v in variables}
    return LhvResult(float(best), assignment, total)


def lhv_bound(b: BellOperator, cap: int | None = None, workers: int = 1) -> float:
    return lhv_search(b, cap=cap, workers=workers).bound


def with_lhv_bound(b: BellOperator, cap: int | None = None) -> BellOperator:
    return b if b.lhv_bound is not None else b.with_bound(lhv_bound(b, cap=cap))


def violation_ratio(b: BellOperator, s: StateVector) -> float:
    bound = b.lhv_bound if b.lhv_bound is not None else lhv_bound(b)
    return quantum_value(b, s) / bound


def ideal_state_for(b: BellOperator) -> str:
    """Name of the state an operator was built for, from its label."""
    label = b.label.upper()
    if "LC6" in label:
        return "LC6"
    if "Y6" in label:
        return "Y6"
    if "GHZ" in label:
        return "GHZ6"
    raise GraphBellError(f"no reference state known for operator {b.label!r}")


def operator_to_json(b: BellOperator) -> str:
    doc = {
        "label": b.label,
        "order": str(b.order),
        "lhv_bound": b.lhv_bound,
        "terms": b.tokens(),
        "metadata": b.metadata,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def operator_from_json(text: str) -> BellOperator:
    try:
        doc = json.loads(text)
        order = QubitOrder.parse(doc["order"])
        terms = tuple(parse_token(tok, order) for tok in doc["terms"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"malformed operator document: {exc}") from exc
    return BellOperator(terms, label=doc.get("label", ""), lhv_bound=doc.get("lhv_bound"),
                        order=order, metadata=doc.get("metadata") or {})


def ideal_values(b: BellOperator, s: StateVector) -> list[float]:
    """Per-term expectations of the signed terms on ``s``."""
    return [expectation(s, t) for t in b.terms]


def term_matrix_sum(b: BellOperator) -> np.ndarray:
    """Dense matrix of the whole operator; used as an independent check."""
    return sum(pauli_matrix(t) for t in b.terms)

