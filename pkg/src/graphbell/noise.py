"""Per-qubit depolarizing noise, rho -> p rho + (1 - p) tr_i(rho) (x) 1/2.

Single-qubit depolarizing multiplies a Pauli expectation by p_i for every
qubit where the string is not the identity, so Bell values are damped term
by term. ``apply_depolarizing_dm`` does the same thing the slow way on a
dense density operator and is kept as a cross-check.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bell import BellOperator, lhv_bound
from .errors import CapExceededError, GraphBellError, LengthMismatchError
from .pauli import PauliString
from .states import StateVector, pauli_matrix

MAX_DM_QUBITS = 6


@dataclass(frozen=True)
class DepolarizingNoise:
    """Retention probability per qubit; ``p[i]`` acts on qubit ``i + 1``."""

    p: tuple[float, ...]

    def __post_init__(self) -> None:
        p = tuple(float(x) for x in self.p)
        for x in p:
            if not 0.0 <= x <= 1.0:
                raise GraphBellError(f"retention probability {x} outside [0, 1]")
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, p: float, n: int) -> "DepolarizingNoise":
        return cls((p,) * n)

    @property
    def n(self) -> int:
        return len(self.p)


def damping_factor(term: PauliString, noise: DepolarizingNoise) -> float:
    if term.n != noise.n:
        raise LengthMismatchError(f"term acts on {term.n} qubits, noise on {noise.n}")
    f = 1.0
    for a, p in zip(term.axes, noise.p):
        if a != "I":
            f *= p
    return f


def noisy_expectation(ideal: float, term: PauliString, noise: DepolarizingNoise) -> float:
    if abs(ideal) > 1 + 1e-12:
        raise GraphBellError(f"ideal expectation {ideal} outside [-1, 1]")
    return ideal * damping_factor(term, noise)


def noisy_bell_value(b: BellOperator, ideal_values: Sequence[float], noise: DepolarizingNoise) -> float:
    if len(ideal_values) != len(b.terms):
        raise LengthMismatchError(f"{len(ideal_values)} ideal values for {len(b.terms)} terms")
    return float(sum(noisy_expectation(v, t, noise) for v, t in zip(ideal_values, b.terms)))


def uniform_bell_value(b: BellOperator, ideal_values: Sequence[float], p: float) -> float:
    return noisy_bell_value(b, ideal_values, DepolarizingNoise.uniform(p, b.n))


@dataclass(frozen=True)
class ThresholdResult:
    label: str
    bound: float
    p_star: float
    iterations: int

    def to_json(self) -> str:
        return json.dumps(
            {"operator": self.label, "bound": self.bound, "p_star": self.p_star, "iterations": self.iterations},
            indent=2, sort_keys=True,
        )


def violation_threshold(b: BellOperator, ideal_values: Sequence[float], *,
                        bound: float | None = None, tol: float = 1e-9) -> ThresholdResult:
    """Uniform retention p* at which the damped Bell value meets the LHV bound.

    Bisection on [0, 1]; assumes the value is nondecreasing in p, which holds
    whenever every ideal term value is nonnegative.
    """
    if bound is None:
        bound = b.lhv_bound
    if bound is None:
        bound = lhv_bound(b)
    f = lambda p: uniform_bell_value(b, ideal_values, p) - bound  # noqa: E731
    if f(1.0) <= 0:
        raise GraphBellError(f"{b.label or 'operator'} shows no violation at p = 1; no threshold")
    lo, hi = 0.0, 1.0
    if f(lo) >= 0:
        return ThresholdResult(b.label, float(bound), 0.0, 0)
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        it += 1
    return ThresholdResult(b.label, float(bound), 0.5 * (lo + hi), it)


@dataclass(frozen=True)
class DecayCurve:
    samples: tuple[tuple[float, float], ...]
    label: str = ""
    grid: tuple[float, float, int] | None = None
    normalization: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ps = [p for p, _ in self.samples]
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise GraphBellError("decay curve p values must be strictly increasing")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["p", "value", "operator"]
        if self.normalization:
            header.append("normalized")
        w.writerow(header)
        for p, v in self.samples:
            row = [_fmt(p), _fmt(v), self.label]
            if self.normalization:
                row.append(_fmt(v / self.normalization))
            w.writerow(row)
        return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def grid_points(p_min: float, p_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise GraphBellError("a grid needs at least two points")
    if not (0.0 <= p_min < p_max <= 1.0):
        raise GraphBellError(f"grid bounds [{p_min}, {p_max}] must satisfy 0 <= min < max <= 1")
    return np.linspace(p_min, p_max, steps)


def decay_curve(b: BellOperator, ideal_values: Sequence[float], p_min: float = 0.0,
                p_max: float = 1.0, steps: int = 11) -> DecayCurve:
    ps = grid_points(p_min, p_max, steps)
    samples = tuple((float(p), uniform_bell_value(b, ideal_values, float(p))) for p in ps)
    noiseless = float(sum(ideal_values))
    return DecayCurve(samples, b.label, (p_min, p_max, steps), normalization=noiseless or None)


def apply_depolarizing_dm(s: StateVector | np.ndarray, noise: DepolarizingNoise) -> np.ndarray:
    """Dense density operator after depolarizing every qubit independently."""
    rho = s.density_matrix() if isinstance(s, StateVector) else np.asarray(s, dtype=complex)
    n = int(round(np.log2(rho.shape[0])))
    if n > MAX_DM_QUBITS:
        raise CapExceededError(f"density-operator oracle is capped at {MAX_DM_QUBITS} qubits, got {n}")
    if noise.n != n:
        raise LengthMismatchError(f"noise acts on {noise.n} qubits, state has {n}")
    t = rho.reshape((2,) * (2 * n))
    for i, p in enumerate(noise.p):
        if p == 1.0:
            continue
        reduced = np.trace(t, axis1=i, axis2=n + i)
        mixed = np.moveaxis(np.multiply.outer(reduced, np.eye(2) / 2), [-2, -1], [i, n + i])
        t = p * t + (1 - p) * mixed
    return t.reshape(2**n, 2**n)


def dm_expectation(rho: np.ndarray, p: PauliString) -> float:
    return float(np.trace(rho @ pauli_matrix(p)).real)
