"""Phase-tracked Pauli strings on a fixed number of qubits.

Qubits are indexed 1..n internally, qubit 1 being the leftmost tensor factor.
Display orders such as ``5-1-3-2-4-6`` only affect parsing and formatting.
The global phase is kept exactly as a power of ``i`` (0..3).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import LengthMismatchError, NonHermitianError, TokenParseError

AXES = ("I", "X", "Y", "Z")

# (a, b) -> (c, k) with a*b = i^k c
_PRODUCT: dict[tuple[str, str], tuple[str, int]] = {}
for _a in AXES:
    _PRODUCT[("I", _a)] = (_a, 0)
    _PRODUCT[(_a, "I")] = (_a, 0)
    _PRODUCT[(_a, _a)] = ("I", 0)
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (_c, 1)
    _PRODUCT[(_b, _a)] = (_c, 3)

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TOKEN_RE = re.compile(r"^([+\-−]?)([IXYZixyz]+)$")


@dataclass(frozen=True)
class QubitOrder:
    """Left-to-right display order of qubit indices, e.g. ``(5, 1, 3, 2, 4, 6)``."""

    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        pos = tuple(int(q) for q in self.positions)
        if sorted(pos) != list(range(1, len(pos) + 1)):
            raise TokenParseError(f"qubit order {pos} is not a permutation of 1..{len(pos)}")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def parse(cls, text: str) -> "QubitOrder":
        try:
            return cls(tuple(int(t) for t in re.split(r"[-,\s]+", text.strip()) if t))
        except ValueError as exc:
            raise TokenParseError(f"bad qubit order {text!r}") from exc

    @classmethod
    def canonical(cls, n: int) -> "QubitOrder":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.positions)

    def __str__(self) -> str:
        return "-".join(str(q) for q in self.positions)


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis times ``i**phase``.

    ``axes[k]`` acts on qubit ``k + 1``. ``lowercase`` holds qubit indices
    whose letter is displayed in lower case (spatial-mode qubits); it takes no
    part in equality or algebra.
    """

    phase: int
    axes: tuple[str, ...]
    lowercase: frozenset[int] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:
        axes = tuple(a.upper() for a in self.axes)
        for a in axes:
            if a not in AXES:
                raise TokenParseError(f"invalid Pauli axis {a!r}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "phase", int(self.phase) % 4)
        object.__setattr__(self, "lowercase", frozenset(self.lowercase))

    # -- constructors --------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(0, ("I",) * n)

    @classmethod
    def from_map(cls, n: int, ops: Mapping[int, str], sign: int = 1) -> "PauliString":
        """Build from ``{qubit: letter}``; letter case sets the display case.

        >>> str(PauliString.from_map(3, {2: "Z", 1: "x"}))
        '+xZI'
        """
        axes = ["I"] * n
        lower = set()
        for q, letter in ops.items():
            if not 1 <= q <= n:
                raise TokenParseError(f"qubit {q} outside 1..{n}")
            axes[q - 1] = letter.upper()
            if letter.islower():
                lower.add(q)
        if sign not in (1, -1):
            raise NonHermitianError("sign must be +1 or -1")
        return cls(0 if sign == 1 else 2, tuple(axes), frozenset(lower))

    # -- properties ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise NonHermitianError(f"{self} has an imaginary phase")
        return 1 if self.phase == 0 else -1

    @property
    def weight(self) -> int:
        return weight(self)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, a in enumerate(self.axes, start=1) if a != "I")

    @property
    def x_mask(self) -> int:
        """Bit mask (qubit 1 = most significant bit) of X/Y positions."""
        return _mask(self.axes, ("X", "Y"))

    @property
    def z_mask(self) -> int:
        return _mask(self.axes, ("Z", "Y"))

    def unsigned(self) -> "PauliString":
        return PauliString(0, self.axes, self.lowercase)

    def negate(self) -> "PauliString":
        return PauliString(self.phase + 2, self.axes, self.lowercase)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_token(self, QubitOrder.canonical(self.n), explicit_plus=True)


def _mask(axes: Sequence[str], hits: tuple[str, ...]) -> int:
    m = 0
    for a in axes:
        m = (m << 1) | (a in hits)
    return m


def _check_lengths(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise LengthMismatchError(f"length mismatch: {a.n} vs {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b`` including the phase."""
    _check_lengths(a, b)
    phase = a.phase + b.phase
    axes = []
    for x, y in zip(a.axes, b.axes):
        c, k = _PRODUCT[(x, y)]
        axes.append(c)
        phase += k
    return PauliString(phase, tuple(axes), a.lowercase | b.lowercase)


def product(strings: Iterable[PauliString], n: int | None = None) -> PauliString:
    strings = list(strings)
    if not strings:
        if n is None:
            raise LengthMismatchError("empty product needs an explicit qubit count")
        return PauliString.identity(n)
    out = strings[0]
    for s in strings[1:]:
        out = multiply(out, s)
    return out


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_lengths(a, b)
    clashes = sum(1 for x, y in zip(a.axes, b.axes) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


def weight(p: PauliString) -> int:
    return sum(1 for a in p.axes if a != "I")


def parse_token(text: str, order: QubitOrder | None = None) -> PauliString:
    """Parse a signed observable token such as ``-xXZZYy``.

    Letters are read left to right in ``order`` (canonical order if omitted).
    """
    m = _TOKEN_RE.match(text.strip())
    if not m:
        raise TokenParseError(f"invalid observable token {text!r}")
    sign_text, letters = m.groups()
    if order is None:
        order = QubitOrder.canonical(len(letters))
    if len(letters) != order.n:
        raise TokenParseError(
            f"token {text!r} has {len(letters)} letters, order {order} expects {order.n}"
        )
    axes = ["I"] * order.n
    lower = set()
    for q, letter in zip(order.positions, letters):
        axes[q - 1] = letter.upper()
        if letter.islower():
            lower.add(q)
    phase = 2 if sign_text in ("-", "−") else 0
    return PauliString(phase, tuple(axes), frozenset(lower))


def format_token(p: PauliString, order: QubitOrder | None = None, *, explicit_plus: bool = False) -> str:
    """Inverse of :func:`parse_token`; a ``+`` sign is omitted unless requested."""
    if order is None:
        order = QubitOrder.canonical(p.n)
    if order.n != p.n:
        raise LengthMismatchError(f"order {order} does not match {p.n} qubits")
    letters = "".join(
        p.axes[q - 1].lower() if q in p.lowercase else p.axes[q - 1] for q in order.positions
    )
    prefix = _PHASE_TEXT[p.phase]
    if prefix == "+" and not explicit_plus:
        prefix = ""
    return prefix + letters
