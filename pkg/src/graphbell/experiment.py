"""Counting-statistics simulation, measurement-table ingestion and Bell aggregates."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .bell import BellOperator
from .errors import GraphBellError, MalformedInputError, NonHermitianError
from .noise import DepolarizingNoise, noisy_expectation
from .pauli import PauliString, QubitOrder, format_token, parse_token
from .states import StateVector, expectation

# back-solved from sigma = sqrt((1 - E^2) / N) with E ~ 0.6, sigma ~ 0.04
DEFAULT_MEAN_EVENTS = 400.0
DEFAULT_SEED = 20090101

PACKAGED_TABLES = {"lc6": "table1_lc6.csv", "y6": "table2_y6.csv"}

# fidelity lower bounds quoted alongside the Bell data: (value, sigma)
REPORTED_FIDELITY_BOUNDS = {"LC6": (0.61, 0.01), "Y6": (0.63, 0.04)}


@dataclass(frozen=True)
class MeasurementRecord:
    term: PauliString
    estimate: float
    sigma: float
    events: int | None = None

    def __post_init__(self) -> None:
        if not self.term.is_hermitian:
            raise NonHermitianError(f"{self.term} is not Hermitian")
        if not self.sigma >= 0:
            raise GraphBellError(f"sigma must be nonnegative, got {self.sigma}")
        if abs(self.estimate) > 1 + 3 * self.sigma + 1e-12:
            raise GraphBellError(f"estimate {self.estimate} is incompatible with sigma {self.sigma}")
        if self.events is not None and self.events < 0:
            raise GraphBellError("event count must be nonnegative")


def simulate_counts(s: StateVector, noise: DepolarizingNoise, term: PauliString,
                    mean_events: float = DEFAULT_MEAN_EVENTS,
                    seed: int | np.random.SeedSequence = DEFAULT_SEED) -> MeasurementRecord:
    """One Poisson-length run of +-1 outcomes for the signed observable ``term``."""
    if not term.is_hermitian:
        raise NonHermitianError(f"{term} is not Hermitian")
    if not mean_events > 0:
        raise GraphBellError("mean_events must be positive")
    e_true = noisy_expectation(expectation(s, term), term, noise)
    e_true = min(1.0, max(-1.0, e_true))
    rng = np.random.default_rng(seed)
    n = int(rng.poisson(mean_events))
    if n == 0:
        n = int(rng.poisson(mean_events))
        if n == 0:
            raise GraphBellError(f"drew zero events twice at mean {mean_events}")
    n_plus = int(rng.binomial(n, (1 + e_true) / 2))
    est = (2 * n_plus - n) / n
    sigma = math.sqrt(max(0.0, 1 - est * est) / n)
    return MeasurementRecord(term, est, sigma, n)


def simulate_bell(b: BellOperator, s: StateVector, noise: DepolarizingNoise,
                  mean_events: float = DEFAULT_MEAN_EVENTS, seed: int = DEFAULT_SEED) -> list[MeasurementRecord]:
    """Simulate every setting of ``b``; per-setting seeds are spawned from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(len(b.terms))
    return [simulate_counts(s, noise, t, mean_events, c) for t, c in zip(b.terms, children)]


@dataclass
class TableDocument:
    records: list[MeasurementRecord]
    order: QubitOrder | None
    meta: dict[str, str] = field(default_factory=dict)


def parse_table_document(text: str, order: QubitOrder | None = None) -> TableDocument:
    """Read an ``observable,value,sigma`` CSV (an ``events`` column is optional).

    ``# key=value`` comment lines are collected as metadata; ``# order=...``
    sets the qubit order unless one is passed explicitly.
    """
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            key, sep, value = stripped.lstrip("#").strip().partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        if stripped:
            body.append(stripped)
    if order is None and "order" in meta:
        order = QubitOrder.parse(meta["order"])
    records = []
    if body:
        reader = csv.DictReader(body)
        header = [f.strip() for f in reader.fieldnames or []]
        if header not in (["observable", "value", "sigma"], ["observable", "value", "sigma", "events"]):
            raise MalformedInputError(f"expected header observable,value,sigma, got {reader.fieldnames}")
        reader.fieldnames = header
        for lineno, row in enumerate(reader, start=2):
            try:
                term = parse_token(row["observable"], order)
                events = int(row["events"]) if row.get("events") else None
                records.append(MeasurementRecord(term, float(row["value"]), float(row["sigma"]), events))
            except (GraphBellError, ValueError, TypeError) as exc:
                raise MalformedInputError(f"row {lineno}: {exc}") from exc
    return TableDocument(records, order, meta)


def ingest_table(text: str, order: QubitOrder | None = None) -> list[MeasurementRecord]:
    return parse_table_document(text, order).records


def packaged_table(name: str) -> str:
    try:
        fname = PACKAGED_TABLES[name.lower()]
    except KeyError:
        raise GraphBellError(f"no packaged table {name!r}; choose from {sorted(PACKAGED_TABLES)}") from None
    return resources.files("graphbell.data").joinpath(fname).read_text()


def records_to_csv(records: Iterable[MeasurementRecord], order: QubitOrder | None = None) -> str:
    buf = io.StringIO()
    if order is not None:
        buf.write(f"# order={order}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["observable", "value", "sigma", "events"])
    for r in records:
        w.writerow([format_token(r.term, order), f"{r.estimate:.10g}", f"{r.sigma:.10g}",
                    "" if r.events is None else r.events])
    return buf.getvalue()


@dataclass(frozen=True)
class BellAggregate:
    value: float
    sigma: float
    bound: float
    sigmas_above: float
    ratio_D: float
    sigma_D: float
    n_terms: int = 0

    def as_dict(self) -> dict[str, float]:
        return {
            "value": self.value, "sigma": self.sigma, "bound": self.bound,
            "sigmas_above": self.sigmas_above, "D": self.ratio_D, "sigma_D": self.sigma_D,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        return (
            f"value        {self.value:.4f} +- {self.sigma:.4f}\n"
            f"LHV bound    {self.bound:g}\n"
            f"violation    {self.sigmas_above:.2f} sigma\n"
            f"D            {self.ratio_D:.4f} +- {self.sigma_D:.4f}\n"
        )


def aggregate_bell(records: Sequence[MeasurementRecord], bound: float,
                   reference: BellOperator | None = None) -> BellAggregate:
    """Sum the estimates; independent settings, so errors add in quadrature."""
    if not bound > 0:
        raise GraphBellError("bound must be positive")
    if reference is not None:
        _check_coverage(records, reference)
    value = math.fsum(r.estimate for r in records)
    sigma = math.sqrt(math.fsum(r.sigma**2 for r in records))
    above = (value - bound) / sigma if sigma > 0 else math.copysign(math.inf, value - bound)
    return BellAggregate(value, sigma, float(bound), above, value / bound, sigma / bound, len(records))


def _check_coverage(records: Sequence[MeasurementRecord], reference: BellOperator) -> None:
    wanted = {t: 0 for t in reference.terms}
    for r in records:
        if r.term not in wanted:
            raise GraphBellError(f"record {r.term} is not a term of {reference.label or 'the operator'}")
        wanted[r.term] += 1
    dupes = [str(t) for t, c in wanted.items() if c > 1]
    missing = [str(t) for t, c in wanted.items() if c == 0]
    if dupes:
        raise GraphBellError(f"terms measured more than once: {', '.join(dupes)}")
    if missing:
        raise GraphBellError(f"terms missing from records: {', '.join(missing)}")
