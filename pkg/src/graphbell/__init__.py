"""Stabilizer-composed Bell inequalities on small graph states."""
from .bell import (
    BellOperator, expand_bell, lc6_operator, lhv_bound, lhv_search, mermin_ghz6,
    named_operator, quantum_value, violation_ratio, y6_operator,
)
from .errors import GraphBellError
from .pauli import PauliString, QubitOrder, commutes, format_token, multiply, parse_token, weight
from .states import GraphSpec, StateVector, build_named_state, expectation, graph_state, stabilizer_generators

__version__ = "0.1.0"
