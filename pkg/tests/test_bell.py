import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphbell.bell import (
    BellOperator, LC6_GENERATORS, Y6_G4_AS_PRINTED, Y6_GENERATORS, expand_bell, ideal_values,
    lc6_operator, lhv_bound, lhv_search, mermin_ghz6, named_operator, operator_from_json,
    operator_to_json, quantum_value, term_matrix_sum, violation_ratio, y6_operator,
)
from graphbell.errors import CapExceededError, GraphBellError
from graphbell.pauli import PauliString, QubitOrder, format_token, parse_token
from graphbell.states import StateVector, build_named_state, expectation, basis_ket


def lhv_brute_force(op):
    """Plain nested enumeration: every (qubit, axis) gets an independent +-1."""
    variables = sorted({(q, a) for t in op.terms for q, a in enumerate(t.axes, 1) if a != "I"})
    best = -np.inf
    for values in itertools.product((1, -1), repeat=len(variables)):
        lam = dict(zip(variables, values))
        total = 0
        for t in op.terms:
            v = t.sign
            for q, a in enumerate(t.axes, 1):
                if a != "I":
                    v *= lam[(q, a)]
            total += v
        best = max(best, total)
    return best


def gens(spec):
    return [PauliString.from_map(6, ops) for ops in spec.values()]


class TestExpand:
    def test_lc6_reproduces_table_i(self, table_i):
        order, tokens = table_i
        op = expand_bell(*gens(LC6_GENERATORS))
        assert len(op.terms) == 16
        assert sorted(format_token(t, order) for t in op.terms) == sorted(tokens)

    def test_y6_reproduces_table_ii(self, table_ii):
        order, tokens = table_ii
        op = expand_bell(*gens(Y6_GENERATORS))
        assert sorted(format_token(t, order) for t in op.terms) == sorted(tokens)

    def test_spot_terms(self):
        lc6 = lc6_operator().tokens()
        for tok in ("xXZZXx", "-xXZZYy", "xYYIXx", "-yYZZXx"):
            assert tok in lc6
        y6 = y6_operator().tokens()
        assert "-XXIYxy" in y6 and "XXIXxx" in y6

    def test_identity_generators(self):
        ident = PauliString.identity(6)
        op = expand_bell(*[ident] * 6)
        assert len(op.terms) == 16 and all(t == ident and t.sign == 1 for t in op.terms)

    def test_printed_y6_g4_is_rejected(self):
        spec = dict(Y6_GENERATORS, g4=Y6_G4_AS_PRINTED)
        with pytest.raises(GraphBellError, match="do not commute"):
            expand_bell(*gens(spec))

    def test_half_the_terms_have_weight_five(self):
        for op in (lc6_operator(), y6_operator()):
            weights = sorted(t.weight for t in op.terms)
            assert weights == [5] * 8 + [6] * 8

    def test_opposite_sign_duplicates_rejected(self):
        x = parse_token("XI")
        with pytest.raises(GraphBellError):
            BellOperator((x, x.negate()))

    def test_g4_correction_recorded(self):
        meta = y6_operator().metadata["g4_correction"]
        assert meta == {"printed": "IIZZIz", "used": "IIXXIx"}


class TestQuantumValue:
    def test_ideal_values(self):
        assert quantum_value(lc6_operator(), build_named_state("LC6")) == pytest.approx(16, abs=1e-9)
        assert quantum_value(y6_operator(), build_named_state("Y6")) == pytest.approx(16, abs=1e-9)

    def test_every_term_stabilizes_ideal_state(self):
        for op, name in ((lc6_operator(), "LC6"), (y6_operator(), "Y6"), (mermin_ghz6(), "GHZ6")):
            assert ideal_values(op, build_named_state(name)) == pytest.approx([1.0] * len(op.terms), abs=1e-9)

    def test_all_zero_state_against_dense_matrix(self):
        op = lc6_operator()
        s = StateVector(basis_ket("000000"))
        dense = np.vdot(s.amplitudes, term_matrix_sum(op) @ s.amplitudes).real
        value = quantum_value(op, s)
        assert value == pytest.approx(dense, abs=1e-12)
        # only terms made of Z and I survive on a computational basis state
        diag = [t for t in op.terms if set(t.axes) <= {"I", "Z"}]
        assert value == pytest.approx(sum(t.sign for t in diag), abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_bounded_by_term_count(self, seed):
        rng = np.random.default_rng(seed)
        s = StateVector.from_unnormalized(rng.normal(size=64) + 1j * rng.normal(size=64))
        for op in (lc6_operator(), y6_operator()):
            assert abs(quantum_value(op, s)) <= 16 + 1e-9
            assert quantum_value(op, s) < 16 - 1e-6


class TestLhv:
    def test_lc6_bound_and_space(self):
        op = lc6_operator()
        res = lhv_search(op)
        assert res.bound == 4 == lhv_brute_force(op)
        assert res.n_assignments == 2**14

    def test_y6_bound(self):
        op = y6_operator()
        res = lhv_search(op)
        assert res.bound == 4 == lhv_brute_force(op)
        # qubit 2 only ever carries Z or I, so 11 distinct local observables
        assert res.n_assignments == 2**11

    def test_mermin_bound(self):
        op = mermin_ghz6()
        assert lhv_bound(op) == 8 == lhv_brute_force(op)

    def test_single_term(self):
        assert lhv_bound(BellOperator((parse_token("XIIIII"),))) == 1

    def test_optimal_assignment_attains_bound(self):
        op = lc6_operator()
        res = lhv_search(op)
        total = 0
        for t in op.terms:
            v = t.sign
            for q, a in enumerate(t.axes, 1):
                if a != "I":
                    v *= res.assignment[(q, a)]
            total += v
        assert total == res.bound

    def test_cap(self, monkeypatch):
        with pytest.raises(CapExceededError, match="2\\^14"):
            lhv_bound(lc6_operator(), cap=2**13)
        monkeypatch.setenv("GRAPHBELL_LHV_CAP", "1000")
        with pytest.raises(CapExceededError):
            lhv_bound(lc6_operator())

    def test_parallel_workers_agree(self, monkeypatch):
        import graphbell.bell as bell_mod

        monkeypatch.setattr(bell_mod, "_CHUNK", 512)
        assert lhv_search(lc6_operator(), workers=4).bound == 4

    @pytest.mark.parametrize("perm", [(2, 1, 3, 4, 5, 6), (6, 5, 4, 3, 2, 1), (3, 6, 1, 5, 2, 4)])
    def test_invariant_under_relabeling(self, perm):
        op = lc6_operator()
        relabeled = BellOperator(tuple(PauliString(t.phase, tuple(t.axes[p - 1] for p in perm)) for t in op.terms))
        assert lhv_bound(relabeled) == 4

    @settings(max_examples=10, deadline=None)
    @given(st.integers(1, 6), st.sampled_from("XYZ"))
    def test_invariant_under_flipping_one_observable(self, qubit, axis):
        op = y6_operator()
        flipped = BellOperator(tuple(
            t.negate() if t.axes[qubit - 1] == axis else t for t in op.terms
        ))
        assert lhv_bound(flipped) == 4


class TestRatio:
    def test_ideal_ratios(self):
        assert violation_ratio(lc6_operator(), build_named_state("LC6")) == pytest.approx(4.0)
        assert violation_ratio(y6_operator(), build_named_state("Y6")) == pytest.approx(4.0)
        assert violation_ratio(mermin_ghz6(), build_named_state("GHZ6")) == pytest.approx(4.0)

    def test_identity_operator(self):
        op = BellOperator((PauliString.identity(6),))
        assert violation_ratio(op, build_named_state("Y6")) == pytest.approx(1.0)


class TestMermin:
    def test_terms(self):
        op = mermin_ghz6()
        assert len(op.terms) == 32
        assert all(t.weight == 6 for t in op.terms)
        assert parse_token("XXXXXX") in op.terms

    def test_value_on_ghz(self):
        s = build_named_state("GHZ6")
        assert quantum_value(mermin_ghz6(), s) == pytest.approx(32, abs=1e-9)
        assert expectation(s, parse_token("XXXXXX")) == pytest.approx(1)


class TestSerialization:
    @pytest.mark.parametrize("name", ["lc6", "y6", "mermin"])
    def test_round_trip(self, name):
        op = named_operator(name).with_bound(4.0)
        back = operator_from_json(operator_to_json(op))
        assert back.terms == op.terms and back.lhv_bound == 4.0 and back.label == op.label
        assert back.tokens() == op.tokens()

    def test_document_lists_tokens_in_display_order(self, table_i):
        doc = json.loads(operator_to_json(lc6_operator()))
        assert doc["order"] == "5-1-3-2-4-6"
        assert set(doc["terms"]) == set(table_i[1])
