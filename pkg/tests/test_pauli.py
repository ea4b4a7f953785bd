import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphbell.errors import LengthMismatchError, TokenParseError
from graphbell.pauli import (
    PauliString, QubitOrder, commutes, format_token, multiply, parse_token, weight,
)
from graphbell.states import pauli_matrix

LC6_ORDER = QubitOrder((5, 1, 3, 2, 4, 6))


def P(ops, n=6, sign=1):
    return PauliString.from_map(n, ops, sign)


def pauli_strings(n):
    axes = st.lists(st.sampled_from("IXYZ"), min_size=n, max_size=n)
    return st.builds(lambda a, ph: PauliString(ph, tuple(a)), axes, st.sampled_from([0, 2]))


orders = st.integers(1, 6).flatmap(lambda n: st.permutations(range(1, n + 1)).map(QubitOrder))


class TestMultiply:
    def test_x_times_z_on_qubit_4(self):
        assert multiply(P({4: "X"}), P({4: "Z"})) == PauliString(3, ("I", "I", "I", "Y", "I", "I"))
        assert multiply(P({4: "Z"}), P({4: "X"})) == PauliString(1, ("I", "I", "I", "Y", "I", "I"))

    def test_lc6_g1_g4_g6_gives_signed_table_token(self):
        g1 = P({5: "x", 1: "X", 3: "Z"})
        g4 = P({2: "Z", 4: "X", 6: "x"})
        g6 = P({4: "Z", 6: "z"})
        out = g1 * g4 * g6
        assert out == parse_token("-xXZZYy", LC6_ORDER)
        assert format_token(out, LC6_ORDER) == "-xXZZYy"

    def test_square_of_table_term_is_identity(self):
        p = parse_token("xXZZXx", LC6_ORDER)
        sq = p * p
        assert sq == PauliString.identity(6) and sq.phase == 0

    def test_single_qubit_table_matches_matrices(self):
        # every product, including phase, against explicit 2x2 matrices
        for a, b in itertools.product("IXYZ", repeat=2):
            got = multiply(PauliString(0, (a,)), PauliString(0, (b,)))
            expected = pauli_matrix(PauliString(0, (a,))) @ pauli_matrix(PauliString(0, (b,)))
            np.testing.assert_allclose(pauli_matrix(got), expected, atol=0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            multiply(PauliString.identity(2), PauliString.identity(3))

    @given(pauli_strings(3), pauli_strings(3), pauli_strings(3))
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert ((a * b) * c).phase == (a * (b * c)).phase

    @given(pauli_strings(4), pauli_strings(4))
    def test_product_matches_dense_matrices(self, a, b):
        np.testing.assert_allclose(pauli_matrix(a * b), pauli_matrix(a) @ pauli_matrix(b), atol=1e-12)

    @given(pauli_strings(5), pauli_strings(5))
    def test_swap_differs_by_minus_one_iff_anticommuting(self, a, b):
        ab, ba = a * b, b * a
        assert ab.axes == ba.axes
        assert (ab.phase - ba.phase) % 4 == (0 if commutes(a, b) else 2)

    @given(pauli_strings(5), pauli_strings(5))
    def test_weight_subadditive(self, a, b):
        assert weight(a * b) <= weight(a) + weight(b)


class TestCommutes:
    def test_lc6_g5_g1(self):
        assert commutes(P({5: "z", 1: "Z"}), P({5: "x", 1: "X", 3: "Z"}))

    def test_x1_z1(self):
        assert not commutes(P({1: "X"}), P({1: "Z"}))

    @given(pauli_strings(6))
    def test_identity_commutes_with_everything(self, p):
        assert commutes(p, PauliString.identity(6))

    @given(pauli_strings(4), pauli_strings(4))
    def test_agrees_with_matrix_commutator(self, a, b):
        ma, mb = pauli_matrix(a), pauli_matrix(b)
        assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


class TestWeight:
    @pytest.mark.parametrize("token,w", [("xXZZXx", 6), ("xXIYYx", 5), ("IIIIII", 0)])
    def test_table_terms(self, token, w):
        assert weight(parse_token(token, LC6_ORDER)) == w


class TestParse:
    def test_table_i_token(self):
        p = parse_token("-xXZZYy", LC6_ORDER)
        assert p.sign == -1
        assert p.axes == ("X", "Z", "Z", "Y", "X", "Y")  # qubits 1..6
        assert p.lowercase == {5, 6}

    def test_table_ii_token(self):
        p = parse_token("XXIXxx", QubitOrder((1, 3, 2, 4, 5, 6)))
        assert p.sign == 1
        assert p.axes == ("X", "I", "X", "X", "X", "X")

    def test_identity(self):
        assert parse_token("IIIIII", LC6_ORDER) == PauliString.identity(6)

    def test_unicode_minus(self):
        assert parse_token("−xXZZYy", LC6_ORDER) == parse_token("-xXZZYy", LC6_ORDER)

    @pytest.mark.parametrize("bad", ["xXZZX", "xXZZXxx", "xXZQXx", "ixXZZXx", "+-xXZZXx", ""])
    def test_rejects(self, bad):
        with pytest.raises(TokenParseError):
            parse_token(bad, LC6_ORDER)

    def test_order_must_be_permutation(self):
        with pytest.raises(TokenParseError):
            QubitOrder((1, 2, 2))
        assert str(QubitOrder.parse("5-1-3-2-4-6")) == "5-1-3-2-4-6"

    @given(orders.flatmap(lambda o: st.tuples(
        st.just(o),
        st.sampled_from(["", "-"]),
        st.text(alphabet="IXYZixyz", min_size=o.n, max_size=o.n),
    )))
    def test_round_trip(self, args):
        order, sign, letters = args
        token = sign + letters
        assert format_token(parse_token(token, order), order) == token

    def test_imaginary_phase_not_parseable(self):
        y = multiply(PauliString(0, ("Z",)), PauliString(0, ("X",)))
        assert format_token(y) == "+iY"
        with pytest.raises(TokenParseError):
            parse_token(format_token(y), QubitOrder.canonical(1))
