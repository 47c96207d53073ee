import numpy as np
import pytest

from corpus import MALFORMED_FORMULAS, random_formula
from qreal import And, Atom, Com, Equal, Iff, Not, Or, ParseError, Sasaki, observable_ids, parse, unparse


def atom(name="A", *values):
    return Atom(name, tuple(values) or (1.0,))


# ---------------------------------------------------------------------------
# Construction-time canonicalization.


def test_atom_values_sorted_deduplicated():
    assert Atom("A", (2.0, 1.0, 1.0)).values == (1.0, 2.0)
    assert Atom("A", (-0.0,)).values == (0.0,)
    with pytest.raises(ValueError):
        Atom("A", ())
    with pytest.raises(ValueError):
        Atom("A", (float("nan"),))


def test_identifier_rules():
    with pytest.raises(ValueError):
        Atom("in", (1.0,))
    with pytest.raises(ValueError):
        Atom("2x", (1.0,))
    with pytest.raises(ValueError):
        Equal("com", "B")
    with pytest.raises(ValueError):
        Com(("A",))
    assert Com(("A", "B", "C")).obs_ids == ("A", "B", "C")


# ---------------------------------------------------------------------------
# Parsing goldens.


def test_parse_atom_forms():
    assert parse("A in {1}") == atom("A", 1.0)
    assert parse("x_1 in {-2, 1.5, 3e2}") == Atom("x_1", (-2.0, 1.5, 300.0))
    assert parse("A in { 2 , 1 , 1 }") == Atom("A", (1.0, 2.0))
    assert parse("A in {.5}") == Atom("A", (0.5,))
    assert parse("A in {+2}") == Atom("A", (2.0,))


def test_parse_equal_and_com():
    assert parse("[A = B]") == Equal("A", "B")
    assert parse("com(A, B)") == Com(("A", "B"))
    assert parse("com(A,B,C)") == Com(("A", "B", "C"))


def test_parse_precedence_chain():
    f = parse("~A in {1} & B in {2} | C in {3} -> D in {4} <-> E in {5}")
    want = Iff(
        Sasaki(
            Or(And(Not(atom("A")), atom("B", 2.0)), atom("C", 3.0)),
            atom("D", 4.0),
        ),
        atom("E", 5.0),
    )
    assert f == want


def test_parse_associativity():
    a, b, c = atom("A"), atom("B"), atom("C")
    assert parse("A in {1} -> B in {1} -> C in {1}") == Sasaki(a, Sasaki(b, c))
    assert parse("A in {1} <-> B in {1} <-> C in {1}") == Iff(Iff(a, b), c)
    assert parse("A in {1} & B in {1} & C in {1}") == And(And(a, b), c)
    assert parse("A in {1} | B in {1} | C in {1}") == Or(Or(a, b), c)


def test_parse_parentheses_and_negation():
    a, b = atom("A"), atom("B")
    assert parse("~(A in {1} & B in {1})") == Not(And(a, b))
    assert parse("~~A in {1}") == Not(Not(a))
    assert parse("(A in {1})") == a
    assert parse("A in {1} & (B in {1} | A in {1})") == And(a, Or(b, a))


# ---------------------------------------------------------------------------
# Error reporting.


@pytest.mark.parametrize("text,offset,expected,found", MALFORMED_FORMULAS)
def test_malformed_inputs_report_exact_offsets(text, offset, expected, found):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.byte_offset == offset
    assert err.value.expected == expected
    assert err.value.found == found
    assert str(err.value) == f"at offset {offset}: expected {expected}, found {found}"


def test_error_offsets_are_bytes_not_chars():
    with pytest.raises(ParseError) as err:
        parse("A€ in {1}")  # euro sign right after the identifier
    assert err.value.byte_offset == 1


def test_unary_dangling():
    with pytest.raises(ParseError) as err:
        parse("~")
    assert err.value.byte_offset == 1
    with pytest.raises(ParseError) as err:
        parse("in in {1}")
    assert (err.value.byte_offset, err.value.found) == (0, "in")


# ---------------------------------------------------------------------------
# Printing.


def test_unparse_goldens():
    a, b, c = atom("A"), atom("B", 2.0), atom("C", 1.0, 2.5)
    assert unparse(a) == "A in {1}"
    assert unparse(c) == "C in {1, 2.5}"
    assert unparse(Equal("A", "B")) == "[A = B]"
    assert unparse(Com(("A", "B"))) == "com(A, B)"
    assert unparse(And(Or(a, b), c)) == "(A in {1} | B in {2}) & C in {1, 2.5}"
    assert unparse(Or(And(a, b), c)) == "A in {1} & B in {2} | C in {1, 2.5}"
    assert unparse(Not(And(a, b))) == "~(A in {1} & B in {2})"
    assert unparse(Not(a)) == "~A in {1}"
    assert unparse(Sasaki(Sasaki(a, b), c)) == "(A in {1} -> B in {2}) -> C in {1, 2.5}"
    assert unparse(Sasaki(a, Sasaki(b, c))) == "A in {1} -> B in {2} -> C in {1, 2.5}"
    assert unparse(Iff(Iff(a, b), c)) == "A in {1} <-> B in {2} <-> C in {1, 2.5}"
    assert unparse(Iff(a, Iff(b, c))) == "A in {1} <-> (B in {2} <-> C in {1, 2.5})"


def test_number_formatting_round_trips():
    values = (0.1, -3.0, 1e22, 5e-324, 12345.6789, 0.0)
    f = Atom("A", values)
    assert parse(unparse(f)) == f


def test_round_trip_property():
    rng = np.random.default_rng(41)
    for _ in range(300):
        f = random_formula(rng)
        assert parse(unparse(f)) == f


def test_observable_ids_first_appearance_order():
    f = parse("[B = A] & com(C, A) | D in {1}")
    assert observable_ids(f) == ("B", "A", "C", "D")
