import cmath

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from harmroot.errors import BranchPointError, DivisionByZeroJet, ParseError
from harmroot.expr import Neg, Pow, Var, Z, eval_jet, exp, sin
from harmroot.parser import parse_complex, parse_expression

from test_jets import trees


def test_polynomial_example():
    tree = parse_expression("z^2 - 1")
    assert eval_jet(tree, 2).as_tuple() == (3, 4, 2, 0)


def test_shear_g_example():
    assert parse_expression("0.5*z^2 + 0.5*z")(1) == 1


def test_incomplete_input_offset():
    with pytest.raises(ParseError) as info:
        parse_expression("z +")
    assert info.value.offset == 3
    assert "z" in info.value.expected and "(" in info.value.expected


@pytest.mark.parametrize("src, offset", [
    ("", 0),
    ("sin(z", 5),
    ("z)", 1),
    ("z^1.5", 2),
    ("foo(z)", 0),
    ("z # 2", 2),
    ("2 * * z", 4),
])
def test_error_offsets(src, offset):
    with pytest.raises(ParseError) as info:
        parse_expression(src)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    # the non-ASCII character occupies two bytes before the error
    with pytest.raises(ParseError) as info:
        parse_expression("z + é")
    assert info.value.offset == 4


def test_power_binds_tighter_than_minus():
    assert parse_expression("-z^2") == Neg(Pow(Var(), 2))
    assert parse_expression("-z^2")(3) == -9
    assert parse_expression("(-z)^2")(3) == 9


def test_left_associativity():
    assert parse_expression("8 / 4 / 2")(0) == 1
    assert parse_expression("1 - 2 - 3")(0) == -4


def test_imaginary_literals():
    assert parse_expression("i")(0) == 1j
    assert parse_expression("2i*z")(1) == 2j
    assert parse_expression("1.5e-3*z")(2) == 3e-3


def test_functions():
    tree = parse_expression("exp(z) * sin(z) + cos(z) - log(z)")
    assert abs(tree(1.3) - (cmath.exp(1.3) * cmath.sin(1.3) + cmath.cos(1.3) - cmath.log(1.3))) < 1e-15


def test_parse_complex_forms():
    assert parse_complex("1.5-0.5i") == 1.5 - 0.5j
    assert parse_complex("-1-2i") == -1 - 2j
    assert parse_complex("2i") == 2j
    assert parse_complex("-i") == -1j
    assert parse_complex("3") == 3
    assert parse_complex("1e-3+4.5i") == 0.001 + 4.5j
    with pytest.raises(ParseError):
        parse_complex("x")


def test_pretty_print_simple():
    assert parse_expression(exp(Z**2).text()) == exp(Z**2)
    assert parse_expression((Z**2 / 2 + Z / 2).text())(1) == 1


points = st.lists(
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    min_size=100, max_size=100)


def _jet_or_none(tree, z0):
    try:
        return eval_jet(tree, z0).as_tuple()
    except (DivisionByZeroJet, BranchPointError, OverflowError, ZeroDivisionError):
        return None


@settings(max_examples=60, deadline=None)
@given(trees, points)
def test_round_trip(tree, zs):
    again = parse_expression(parse_expression(tree.text()).text())
    once = parse_expression(tree.text())
    compared = 0
    for z0 in zs:
        a, b = _jet_or_none(tree, z0), _jet_or_none(once, z0)
        assert (a is None) == (b is None)
        if a is None or not all(cmath.isfinite(v) for v in a):
            continue
        for x, y in zip(a, b):
            assert abs(x - y) <= 1e-12 * max(1.0, abs(x))
        compared += 1
    assume(compared > 0)
    assert again.text() == once.text()


def test_round_trip_sine_shear():
    src = "z^2/4 + 0.25i*z"
    tree = parse_expression(src)
    back = parse_expression(tree.text())
    assert eval_jet(back, 0.3 + 0.1j) == eval_jet(tree, 0.3 + 0.1j)
    assert sin(Z).text() == "sin(z)"
