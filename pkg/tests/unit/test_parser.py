import pytest
from sympy import QQ

from logbb.algebra import Ambient, MPoly, parse_poly
from logbb.errors import ParseError, UnknownVariable


def test_precedence(xy: Ambient) -> None:
    x, y = MPoly.variable(xy, 0), MPoly.variable(xy, 1)
    assert parse_poly("x + y*x^2", xy) == x + y * x * x
    assert parse_poly("-x^2", xy) == -(x * x)
    assert parse_poly("(x + y)**2 - 2*x*y", xy) == x * x + y * y
    assert parse_poly("3/4*x", xy) == x.scale(QQ(3, 4))


def test_unicode_minus(xy: Ambient) -> None:
    assert parse_poly("x − 1", xy) == parse_poly("x - 1", xy)


def test_unknown_variable_reports_offset(xy: Ambient) -> None:
    with pytest.raises(UnknownVariable) as info:
        parse_poly("x + q", xy)
    assert info.value.name == "q"
    assert info.value.offset == 4


def test_error_offset_and_expected(xy: Ambient) -> None:
    with pytest.raises(ParseError) as info:
        parse_poly("x + * y", xy)
    assert info.value.offset == 4
    assert "(" in info.value.expected


def test_unbalanced_parenthesis(xy: Ambient) -> None:
    with pytest.raises(ParseError) as info:
        parse_poly("(x + y", xy)
    assert ")" in info.value.expected


def test_division_by_polynomial_is_rejected(xy: Ambient) -> None:
    with pytest.raises(ParseError, match="nonzero constant"):
        parse_poly("x/y", xy)
    with pytest.raises(ParseError):
        parse_poly("x/0", xy)


def test_bad_character(xy: Ambient) -> None:
    with pytest.raises(ParseError):
        parse_poly("x $ y", xy)
