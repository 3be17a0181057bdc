import random

import pytest
from sympy import QQ

from logbb.algebra import Ambient, TruncSeries, coeff, parse_poly, series_inverse
from logbb.errors import NotAUnit


def test_geometric_series(xy: Ambient) -> None:
    inv = series_inverse(TruncSeries(parse_poly("1 - x", xy), 5))
    assert all(inv.coeff((k, 0)) == 1 for k in range(6))
    assert inv.coeff((6, 0)) == 0


def test_inverse_times_unit_is_one(xy: Ambient) -> None:
    u = TruncSeries(parse_poly("2 + x - 3*y + x*y^2", xy), 4)
    product = u * series_inverse(u)
    assert product.as_poly() == parse_poly("1", xy)


def test_two_variable_coefficients(xy: Ambient) -> None:
    # 1/(1 + x + y): the coefficient of x^a y^b is (-1)^(a+b) binom(a+b, a)
    inv = series_inverse(TruncSeries(parse_poly("1 + x + y", xy), 4))
    assert coeff(inv, (2, 1)) == -3
    assert coeff(inv, (2, 2)) == 6
    assert inv.constant_term() == QQ(1)


def test_non_unit(xy: Ambient) -> None:
    with pytest.raises(NotAUnit):
        series_inverse(TruncSeries(parse_poly("x + y", xy), 3))


@pytest.mark.parametrize("seed", range(25))
def test_random_unit_inverses(seed: int, xyz: Ambient) -> None:
    rng = random.Random(seed)
    truncation = rng.randint(0, 8)
    terms = {(0, 0, 0): QQ(rng.choice([-3, -2, -1, 1, 2, 5]), rng.randint(1, 3))}
    for _ in range(rng.randint(1, 5)):
        expo = tuple(rng.randint(0, 3) for _ in range(3))
        if any(expo):
            terms[expo] = QQ(rng.randint(-4, 4))
    u = TruncSeries.from_terms(xyz, terms, truncation)
    inv = series_inverse(u)
    assert inv.truncation == truncation
    assert (u * inv).as_poly() == 1
    assert (inv * u).as_poly() == 1
    assert series_inverse(inv) == u
