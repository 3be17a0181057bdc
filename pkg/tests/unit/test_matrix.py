from sympy import QQ

from logbb.algebra import Ambient, MPoly, parse_poly
from logbb.algebra.matrix import det, det_at, elementary_symmetric


def _rows(ambient: Ambient, texts: list[list[str]]) -> list[list[MPoly]]:
    return [[parse_poly(t, ambient) for t in row] for row in texts]


def test_det_and_elementary_symmetric(xy: Ambient) -> None:
    M = _rows(xy, [["1", "2"], ["3", "4"]])
    assert det(xy, M) == -2
    assert [str(c) for c in elementary_symmetric(xy, M)] == ["1", "5", "-2"]


def test_symbolic_matrix(xy: Ambient) -> None:
    M = _rows(xy, [["x", "y"], ["0", "x*y"]])
    c = elementary_symmetric(xy, M)
    assert c[1] == parse_poly("x + x*y", xy)
    assert c[2] == det(xy, M) == parse_poly("x^2*y", xy)


def test_det_at_point(xy: Ambient) -> None:
    M = _rows(xy, [["x", "1"], ["y", "x - y"]])
    assert det_at(M, (QQ(1, 2), 3)) == QQ(1, 2) * QQ(-5, 2) - 3
