import random

import pytest

from logbb.algebra import Ambient, MPoly, parse_poly
from logbb.errors import (
    DeterminantNotUnitTimesF,
    InputError,
    NotCoordinateNC,
    NotInLogSheaf,
    NotLogarithmic,
    SizeMismatch,
)
from logbb.foliation import (
    Divisor,
    VectorField,
    check_bracket_closure,
    express_in_basis,
    is_logarithmic,
    lie_bracket,
    m_log,
    normal_crossing_basis,
    structure_constants,
    verify_saito,
)


def _field(ambient: Ambient, *texts: str) -> VectorField:
    return VectorField(ambient, tuple(parse_poly(t, ambient) for t in texts))


def _matrix(ambient: Ambient, rows: list[list[str]]) -> list[list[MPoly]]:
    return [[parse_poly(t, ambient) for t in row] for row in rows]


@pytest.fixture
def three_lines(xy: Ambient) -> Divisor:
    """xy(x - y): free, not normal crossing at the origin."""
    return Divisor(xy, tuple(parse_poly(t, xy) for t in ("x", "y", "x - y")))


def test_divisor_must_be_reduced(xy: Ambient) -> None:
    with pytest.raises(InputError, match="squarefree"):
        Divisor(xy, (parse_poly("x^2", xy),))
    with pytest.raises(InputError, match="share a factor"):
        Divisor(xy, (parse_poly("x", xy), parse_poly("x*y", xy)))
    with pytest.raises(InputError, match="constant"):
        Divisor(xy, (parse_poly("3", xy),))


def test_jacobian_and_bracket(xy: Ambient) -> None:
    v = _field(xy, "x^2", "x*y")
    assert v.jacobian()[0][1] == parse_poly("y", xy)
    euler = _field(xy, "x", "y")
    # [E, V] = (deg - 1) V for a homogeneous quadratic field
    assert lie_bracket(euler, v) == v


def test_normal_crossing_basis_groups_per_variable(xy: Ambient) -> None:
    D = Divisor(xy, (parse_poly("x", xy), parse_poly("x - 1", xy), parse_poly("y", xy)))
    B = normal_crossing_basis(D)
    assert B.field(0) == _field(xy, "x^2 - x", "0")
    assert B.field(1) == _field(xy, "0", "y")
    assert B.certificate_constant == 1
    assert structure_constants(B).is_zero()


def test_normal_crossing_basis_rejects_other_components(three_lines: Divisor) -> None:
    with pytest.raises(NotCoordinateNC):
        normal_crossing_basis(three_lines)


def test_verify_saito(xy: Ambient, three_lines: Divisor) -> None:
    B = verify_saito(_matrix(xy, [["x", "x^2"], ["y", "y^2"]]), three_lines)
    assert B.certificate_constant == -1
    with pytest.raises(NotLogarithmic) as info:
        verify_saito(_matrix(xy, [["x", "1"], ["y", "0"]]), three_lines)
    assert info.value.column == 1
    with pytest.raises(DeterminantNotUnitTimesF):
        verify_saito(_matrix(xy, [["x", "x^3"], ["y", "y^3"]]), three_lines)


def test_structure_constants_of_free_arrangement(xy: Ambient, three_lines: Divisor) -> None:
    B = verify_saito(_matrix(xy, [["x", "x^2"], ["y", "y^2"]]), three_lines)
    table = structure_constants(B)
    assert table.coefficients(0, 1) == (MPoly.zero(xy), MPoly.one(xy))
    assert table.get(1, 0, 1) == -1
    assert not table.is_zero()
    assert check_bracket_closure(B)


def test_express_in_basis(xy: Ambient, three_lines: Divisor) -> None:
    B = verify_saito(_matrix(xy, [["x", "x^2"], ["y", "y^2"]]), three_lines)
    v = _field(xy, "2*x + x^2", "2*y + y^2")
    assert express_in_basis(v, B) == (parse_poly("2", xy), parse_poly("1", xy))
    assert is_logarithmic(v, three_lines)
    with pytest.raises(NotInLogSheaf):
        express_in_basis(_field(xy, "1", "0"), B)


def test_m_log_normal_crossing(xy: Ambient) -> None:
    """v = lam x d/dx + mu y d/dy along {x = 0}: Mplus = diag(0, mu)."""
    D = Divisor(xy, (parse_poly("x", xy),))
    frame = m_log(_field(xy, "2*x", "3*y"), normal_crossing_basis(D))
    assert frame.theta == (parse_poly("2", xy), parse_poly("3*y", xy))
    assert [[str(e) for e in row] for row in frame.mplus] == [["0", "0"], ["0", "3"]]


def test_m_log_adds_structure_terms(xy: Ambient, three_lines: Divisor) -> None:
    B = verify_saito(_matrix(xy, [["x", "x^2"], ["y", "y^2"]]), three_lines)
    # v = delta_2, theta = (0, 1): Jlog_plus vanishes and Mplus = M_2, whose only entry is delta_12^2
    frame = m_log(B.field(1), B)
    assert frame.theta == (MPoly.zero(xy), MPoly.one(xy))
    assert all(not e for row in frame.jlog_plus for e in row)
    assert [[str(e) for e in row] for row in frame.mplus] == [["0", "1"], ["0", "0"]]


def test_vector_field_of_needs_components(xy: Ambient) -> None:
    with pytest.raises(SizeMismatch):
        VectorField.of([])
    assert VectorField.of([parse_poly("x", xy), parse_poly("y", xy)]).n == 2


def _random_field(rng: random.Random, ambient: Ambient) -> VectorField:
    components = []
    for _ in range(ambient.arity):
        terms = {}
        for _ in range(rng.randint(0, 3)):
            expo = tuple(rng.randint(0, 2) for _ in range(ambient.arity))
            terms[expo] = rng.randint(-3, 3)
        components.append(MPoly.from_terms(ambient, terms))
    return VectorField(ambient, tuple(components))


@pytest.mark.parametrize("seed", range(20))
def test_bracket_antisymmetry_and_jacobi(seed: int, xyz: Ambient) -> None:
    rng = random.Random(seed)
    u, v, w = (_random_field(rng, xyz) for _ in range(3))
    assert lie_bracket(u, v) == VectorField(xyz, tuple(-c for c in lie_bracket(v, u).components))
    assert lie_bracket(u, u).is_zero()
    jacobi = (
        lie_bracket(u, lie_bracket(v, w))
        + lie_bracket(v, lie_bracket(w, u))
        + lie_bracket(w, lie_bracket(u, v))
    )
    assert jacobi.is_zero()
    f = parse_poly("x^2*y - z + x*y*z", xyz)
    assert lie_bracket(u, v).apply(f) == u.apply(v.apply(f)) - v.apply(u.apply(f))
