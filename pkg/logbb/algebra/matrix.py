"""Square matrices of polynomials, backed by sympy's DomainMatrix."""

from collections.abc import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from logbb.algebra.poly import Ambient, MPoly, Rational, poly_ring
from logbb.errors import SizeMismatch

PolyMatrix = tuple[tuple[MPoly, ...], ...]


def as_matrix(rows: Sequence[Sequence[MPoly]]) -> PolyMatrix:
    matrix = tuple(tuple(row) for row in rows)
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise SizeMismatch(f"matrix is not square: {[len(r) for r in matrix]}")
    return matrix


def _domain_matrix(ambient: Ambient, rows: PolyMatrix) -> DomainMatrix:
    ring = poly_ring(ambient.names)
    return DomainMatrix(
        [[entry.in_ring(ring) for entry in row] for row in rows],
        (len(rows), len(rows)),
        ring.to_domain(),
    )


def det(ambient: Ambient, rows: Sequence[Sequence[MPoly]]) -> MPoly:
    matrix = as_matrix(rows)
    if not matrix:
        return MPoly.one(ambient)
    return MPoly(ambient, _domain_matrix(ambient, matrix).det())


def elementary_symmetric(ambient: Ambient, rows: Sequence[Sequence[MPoly]]) -> list[MPoly]:
    """[c_0, c_1, ..., c_n]: c_i is the coefficient of t^i in det(Id + t*M)."""
    matrix = as_matrix(rows)
    n = len(matrix)
    if not n:
        return [MPoly.one(ambient)]
    # charpoly gives det(x*Id - M) = sum_i (-1)^i c_i x^(n-i)
    coeffs = _domain_matrix(ambient, matrix).charpoly()
    return [
        MPoly(ambient, coeffs[i] if i % 2 == 0 else -coeffs[i]) for i in range(n + 1)
    ]


def eval_matrix(rows: Sequence[Sequence[MPoly]], point: Sequence) -> list[list]:
    return [[entry.eval(point) for entry in row] for row in rows]


def mat_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: PolyMatrix, factor: MPoly) -> PolyMatrix:
    return tuple(tuple(factor * x for x in row) for row in a)


def det_at(rows: Sequence[Sequence[MPoly]], point: Sequence) -> Rational:
    """det of the matrix evaluated at ``point``, over QQ."""
    values = eval_matrix(as_matrix(rows), point)
    if not values:
        return QQ.one
    return DomainMatrix(values, (len(values), len(values)), QQ).det()
