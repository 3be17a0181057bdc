"""Vector fields, divisors, Saito bases and the log frame matrices.

Sign convention: ``Jlog_plus[i][j] = delta_i(theta_j)`` and
``Mplus = Jlog_plus + sum_k theta_k * M_k``, which is the negative of the
M_log matrix written with ``-delta_i(theta_j)``. Every residue is evaluated
with ``Mplus``.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

from logbb.algebra.matrix import (
    PolyMatrix,
    as_matrix,
    det,
    mat_add,
    mat_scale,
)
from logbb.algebra.poly import Ambient, MPoly, Rational
from logbb.errors import (
    AmbientMismatch,
    DeterminantNotUnitTimesF,
    InputError,
    NotCoordinateNC,
    NotInLogSheaf,
    NotLogarithmic,
    SizeMismatch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VectorField:
    """v = sum_j v_j d/dz_j."""

    ambient: Ambient
    components: tuple[MPoly, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.ambient.arity:
            raise SizeMismatch(
                f"vector field needs {self.ambient.arity} components, "
                f"got {len(self.components)}"
            )
        for c in self.components:
            if c.ambient != self.ambient:
                raise AmbientMismatch(f"component {c} is not over ({self.ambient})")

    @classmethod
    def of(cls, components: Sequence[MPoly]) -> "VectorField":
        if not components:
            raise SizeMismatch("a vector field needs at least one component")
        return cls(components[0].ambient, tuple(components))

    @property
    def n(self) -> int:
        return self.ambient.arity

    def apply(self, f: MPoly) -> MPoly:
        """The derivation v(f) = sum_j v_j df/dz_j."""
        result = MPoly.zero(self.ambient)
        for j, vj in enumerate(self.components):
            if vj:
                result = result + vj * f.derive(j)
        return result

    def jacobian(self) -> PolyMatrix:
        """Jv with entry (i, j) = dv_j/dz_i."""
        return tuple(
            tuple(vj.derive(i) for vj in self.components) for i in range(self.n)
        )

    def eval(self, point: Sequence) -> tuple[Rational, ...]:
        return tuple(c.eval(point) for c in self.components)

    def vanishes_at(self, point: Sequence) -> bool:
        return not any(self.eval(point))

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.ambient, tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.ambient, tuple(a - b for a, b in zip(self.components, other.components))
        )

    def times(self, g: MPoly) -> "VectorField":
        return VectorField(self.ambient, tuple(g * c for c in self.components))

    def translate(self, point: Sequence) -> "VectorField":
        return VectorField(self.ambient, tuple(c.translate(point) for c in self.components))

    def __str__(self) -> str:
        parts = [
            f"({c})*d/d{name}"
            for c, name in zip(self.components, self.ambient.names)
            if c
        ]
        return " + ".join(parts) or "0"


def lie_bracket(u: VectorField, w: VectorField) -> VectorField:
    """[u, w]_j = sum_i (u_i dw_j/dz_i - w_i du_j/dz_i)."""
    if u.ambient != w.ambient:
        raise AmbientMismatch(f"ambient mismatch: ({u.ambient}) vs ({w.ambient})")
    return VectorField(
        u.ambient,
        tuple(u.apply(wj) - w.apply(uj) for uj, wj in zip(u.components, w.components)),
    )


@dataclass(frozen=True)
class Divisor:
    """Reduced divisor given by its pairwise coprime, squarefree components."""

    ambient: Ambient
    components: tuple[MPoly, ...] = field(default=())

    def __post_init__(self) -> None:
        for c in self.components:
            if c.ambient != self.ambient:
                raise AmbientMismatch(f"component {c} is not over ({self.ambient})")
            if c.is_constant():
                raise InputError(f"divisor component {c} is constant")
            derivatives = [c.derive(i) for i in range(self.ambient.arity)]
            g = c
            for d in derivatives:
                g = g.gcd(d)
            if not g.is_constant():
                raise InputError(f"divisor component {c} is not squarefree")
        for a, b in combinations(self.components, 2):
            if not a.gcd(b).is_constant():
                raise InputError(f"divisor components {a} and {b} share a factor")

    @property
    def f(self) -> MPoly:
        result = MPoly.one(self.ambient)
        for c in self.components:
            result = result * c
        return result

    def contains(self, point: Sequence) -> bool:
        return any(not c.eval(point) for c in self.components)

    def components_through(self, point: Sequence) -> list[int]:
        return [i for i, c in enumerate(self.components) if not c.eval(point)]


def is_logarithmic(v: VectorField, D: Divisor) -> bool:
    """True iff f divides v(f)."""
    f = D.f
    return f.divides(v.apply(f))


@dataclass(frozen=True)
class SaitoBasis:
    """Columns of ``A`` are the fields delta_j; det A = certificate_constant * f."""

    divisor: Divisor
    A: PolyMatrix
    certificate_constant: Rational

    @property
    def ambient(self) -> Ambient:
        return self.divisor.ambient

    @property
    def n(self) -> int:
        return len(self.A)

    def field(self, j: int) -> VectorField:
        return VectorField(self.ambient, tuple(row[j] for row in self.A))

    def fields(self) -> list[VectorField]:
        return [self.field(j) for j in range(self.n)]


def _single_variable_linear(c: MPoly) -> int | None:
    used = c.variables_used()
    if len(used) != 1 or c.total_degree() != 1:
        return None
    return next(iter(used))


def normal_crossing_basis(D: Divisor) -> SaitoBasis:
    """delta_i = (product of the components in z_i) * d/dz_i, or d/dz_i."""
    ambient = D.ambient
    n = ambient.arity
    per_var = [MPoly.one(ambient) for _ in range(n)]
    for c in D.components:
        var = _single_variable_linear(c)
        if var is None:
            raise NotCoordinateNC(
                f"component {c} is not a coordinate hyperplane of ({ambient})"
            )
        per_var[var] = per_var[var] * c
    A = tuple(
        tuple(per_var[i] if i == j else MPoly.zero(ambient) for j in range(n))
        for i in range(n)
    )
    quotient = det(ambient, A).exquo(D.f)
    assert quotient is not None and quotient.is_constant()
    return SaitoBasis(D, A, quotient.constant_value())


def verify_saito(A: Sequence[Sequence[MPoly]], D: Divisor) -> SaitoBasis:
    """Certify that the columns of A form a Saito basis of T(-log D)."""
    matrix = as_matrix(A)
    if len(matrix) != D.ambient.arity:
        raise SizeMismatch(
            f"Saito matrix must be {D.ambient.arity}x{D.ambient.arity}, got {len(matrix)}"
        )
    f = D.f
    for j in range(len(matrix)):
        column = VectorField(D.ambient, tuple(row[j] for row in matrix))
        if not f.divides(column.apply(f)):
            raise NotLogarithmic(j)
    quotient = det(D.ambient, matrix).exquo(f)
    if quotient is None or not quotient.is_constant() or not quotient.constant_value():
        raise DeterminantNotUnitTimesF(
            f"det A is not a nonzero constant times f = {f}"
        )
    return SaitoBasis(D, matrix, quotient.constant_value())


def express_in_basis(v: VectorField, B: SaitoBasis) -> tuple[MPoly, ...]:
    """theta with sum_i theta_i delta_i = v, by Cramer's rule and exact division."""
    if v.ambient != B.ambient:
        raise AmbientMismatch(f"ambient mismatch: ({v.ambient}) vs ({B.ambient})")
    det_A = B.divisor.f.scale(B.certificate_constant)
    theta = []
    for i in range(B.n):
        replaced = tuple(
            tuple(v.components[r] if j == i else B.A[r][j] for j in range(B.n))
            for r in range(B.n)
        )
        numerator = det(B.ambient, replaced)
        quotient = numerator.exquo(det_A)
        if quotient is None:
            raise NotInLogSheaf(
                f"field is not a polynomial combination of the Saito basis "
                f"(coefficient {i} is not polynomial)"
            )
        theta.append(quotient)
    return tuple(theta)


class StructureTable:
    """delta_ij^k with [delta_i, delta_j] = sum_k delta_ij^k delta_k (stored for i < j)."""

    def __init__(self, ambient: Ambient, n: int, upper: dict[tuple[int, int], tuple[MPoly, ...]]):
        self.ambient = ambient
        self.n = n
        self.upper = upper

    def coefficients(self, i: int, j: int) -> tuple[MPoly, ...]:
        if i == j:
            return tuple(MPoly.zero(self.ambient) for _ in range(self.n))
        if i < j:
            return self.upper[(i, j)]
        return tuple(-c for c in self.upper[(j, i)])

    def get(self, i: int, j: int, k: int) -> MPoly:
        return self.coefficients(i, j)[k]

    def is_zero(self) -> bool:
        return not any(c for row in self.upper.values() for c in row)


def structure_constants(B: SaitoBasis) -> StructureTable:
    fields = B.fields()
    upper = {}
    for i, j in combinations(range(B.n), 2):
        try:
            upper[(i, j)] = express_in_basis(lie_bracket(fields[i], fields[j]), B)
        except NotInLogSheaf as exc:
            raise NotInLogSheaf(
                f"[delta_{i + 1}, delta_{j + 1}] is not in the span of the basis; "
                "the Saito certificate is invalid"
            ) from exc
    return StructureTable(B.ambient, B.n, upper)


def check_bracket_closure(B: SaitoBasis) -> bool:
    """Brackets close on the basis and the reconstructed brackets satisfy Jacobi."""
    table = structure_constants(B)
    fields = B.fields()
    for i, j in combinations(range(B.n), 2):
        rebuilt = VectorField(B.ambient, tuple(MPoly.zero(B.ambient) for _ in range(B.n)))
        for k, coeff in enumerate(table.coefficients(i, j)):
            rebuilt = rebuilt + fields[k].times(coeff)
        if rebuilt != lie_bracket(fields[i], fields[j]):
            return False
    for a, b, c in combinations(fields, 3):
        total = (
            lie_bracket(a, lie_bracket(b, c))
            + lie_bracket(b, lie_bracket(c, a))
            + lie_bracket(c, lie_bracket(a, b))
        )
        if not total.is_zero():
            return False
    return True


@dataclass(frozen=True)
class LogFrameData:
    theta: tuple[MPoly, ...]
    structure: StructureTable
    Mk: tuple[PolyMatrix, ...]
    jlog_plus: PolyMatrix
    mplus: PolyMatrix


def m_log(v: VectorField, B: SaitoBasis) -> LogFrameData:
    """Assemble theta, delta_ij^k, M_k, Jlog_plus and Mplus for v in the basis B."""
    theta = express_in_basis(v, B)
    table = structure_constants(B)
    n = B.n
    ambient = B.ambient
    zero = MPoly.zero(ambient)
    # h_ij^k = delta_ik^j for i != k and 0 on the row i = k
    Mk = tuple(
        tuple(
            tuple(zero if i == k else table.get(i, k, j) for j in range(n))
            for i in range(n)
        )
        for k in range(n)
    )
    fields = B.fields()
    jlog_plus = tuple(
        tuple(fields[i].apply(theta[j]) for j in range(n)) for i in range(n)
    )
    mplus = jlog_plus
    if not table.is_zero():
        for k in range(n):
            if theta[k]:
                mplus = mat_add(mplus, mat_scale(Mk[k], theta[k]))
    logger.debug(f"theta = {[str(t) for t in theta]}")
    return LogFrameData(theta, table, Mk, jlog_plus, mplus)
