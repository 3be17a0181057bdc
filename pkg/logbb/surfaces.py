"""GSV and Camacho-Sad indices along smooth invariant branches of a surface divisor.

Near a singular point p on a smooth component ``l = 0`` of D the field is
rewritten in adapted coordinates (z, w) with z = l and w a transverse
coordinate vanishing at p, so that v = z*A(z, w) d/dz + B(z, w) d/dw.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from sympy import QQ

from logbb.algebra.poly import Ambient, MPoly, Rational, format_rational, to_rational
from logbb.algebra.series import TruncSeries, series_inverse
from logbb.errors import BranchDegenerate, InputError, UnsupportedBranch
from logbb.foliation import Divisor, VectorField

logger = logging.getLogger(__name__)

ADAPTED = Ambient(("z", "w"))
BRANCH = Ambient(("w",))


@dataclass(frozen=True)
class SmoothBranch:
    """The field near p in adapted coordinates; the branch is {z = 0}."""

    point: tuple[Rational, ...]
    A: MPoly
    B: MPoly

    def restricted(self) -> tuple[MPoly, MPoly]:
        """A(0, w) and B(0, w) as polynomials in w."""
        return _on_branch(self.A), _on_branch(self.B)

    @classmethod
    def from_components(cls, point: Sequence, z_part: MPoly, w_part: MPoly) -> "SmoothBranch":
        """Build from v = z_part d/dz + w_part d/dw over the (z, w) ambient."""
        z = MPoly.variable(ADAPTED, 0)
        A = z_part.exquo(z)
        if A is None:
            raise InputError(
                f"the branch z = 0 is not invariant: z does not divide {z_part}"
            )
        return cls(tuple(to_rational(c) for c in point), A, w_part)


def _on_branch(p: MPoly) -> MPoly:
    return MPoly.from_terms(BRANCH, {(e[1],): c for e, c in p.terms.items() if e[0] == 0})


def adapted_branch(v: VectorField, D: Divisor, point: Sequence) -> SmoothBranch:
    """Rewrite v near ``point`` so that the component of D through it is {z = 0}.

    Supported components are affine-linear: z = l(x, y), w = the other variable
    shifted to vanish at p.
    """
    if v.n != 2:
        raise UnsupportedBranch("GSV and Camacho-Sad indices need a surface chart")
    p = [to_rational(c) for c in point]
    through = D.components_through(p)
    if len(through) != 1:
        raise UnsupportedBranch(
            f"the point ({', '.join(format_rational(c) for c in p)}) lies on "
            f"{len(through)} divisor components; only smooth branches are supported"
        )
    ell = D.components[through[0]]
    if ell.total_degree() != 1:
        raise UnsupportedBranch(f"component {ell} is not a line in this chart")
    ambient = v.ambient
    a = [ell.derive(k).constant_value() for k in range(2)]
    i = 0 if a[0] else 1
    j = 1 - i
    const = ell.constant_value()

    z = MPoly.variable(ADAPTED, 0)
    w = MPoly.variable(ADAPTED, 1)
    images: list[MPoly] = [MPoly.zero(ADAPTED), MPoly.zero(ADAPTED)]
    images[j] = w + p[j]
    images[i] = (z - images[j].scale(a[j]) - const).scale(QQ.one / a[i])

    z_part = (v.components[0].scale(a[0]) + v.components[1].scale(a[1])).substitute(
        images, ADAPTED
    )
    w_part = v.components[j].substitute(images, ADAPTED)
    logger.debug(f"adapted branch at {p} along {ell} ({ambient})")
    return SmoothBranch.from_components(p, z_part, w_part)


def _order(p: MPoly) -> int:
    return min(e[0] for e in p.terms)


def gsv_smooth(br: SmoothBranch) -> int:
    """Vanishing order of B(0, w) at w = 0."""
    _, b = br.restricted()
    if not b:
        raise BranchDegenerate("the branch is contained in the singular set (B(0, w) = 0)")
    return _order(b)


def cs_smooth(br: SmoothBranch) -> Rational:
    """Residue at w = 0 of A(0, w)/B(0, w)."""
    a, b = br.restricted()
    if not b:
        raise BranchDegenerate("the branch is contained in the singular set (B(0, w) = 0)")
    m = _order(b)
    if m == 0:
        return QQ.zero
    unit = MPoly.from_terms(BRANCH, {(e[0] - m,): c for e, c in b.terms.items()})
    inverse = series_inverse(TruncSeries(unit, m - 1))
    return (TruncSeries(a, m - 1) * inverse).coeff((m - 1,))


@dataclass(frozen=True)
class LedgerPoint:
    """One singular point's contribution to the surface ledgers."""

    label: str
    on_divisor: bool
    milnor: int
    bb: Rational
    res_log: Rational | None = None
    res_log_c2: Rational | None = None
    gsv: int | None = None
    cs: Rational | None = None

    @property
    def gsv_from_residues(self) -> Rational | None:
        """(BB - Res^log - CS)/2, the GSV index the residues predict."""
        if self.res_log is None or self.cs is None:
            return None
        return (self.bb - self.res_log - self.cs) / 2


@dataclass(frozen=True)
class SurfaceTotals:
    bb: Rational
    res_log: Rational
    gsv: int
    cs: Rational
    divisor_square: Rational | None
    normal_dot_divisor: Rational | None
    milnor_off_divisor: int
    res_log_c2: Rational
    c2_chern_side: Rational | None

    @property
    def camacho_sad_holds(self) -> bool | None:
        if self.divisor_square is None:
            return None
        return self.cs == self.divisor_square

    @property
    def brunella_holds(self) -> bool | None:
        if self.normal_dot_divisor is None:
            return None
        return self.gsv == self.normal_dot_divisor

    @property
    def ledger_lhs(self) -> Rational:
        return self.bb - self.res_log

    @property
    def ledger_rhs(self) -> Rational:
        return 2 * self.gsv + self.cs

    @property
    def ledger_holds(self) -> bool:
        return self.ledger_lhs == self.ledger_rhs

    @property
    def milnor_ledger_holds(self) -> bool | None:
        if self.c2_chern_side is None:
            return None
        return self.milnor_off_divisor + self.res_log_c2 == self.c2_chern_side


def ledger_totals(
    points: Sequence[LedgerPoint],
    divisor_square: Rational | None = None,
    normal_dot_divisor: Rational | None = None,
    c2_chern_side: Rational | None = None,
) -> SurfaceTotals:
    """Sum the per-point indices over the points on D (and mu over the rest)."""
    on = [p for p in points if p.on_divisor]
    off = [p for p in points if not p.on_divisor]
    zero = QQ.zero
    return SurfaceTotals(
        bb=sum((p.bb for p in on), zero),
        res_log=sum((p.res_log for p in on if p.res_log is not None), zero),
        gsv=sum(p.gsv for p in on if p.gsv is not None),
        cs=sum((p.cs for p in on if p.cs is not None), zero),
        divisor_square=None if divisor_square is None else to_rational(divisor_square),
        normal_dot_divisor=(
            None if normal_dot_divisor is None else to_rational(normal_dot_divisor)
        ),
        milnor_off_divisor=sum(p.milnor for p in off),
        res_log_c2=sum((p.res_log_c2 for p in on if p.res_log_c2 is not None), zero),
        c2_chern_side=None if c2_chern_side is None else to_rational(c2_chern_side),
    )
