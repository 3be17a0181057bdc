"""Grothendieck residues and the local indices built on them.

All residues are normalized: the (2*pi*i)^n prefactor is dropped, so the
residue of ``h dz / (z_1 ... z_n)`` at the origin is ``h(0)``.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from logbb.algebra.matrix import det, det_at, elementary_symmetric
from logbb.algebra.parser import parse_poly
from logbb.algebra.poly import Ambient, MPoly, Rational, format_rational, to_rational
from logbb.algebra.series import TruncSeries, series_inverse
from logbb.app_utils.config import EngineSettings, get_settings
from logbb.errors import (
    DegreeMismatch,
    InputError,
    SeparatorRequired,
    SizeMismatch,
)
from logbb.foliation import SaitoBasis, VectorField, m_log
from logbb.ideals import Ideal, groebner, local_multiplicity, reduce

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhiSpec:
    """Weighted-homogeneous polynomial in c_1..c_n, weight(c_i) = i, degree n."""

    n: int
    poly: MPoly
    text: str = ""

    @classmethod
    def parse(cls, text: str, n: int) -> "PhiSpec":
        if n < 1:
            raise InputError("phi needs a positive dimension")
        poly = parse_poly(text, cls.symbols(n))
        return cls.of(poly, text)

    @classmethod
    def of(cls, poly: MPoly, text: str = "") -> "PhiSpec":
        n = poly.ambient.arity
        if not poly:
            raise DegreeMismatch("phi is the zero polynomial")
        degrees = poly.weighted_degrees(range(1, n + 1))
        if degrees != {n}:
            raise DegreeMismatch(
                f"phi = {poly} has weighted degrees {sorted(degrees)}, expected exactly {n}"
            )
        return cls(n, poly, text or str(poly))

    @staticmethod
    def symbols(n: int) -> Ambient:
        return Ambient(tuple(f"c{i}" for i in range(1, n + 1)))

    @classmethod
    def c1_power(cls, n: int) -> "PhiSpec":
        return cls.of(MPoly.variable(cls.symbols(n), 0) ** n, f"c1^{n}")

    @classmethod
    def top(cls, n: int) -> "PhiSpec":
        return cls.of(MPoly.variable(cls.symbols(n), n - 1), f"c{n}")

    def is_c1_power(self) -> bool:
        return self.poly == MPoly.variable(self.poly.ambient, 0) ** self.n

    def is_top(self) -> bool:
        return self.poly == MPoly.variable(self.poly.ambient, self.n - 1)

    def substitute(self, classes: Sequence[MPoly], target: Ambient) -> MPoly:
        """phi(c_1 = classes[0], ..., c_n = classes[n-1]) over ``target``."""
        if len(classes) != self.n:
            raise SizeMismatch(f"phi needs {self.n} classes, got {len(classes)}")
        return self.poly.substitute(list(classes), target)

    def __str__(self) -> str:
        return self.text


def phi_of_matrix(phi: PhiSpec, M: Sequence[Sequence[MPoly]]) -> MPoly:
    """phi evaluated on c_i(M), the coefficient of t^i in det(Id + t*M)."""
    if len(M) != phi.n:
        raise SizeMismatch(f"phi has degree {phi.n} but the matrix is {len(M)}x{len(M)}")
    ambient = M[0][0].ambient
    c = elementary_symmetric(ambient, M)
    return phi.substitute(c[1:], ambient)


@dataclass(frozen=True)
class SingularPoint:
    chart: int
    coordinates: tuple[Rational, ...]
    on_divisor: bool = False
    nondegenerate: bool = True

    @classmethod
    def at(
        cls,
        v: VectorField,
        coordinates: Sequence,
        chart: int = 0,
        basis: SaitoBasis | None = None,
    ) -> "SingularPoint":
        """Validate that v vanishes at ``coordinates`` and fill in the flags."""
        coords = tuple(to_rational(c) for c in coordinates)
        if len(coords) != v.n:
            raise SizeMismatch(f"point {_fmt(coords)} has the wrong number of coordinates")
        if not v.vanishes_at(coords):
            raise InputError(f"the field does not vanish at {_fmt(coords)}")
        nondegenerate = bool(det_at(v.jacobian(), coords))
        on_divisor = basis is not None and basis.divisor.contains(coords)
        return cls(chart, coords, on_divisor, nondegenerate)

    def __str__(self) -> str:
        return f"chart {self.chart} {_fmt(self.coordinates)}"


def _fmt(coords: Sequence) -> str:
    return "(" + ", ".join(format_rational(c) for c in coords) + ")"


def build_separator(
    ambient: Ambient, point: Sequence, others: Sequence[Sequence]
) -> MPoly:
    """Product of one linear form per other zero q: (z_k - q_k) with q_k != p_k."""
    p = [to_rational(c) for c in point]
    s = MPoly.one(ambient)
    for other in others:
        q = [to_rational(c) for c in other]
        if q == p:
            continue
        k = next(i for i in range(len(p)) if q[i] != p[i])
        s = s * (MPoly.variable(ambient, k) - MPoly.constant(ambient, q[k]))
    return s


def _exponents_work(
    G, local_vars: list[MPoly], s_local: MPoly, N: int, t: int
) -> list[tuple[MPoly, ...]] | None:
    rows = []
    st = s_local**t
    for u in local_vars:
        normal_form, lift = reduce(st * u**N, G)
        if normal_form:
            return None
        rows.append(lift)
    return rows


def groth_residue(
    h: MPoly,
    v: VectorField,
    p: SingularPoint,
    separator: MPoly | None = None,
    *,
    force_general: bool = False,
    exponents: tuple[int, int] | None = None,
    settings: EngineSettings | None = None,
) -> Rational:
    """Normalized Grothendieck residue Res_p[h dz; v_1, ..., v_n].

    Nondegenerate points use h(p)/det Jv(p) unless ``force_general``. The
    general path finds s^t (z_i - p_i)^N = sum_j a_ij v_j and returns the
    coefficient of prod (z_i - p_i)^(N-1) in h det(a) s^(-n t) expanded at p.
    """
    settings = settings or get_settings()
    if h.ambient != v.ambient:
        raise InputError(f"ambient mismatch: ({h.ambient}) vs ({v.ambient})")
    point = p.coordinates
    if p.nondegenerate and not force_general and exponents is None:
        return h.eval(point) / det_at(v.jacobian(), point)

    ambient = v.ambient
    n = v.n
    s = separator if separator is not None else MPoly.one(ambient)
    if s.eval(point) == 0:
        raise SeparatorRequired(
            f"separator {s} vanishes at {_fmt(point)}", tuple(format_rational(c) for c in point)
        )
    local_field = v.translate(point)
    local_ideal = Ideal(ambient, local_field.components)
    G = groebner(local_ideal, settings=settings)
    gens = [MPoly.variable(ambient, i) for i in range(n)]
    s_local = s.translate(point)

    rows = None
    if exponents is not None:
        N, t = exponents
        rows = _exponents_work(G, gens, s_local, N, t)
        if rows is None:
            raise InputError(
                f"s^{t} * (z_i - p_i)^{N} is not in the ideal of the field at {_fmt(point)}"
            )
    else:
        max_t = settings.residue_exponent_cap if separator is not None else 0
        for total in range(1, settings.residue_exponent_cap + 1):
            for t in range(0, min(total - 1, max_t) + 1):
                N = total - t
                rows = _exponents_work(G, gens, s_local, N, t)
                if rows is not None:
                    break
            if rows is not None:
                break
        if rows is None:
            raise SeparatorRequired(
                f"no power of the local coordinates at {_fmt(point)} lies in the ideal "
                f"of the field{'' if separator is not None else '; supply a separator'}",
                tuple(format_rational(c) for c in point),
            )
    logger.debug(f"transformation law at {_fmt(point)} with N={N}, t={t}")

    det_a = det(ambient, rows)
    truncation = n * t * max(s.total_degree(), 0) + n * (N - 1) + 2
    numerator = TruncSeries(h.translate(point) * det_a, truncation)
    if t:
        unit = series_inverse(TruncSeries(s_local, truncation)) ** (n * t)
        numerator = numerator * unit
    return numerator.coeff((N - 1,) * n)


def milnor(v: VectorField, p: SingularPoint, settings: EngineSettings | None = None) -> int:
    """Local multiplicity of the ideal of the field at p."""
    if p.nondegenerate:
        return 1
    return local_multiplicity(Ideal(v.ambient, v.components), p.coordinates, settings)


def bb_residue(
    phi: PhiSpec,
    v: VectorField,
    p: SingularPoint,
    separator: MPoly | None = None,
    settings: EngineSettings | None = None,
) -> Rational:
    """Baum-Bott residue Res_p[phi(Jv); v]."""
    return groth_residue(
        phi_of_matrix(phi, v.jacobian()), v, p, separator, settings=settings
    )


def res_log(
    phi: PhiSpec,
    v: VectorField,
    B: SaitoBasis,
    p: SingularPoint,
    separator: MPoly | None = None,
    settings: EngineSettings | None = None,
) -> Rational:
    """Log Baum-Bott residue Res_p[phi(Mplus); v]."""
    frame = m_log(v, B)
    return groth_residue(
        phi_of_matrix(phi, frame.mplus), v, p, separator, settings=settings
    )


def ind_log(
    v: VectorField,
    B: SaitoBasis,
    p: SingularPoint,
    settings: EngineSettings | None = None,
) -> int:
    """Logarithmic index: local multiplicity of <theta_1, ..., theta_n> at p."""
    return _theta_multiplicity(m_log(v, B).theta, p, settings)


def _theta_multiplicity(
    theta: Sequence[MPoly], p: SingularPoint, settings: EngineSettings | None
) -> int:
    if any(t.eval(p.coordinates) for t in theta):
        return 0
    return local_multiplicity(Ideal(theta[0].ambient, tuple(theta)), p.coordinates, settings)


def _is_coordinate_nc(B: SaitoBasis) -> bool:
    return all(
        len(c.variables_used()) == 1 and c.total_degree() == 1
        for c in B.divisor.components
    )


@dataclass(frozen=True)
class ResidueReport:
    point: SingularPoint
    milnor: int
    bb_phi: Rational
    res_log_phi: Rational | None = None
    ind_log: int | None = None
    res_log_det: Rational | None = None
    flags: tuple[str, ...] = field(default=())

    @property
    def contribution(self) -> Rational:
        """The term this point adds to the global sum."""
        return self.res_log_phi if self.res_log_phi is not None else self.bb_phi


def point_report(
    phi: PhiSpec,
    v: VectorField,
    B: SaitoBasis | None,
    p: SingularPoint,
    separator: MPoly | None = None,
    settings: EngineSettings | None = None,
) -> ResidueReport:
    """All local invariants of one singular point."""
    flags: list[str] = []
    mu = milnor(v, p, settings)
    if not p.nondegenerate:
        flags.append("degenerate")
    bb = bb_residue(phi, v, p, separator, settings)
    if B is None or not p.on_divisor:
        return ResidueReport(p, mu, bb, flags=tuple(flags))

    frame = m_log(v, B)
    rl = groth_residue(phi_of_matrix(phi, frame.mplus), v, p, separator, settings=settings)
    index = _theta_multiplicity(frame.theta, p, settings)
    det_value = groth_residue(det(v.ambient, frame.mplus), v, p, separator, settings=settings)
    if _is_coordinate_nc(B):
        if det_value != index:
            # the normal-crossing det law failed; surfaced as a flag on the point
            flags.append("det-law-violated")
            logger.warning(
                f"det-residue {format_rational(det_value)} differs from the "
                f"logarithmic index {index} at {p}"
            )
    else:
        flags.append("det-law-recorded")
    return ResidueReport(p, mu, bb, rl, index, det_value, tuple(flags))

