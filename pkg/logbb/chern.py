"""Characteristic classes in graded intersection rings.

A ``CohomologyRing`` is a graded quotient Q[g_1..g_r]/(relations) with a
one-dimensional top degree and an integration functional fixed by the value
of one top-degree monomial. Total Chern classes are lists c_0 = 1, ..., c_n
of ring elements; virtual differences use the formal inverse.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from sympy import QQ

from logbb.algebra.parser import parse_poly
from logbb.algebra.poly import Ambient, MPoly, Rational, format_rational, to_rational
from logbb.errors import DegreeMismatch, InconsistentPresentation, InputError
from logbb.ideals import GroebnerData, Ideal, groebner, reduce, standard_monomials
from logbb.residues import PhiSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Presentation:
    """User-facing ring data, as found in the ``[presented]`` scene block."""

    generators: tuple[str, ...]
    degrees: tuple[int, ...]
    relations: tuple[str, ...]
    integral_monomial: str
    integral_value: Rational = QQ.one

    @classmethod
    def from_mapping(cls, data: Mapping) -> "Presentation":
        return cls(
            generators=tuple(data["generators"]),
            degrees=tuple(int(d) for d in data["degrees"]),
            relations=tuple(data["relations"]),
            integral_monomial=data["integral_monomial"],
            integral_value=to_rational(data.get("integral_value", 1)),
        )


@dataclass(frozen=True)
class CohomologyRing:
    kind: str  # "pn" or "presented"
    ambient: Ambient
    degrees: tuple[int, ...]
    relations: tuple[MPoly, ...]
    fundamental: MPoly
    fundamental_value: Rational
    top: int = field(default=0)

    @cached_property
    def basis(self) -> GroebnerData:
        return groebner(Ideal(self.ambient, self.relations))

    def degree_of(self, p: MPoly) -> set[int]:
        return p.weighted_degrees(self.degrees)

    def part(self, p: MPoly, k: int) -> MPoly:
        """Weighted-degree ``k`` component of ``p``."""
        return MPoly.from_terms(
            self.ambient,
            {
                e: c
                for e, c in p.terms.items()
                if sum(w * x for w, x in zip(self.degrees, e)) == k
            },
        )

    def normal_form(self, p: MPoly) -> MPoly:
        return reduce(p, self.basis)[0]

    def mul(self, a: MPoly, b: MPoly) -> MPoly:
        return self.normal_form(a * b)

    def one(self) -> MPoly:
        return MPoly.one(self.ambient)

    def gen(self, name: str | int) -> MPoly:
        return MPoly.variable(self.ambient, name)

    def parse(self, text: str) -> MPoly:
        return parse_poly(text, self.ambient)

    @cached_property
    def _top_monomial(self) -> tuple[tuple[int, ...], Rational]:
        reduced = self.normal_form(self.fundamental)
        (expo, coeff), = reduced.terms.items()
        return expo, coeff

    def integrate(self, p: MPoly) -> Rational:
        """Linear functional: the top-degree coordinate scaled by the declared value."""
        expo, scale = self._top_monomial
        return self.normal_form(p).coeff(expo) * self.fundamental_value / scale

    def __str__(self) -> str:
        if self.kind == "pn":
            return f"H*(P^{self.top})"
        return f"Q[{self.ambient}]/({', '.join(str(r) for r in self.relations)})"


@lru_cache(maxsize=None)
def ring_pn(n: int) -> CohomologyRing:
    """Q[h]/(h^(n+1)) with the integral of h^n equal to 1."""
    if n < 1:
        raise InputError(f"projective space needs dimension >= 1, got {n}")
    ambient = Ambient(("h",))
    h = MPoly.variable(ambient, 0)
    return CohomologyRing("pn", ambient, (1,), (h ** (n + 1),), h**n, QQ.one, n)


def ring_presented(presentation: Presentation | Mapping) -> CohomologyRing:
    """Graded quotient ring with an integration monomial; checked for consistency."""
    if not isinstance(presentation, Presentation):
        try:
            presentation = Presentation.from_mapping(presentation)
        except (KeyError, TypeError) as exc:
            raise InconsistentPresentation(f"incomplete presentation: {exc}") from exc
    if len(presentation.generators) != len(presentation.degrees):
        raise InconsistentPresentation(
            f"{len(presentation.generators)} generators but {len(presentation.degrees)} degrees"
        )
    if any(d < 1 for d in presentation.degrees):
        raise InconsistentPresentation("generator degrees must be positive")
    ambient = Ambient(tuple(presentation.generators))
    relations = tuple(parse_poly(r, ambient) for r in presentation.relations)
    for r in relations:
        if len(r.weighted_degrees(presentation.degrees)) > 1:
            raise InconsistentPresentation(f"relation {r} is not homogeneous")
    fundamental = parse_poly(presentation.integral_monomial, ambient)
    top_degrees = fundamental.weighted_degrees(presentation.degrees)
    if len(fundamental.terms) != 1 or len(top_degrees) != 1:
        raise InconsistentPresentation(
            f"integral monomial {presentation.integral_monomial!r} is not a single monomial"
        )
    if not presentation.integral_value:
        raise InconsistentPresentation("the integral value must be nonzero")
    top = top_degrees.pop()
    ring = CohomologyRing(
        "presented", ambient, presentation.degrees, relations, fundamental,
        presentation.integral_value, top,
    )

    staircase = standard_monomials(ring.basis)
    if staircase is None:
        raise InconsistentPresentation("the quotient ring is not finite dimensional")
    graded: dict[int, int] = {}
    for expo in staircase:
        k = sum(w * e for w, e in zip(presentation.degrees, expo))
        graded[k] = graded.get(k, 0) + 1
    if not graded or max(graded) != top or graded.get(top) != 1:
        raise InconsistentPresentation(
            f"expected a one-dimensional top degree {top}, got graded dimensions {graded}"
        )
    if not ring.normal_form(fundamental):
        raise InconsistentPresentation(
            f"integral monomial {presentation.integral_monomial!r} is zero in the ring"
        )
    logger.debug(f"presented ring {ring} with graded dimensions {graded}")
    return ring


@dataclass(frozen=True)
class TotalClass:
    """c_0 = 1, c_1, ..., c_n with c_i of degree i."""

    ring: CohomologyRing
    classes: tuple[MPoly, ...]

    def __post_init__(self) -> None:
        n = self.ring.top
        padded = list(self.classes[: n + 1])
        padded += [MPoly.zero(self.ring.ambient)] * (n + 1 - len(padded))
        if padded[0] != 1:
            raise InputError(f"a total Chern class starts with 1, got {padded[0]}")
        for i, c in enumerate(padded):
            if c and self.ring.degree_of(c) != {i}:
                raise DegreeMismatch(f"c_{i} = {c} is not of degree {i}")
        object.__setattr__(
            self, "classes", tuple(self.ring.normal_form(c) for c in padded)
        )

    @classmethod
    def from_total(cls, ring: CohomologyRing, total: MPoly) -> "TotalClass":
        return cls(ring, tuple(ring.part(total, i) for i in range(ring.top + 1)))

    @classmethod
    def line(cls, ring: CohomologyRing, c1: MPoly) -> "TotalClass":
        """c(L) = 1 + c1(L)."""
        return cls(ring, (ring.one(), c1))

    @classmethod
    def parse(cls, ring: CohomologyRing, entries: Sequence[str]) -> "TotalClass":
        return cls(ring, tuple(ring.parse(e) for e in entries))

    def c(self, i: int) -> MPoly:
        return self.classes[i]

    def total(self) -> MPoly:
        result = MPoly.zero(self.ring.ambient)
        for c in self.classes:
            result = result + c
        return result

    def __mul__(self, other: "TotalClass") -> "TotalClass":
        return TotalClass.from_total(self.ring, self.ring.mul(self.total(), other.total()))

    def inverse(self) -> "TotalClass":
        """Formal inverse: inv_k = -sum_{i=1..k} c_i inv_(k-i)."""
        inv = [self.ring.one()]
        for k in range(1, self.ring.top + 1):
            acc = MPoly.zero(self.ring.ambient)
            for i in range(1, k + 1):
                if self.classes[i]:
                    acc = acc + self.ring.mul(self.classes[i], inv[k - i])
            inv.append(-acc)
        return TotalClass(self.ring, tuple(inv))

    def dual(self) -> "TotalClass":
        """Chern classes of the dual bundle: (-1)^i c_i."""
        return TotalClass(
            self.ring, tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.classes))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TotalClass):
            return NotImplemented
        return self.ring == other.ring and self.classes == other.classes

    def __hash__(self) -> int:
        return hash(self.classes)

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.classes]


def total_chern_log_pn(n: int, component_degrees: Sequence[int]) -> TotalClass:
    """c(T_{P^n}(-log D)) for an NC union of smooth hypersurfaces of the given degrees.

    c(Omega^1(log D)) = (1 - h)^(n+1) * prod 1/(1 - d_i h), then dualized.
    """
    ring = ring_pn(n)
    h = ring.gen(0)
    omega = TotalClass.from_total(ring, ring.normal_form((1 - h) ** (n + 1)))
    for d in component_degrees:
        geometric = MPoly.zero(ring.ambient)
        for k in range(n + 1):
            geometric = geometric + (h.scale(d)) ** k
        omega = omega * TotalClass.from_total(ring, ring.normal_form(geometric))
    return omega.dual()


def tangent_pn(n: int) -> TotalClass:
    ring = ring_pn(n)
    return TotalClass.from_total(ring, ring.normal_form((1 + ring.gen(0)) ** (n + 1)))


def foliation_tangent_pn(n: int, degree: int) -> TotalClass:
    """T_F = O(1 - d) for a degree-d foliation by curves on P^n."""
    ring = ring_pn(n)
    return TotalClass.line(ring, ring.gen(0).scale(1 - degree))


def log_chern_class(
    ring: CohomologyRing, tangent: TotalClass, divisor_classes: Sequence[MPoly]
) -> TotalClass:
    """c(T_X(-log D)) = c(T_X) * prod (1 + D_i)^(-1) for a smooth NC divisor."""
    result = tangent
    for d in divisor_classes:
        result = result * TotalClass.line(ring, d).inverse()
    return result


def virtual_classes(E: TotalClass, F: TotalClass) -> TotalClass:
    """c(E - F) = c(E) * c(F)^(-1)."""
    return E * F.inverse()


def virtual_phi(phi: PhiSpec, E: TotalClass, F: TotalClass, R: CohomologyRing) -> Rational:
    """The integral of phi(E - F) over R."""
    if phi.n != R.top:
        raise DegreeMismatch(f"phi has degree {phi.n}, the ring has top degree {R.top}")
    virtual = virtual_classes(E, F)
    value = R.integrate(phi.substitute(virtual.classes[1:], R.ambient))
    logger.debug(f"virtual phi {phi} = {format_rational(value)}")
    return value


def log_chern_surface(c2TX: Rational, KdotD: Rational, D2: Rational) -> Rational:
    """c2(T_X(-log D)) = c2(T_X) + K.D + D^2 for a smooth curve D, K = -c1(T_X)."""
    return to_rational(c2TX) + to_rational(KdotD) + to_rational(D2)


def expected_singularities(tangent: TotalClass, foliation: TotalClass) -> int:
    """Number of singularities counted with multiplicity: the integral of c_n(T_X - T_F)."""
    ring = tangent.ring
    value = ring.integrate(virtual_classes(tangent, foliation).c(ring.top))
    if value.denominator != 1:
        raise InconsistentPresentation(
            f"expected singularity count {format_rational(value)} is not an integer"
        )
    return int(value.numerator)


@dataclass(frozen=True)
class PoincareVerdict:
    n: int
    deg_D: int
    deg_F: int
    total: Rational
    identity_value: Rational
    identity_holds: bool
    hypothesis_met: bool
    status: str  # satisfied, boundary, violated or hypothesis-not-met


def poincare_bound_check(
    n: int, deg_D: int, deg_F: int, res_log_c1n_total: Rational
) -> PoincareVerdict:
    """deg D <= deg F + n whenever the c1^n log residue total is non-negative (n odd).

    The degree identity says the total equals (deg F + n - deg D)^n.
    """
    if n % 2 == 0:
        raise InputError(f"the degree bound needs an odd dimension, got n = {n}")
    total = to_rational(res_log_c1n_total)
    identity_value = QQ(deg_F + n - deg_D) ** n
    hypothesis = total >= 0
    if not hypothesis:
        status = "hypothesis-not-met"
    elif deg_D < deg_F + n:
        status = "satisfied"
    elif deg_D == deg_F + n:
        status = "boundary"
    else:
        status = "violated"
    return PoincareVerdict(
        n, deg_D, deg_F, total, identity_value, total == identity_value, hypothesis, status
    )

