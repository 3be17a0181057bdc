"""Multivariate power series truncated at a total degree."""

from collections.abc import Mapping, Sequence

from sympy import QQ

from logbb.algebra.poly import Ambient, Exponent, MPoly, Rational, to_rational
from logbb.errors import AmbientMismatch, InputError, NotAUnit


class TruncSeries:
    """Power series over an ambient, exact up to total degree ``truncation``."""

    __slots__ = ("_poly", "truncation")

    def __init__(self, poly: MPoly, truncation: int):
        if truncation < 0:
            raise InputError("truncation degree must be non-negative")
        self.truncation = truncation
        self._poly = _truncate(poly, truncation)

    @classmethod
    def from_terms(
        cls, ambient: Ambient, terms: Mapping[Exponent, Rational], truncation: int
    ) -> "TruncSeries":
        return cls(MPoly.from_terms(ambient, terms), truncation)

    @property
    def ambient(self) -> Ambient:
        return self._poly.ambient

    @property
    def terms(self) -> dict[Exponent, Rational]:
        return self._poly.terms

    def as_poly(self) -> MPoly:
        return self._poly

    def coeff(self, expo: Sequence[int]) -> Rational:
        return self._poly.coeff(expo)

    def constant_term(self) -> Rational:
        return self._poly.constant_value()

    def homogeneous_part(self, degree: int) -> MPoly:
        return MPoly.from_terms(
            self.ambient,
            {e: c for e, c in self._poly.terms.items() if sum(e) == degree},
        )

    def _check(self, other: "TruncSeries") -> int:
        if other.ambient != self.ambient:
            raise AmbientMismatch(f"ambient mismatch: ({self.ambient}) vs ({other.ambient})")
        return min(self.truncation, other.truncation)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self._poly + other._poly, self._check(other))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self._poly - other._poly, self._check(other))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self._poly * other._poly, self._check(other))

    def __pow__(self, exponent: int) -> "TruncSeries":
        result = TruncSeries(MPoly.one(self.ambient), self.truncation)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.truncation == other.truncation and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._poly, self.truncation))

    def __repr__(self) -> str:
        return f"TruncSeries({self._poly} + O(deg {self.truncation + 1}))"


def _truncate(poly: MPoly, truncation: int) -> MPoly:
    if poly.total_degree() <= truncation:
        return poly
    return MPoly.from_terms(
        poly.ambient, {e: c for e, c in poly.terms.items() if sum(e) <= truncation}
    )


def series_inverse(u: TruncSeries) -> TruncSeries:
    """Multiplicative inverse of a unit, graded piece by graded piece.

    inv_0 = 1/u_0 and inv_k = -(1/u_0) * sum_{i=1..k} u_i * inv_{k-i}.
    """
    u0 = u.constant_term()
    if not u0:
        raise NotAUnit("constant term is zero; the series is not a unit")
    inv0 = QQ.one / u0
    pieces = [u.homogeneous_part(k) for k in range(u.truncation + 1)]
    inverse = [MPoly.constant(u.ambient, inv0)]
    for k in range(1, u.truncation + 1):
        acc = MPoly.zero(u.ambient)
        for i in range(1, k + 1):
            if pieces[i]:
                acc = acc + pieces[i] * inverse[k - i]
        inverse.append(acc.scale(-inv0))
    total = MPoly.zero(u.ambient)
    for piece in inverse:
        total = total + piece
    return TruncSeries(total, u.truncation)


def coeff(p: "MPoly | TruncSeries", expo: Sequence[int]) -> Rational:
    """Coefficient of ``expo`` (zero when absent)."""
    return to_rational(p.coeff(expo))
