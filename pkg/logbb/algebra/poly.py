"""Exact rationals and sparse multivariate polynomials over QQ.

``MPoly`` pairs an ``Ambient`` (the ordered variable names) with a sympy
``PolyElement`` over ``QQ``; the element is the sparse exponent-vector to
coefficient map. Values are immutable once built.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Union

from sympy import QQ, Rational as SympyRational
from sympy.polys.orderings import ProductOrder, grevlex, monomial_key
from sympy.polys.rings import PolyElement, PolyRing

from logbb.errors import AmbientMismatch, IndexOutOfRange, InputError

Rational = QQ.dtype
Exponent = tuple[int, ...]
Scalar = Union[int, Fraction, "Rational"]


def to_rational(value: Any) -> Rational:
    """Coerce ints, Fractions, sympy Rationals and "p/q" strings to QQ."""
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, SympyRational):
        return QQ(int(value.p), int(value.q))
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
        return QQ(frac.numerator, frac.denominator)
    raise InputError(f"not a rational number: {value!r}")


def format_rational(value: Rational) -> str:
    """Exact text form: "-8", "3/2"."""
    value = to_rational(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


@dataclass(frozen=True)
class Ambient:
    """Ordered variable names; variables are addressed by dense index."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise InputError("an ambient needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate variable names in {self.names}")

    @classmethod
    def of(cls, names: Iterable[str] | str) -> "Ambient":
        if isinstance(names, str):
            names = [n.strip() for n in names.replace(",", " ").split()]
        return cls(tuple(names))

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, var: int | str) -> int:
        if isinstance(var, str):
            try:
                return self.names.index(var)
            except ValueError:
                raise IndexOutOfRange(f"no variable {var!r} in {self.names}") from None
        if not 0 <= var < self.arity:
            raise IndexOutOfRange(f"variable index {var} out of range 0..{self.arity - 1}")
        return var

    def extend(self, *names: str) -> "Ambient":
        return Ambient(tuple(names) + self.names)

    def __str__(self) -> str:
        return ",".join(self.names)


@lru_cache(maxsize=None)
def poly_ring(names: tuple[str, ...], order: str = "grevlex") -> PolyRing:
    """QQ polynomial ring over ``names`` with the given monomial order tag."""
    return PolyRing(names, QQ, monomial_key(order))


@lru_cache(maxsize=None)
def elimination_ring(names: tuple[str, ...], block: int) -> PolyRing:
    """Ring with a two-block order: the first ``block`` variables are eliminated."""
    order = ProductOrder(
        (grevlex, lambda m: m[:block]),
        (grevlex, lambda m: m[block:]),
    )
    return PolyRing(names, QQ, order)


class MPoly:
    """Sparse polynomial with exact rational coefficients over an ``Ambient``."""

    __slots__ = ("ambient", "element")

    def __init__(self, ambient: Ambient, element: PolyElement | None = None):
        ring = poly_ring(ambient.names)
        if element is None:
            element = ring.zero
        elif element.ring is not ring:
            element = ring.from_dict(dict(element))
        self.ambient = ambient
        self.element = element

    # --- construction -------------------------------------------------------

    @classmethod
    def zero(cls, ambient: Ambient) -> "MPoly":
        return cls(ambient)

    @classmethod
    def constant(cls, ambient: Ambient, value: Scalar) -> "MPoly":
        return cls(ambient, poly_ring(ambient.names).ground_new(to_rational(value)))

    @classmethod
    def one(cls, ambient: Ambient) -> "MPoly":
        return cls.constant(ambient, 1)

    @classmethod
    def variable(cls, ambient: Ambient, var: int | str) -> "MPoly":
        return cls(ambient, poly_ring(ambient.names).gens[ambient.index(var)])

    @classmethod
    def from_terms(cls, ambient: Ambient, terms: Mapping[Exponent, Scalar]) -> "MPoly":
        ring = poly_ring(ambient.names)
        clean: dict[Exponent, Rational] = {}
        for expo, coeff in terms.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != ambient.arity or min(expo, default=0) < 0:
                raise InputError(f"bad exponent vector {expo} for ambient {ambient}")
            c = to_rational(coeff)
            if c:
                clean[expo] = clean.get(expo, QQ.zero) + c
        return cls(ambient, ring.from_dict({e: c for e, c in clean.items() if c}))

    @classmethod
    def monomial(cls, ambient: Ambient, expo: Exponent, coeff: Scalar = 1) -> "MPoly":
        return cls.from_terms(ambient, {tuple(expo): coeff})

    # --- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Rational]:
        return dict(self.element)

    def coeff(self, expo: Sequence[int]) -> Rational:
        return self.element.get(tuple(expo), QQ.zero)

    def is_zero(self) -> bool:
        return not self.element

    def __bool__(self) -> bool:
        return bool(self.element)

    def is_constant(self) -> bool:
        return self.element.is_ground

    def constant_value(self) -> Rational:
        return self.coeff((0,) * self.ambient.arity)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.element:
            return -1
        return max(sum(e) for e in self.element)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(w * e for w, e in zip(weights, expo)) for expo in self.element}

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        weights = weights or [1] * self.ambient.arity
        return len(self.weighted_degrees(weights)) <= 1

    def degree_in(self, var: int | str) -> int:
        i = self.ambient.index(var)
        return max((e[i] for e in self.element), default=-1)

    def variables_used(self) -> set[int]:
        return {i for expo in self.element for i, e in enumerate(expo) if e}

    # --- arithmetic ---------------------------------------------------------

    def _coerce(self, other: Any) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ambient != self.ambient:
                raise AmbientMismatch(
                    f"ambient mismatch: ({self.ambient}) vs ({other.ambient})"
                )
            return other
        return MPoly.constant(self.ambient, other)

    def __add__(self, other: Any) -> "MPoly":
        return MPoly(self.ambient, self.element + self._coerce(other).element)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "MPoly":
        return MPoly(self.ambient, self.element - self._coerce(other).element)

    def __rsub__(self, other: Any) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "MPoly":
        return MPoly(self.ambient, self.element * self._coerce(other).element)

    __rmul__ = __mul__

    def __neg__(self) -> "MPoly":
        return MPoly(self.ambient, -self.element)

    def __pow__(self, exponent: int) -> "MPoly":
        if exponent < 0:
            raise InputError("negative polynomial powers are not polynomials")
        return MPoly(self.ambient, self.element**exponent)

    def scale(self, value: Scalar) -> "MPoly":
        return MPoly(self.ambient, self.element * to_rational(value))

    def exquo(self, other: "MPoly") -> "MPoly | None":
        """Exact quotient ``self / other`` or None when ``other`` does not divide."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if not self:
            return self
        (quotient,), remainder = self.element.div([other.element])
        if remainder:
            return None
        return MPoly(self.ambient, quotient)

    def divides(self, other: "MPoly") -> bool:
        return self._coerce(other).exquo(self) is not None

    def gcd(self, other: "MPoly") -> "MPoly":
        return MPoly(self.ambient, self.element.gcd(self._coerce(other).element))

    def monic(self) -> "MPoly":
        return MPoly(self.ambient, self.element.monic()) if self else self

    # --- calculus and substitution ------------------------------------------

    def derive(self, var: int | str) -> "MPoly":
        i = self.ambient.index(var)
        return MPoly(self.ambient, self.element.diff(self.element.ring.gens[i]))

    def eval(self, point: Sequence[Any]) -> Rational:
        if len(point) != self.ambient.arity:
            raise InputError(
                f"point has {len(point)} coordinates, ambient ({self.ambient}) needs "
                f"{self.ambient.arity}"
            )
        values = [to_rational(c) for c in point]
        if not self.element:
            return QQ.zero
        return QQ.convert(self.element(*values))

    def translate(self, point: Sequence[Any]) -> "MPoly":
        """The polynomial ``q(z) = p(z + point)``: expansion centred at ``point``."""
        gens = self.element.ring.gens
        shifts = [(g, g + to_rational(c)) for g, c in zip(gens, point) if to_rational(c)]
        if not shifts:
            return self
        return MPoly(self.ambient, self.element.compose(shifts))

    def substitute(self, images: Sequence["MPoly"], target: Ambient) -> "MPoly":
        """Replace variable i by ``images[i]`` (polynomials over ``target``)."""
        if len(images) != self.ambient.arity:
            raise InputError("substitute needs one image per variable")
        ring = poly_ring(target.names)
        imgs = [img.element if isinstance(img, MPoly) else ring(img) for img in images]
        result = ring.zero
        for expo, coeff in self.element.items():
            term = ring.ground_new(coeff)
            for img, e in zip(imgs, expo):
                if e:
                    term *= img**e
            result += term
        return MPoly(target, result)

    def rename(self, target: Ambient) -> "MPoly":
        """Same terms over another ambient of the same arity."""
        if target.arity != self.ambient.arity:
            raise AmbientMismatch(f"cannot rename ({self.ambient}) to ({target})")
        return MPoly(target, poly_ring(target.names).from_dict(dict(self.element)))

    def in_ring(self, ring: PolyRing) -> PolyElement:
        return ring.from_dict(dict(self.element))

    # --- equality and printing ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self.ambient == other.ambient and dict(self.element) == dict(
                other.element
            )
        if isinstance(other, (int, Fraction, QQ.dtype)):
            return self.is_constant() and self.constant_value() == to_rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ambient, frozenset(self.element.items())))

    def __str__(self) -> str:
        if not self.element:
            return "0"
        pieces: list[str] = []
        for expo, coeff in self.element.terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ambient.names, expo)
                if e
            ]
            magnitude = abs(coeff)
            text = format_rational(magnitude)
            if factors:
                body = "*".join(factors if magnitude == 1 else [text, *factors])
            else:
                body = text
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"MPoly({self.ambient}: {self})"


def poly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """``op`` is one of add, sub, mul; ambients must match."""
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"ambient mismatch: ({a.ambient}) vs ({b.ambient})")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown polynomial operation {op!r}")


def derive(p: MPoly, var: int | str) -> MPoly:
    return p.derive(var)


def eval_poly(p: MPoly, point: Sequence[Any]) -> Rational:
    return p.eval(point)


def variables(ambient: Ambient) -> list[MPoly]:
    return [MPoly.variable(ambient, i) for i in range(ambient.arity)]


def monomials_of_degree(ambient: Ambient, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree."""
    out: list[Exponent] = []

    def fill(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            out.append((*prefix, left))
            return
        for e in range(left, -1, -1):
            fill([*prefix, e], left - e, slots - 1)

    fill([], degree, ambient.arity)
    return out
