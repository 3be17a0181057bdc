"""Groebner bases with cofactor tracking and the queries built on them.

Buchberger's algorithm with the Gebauer-Moeller pair criteria (the
``update`` procedure of Becker-Weispfenning, page 230), extended so that
every intermediate polynomial carries the row of cofactors expressing it
in terms of the original generators.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from sympy import QQ
from sympy.polys.monomials import monomial_divides
from sympy.polys.rings import PolyElement, PolyRing

from logbb.algebra.poly import (
    Ambient,
    MPoly,
    elimination_ring,
    monomials_of_degree,
    poly_ring,
    to_rational,
)
from logbb.app_utils.config import EngineSettings, get_settings
from logbb.errors import AmbientMismatch, BudgetExceeded, InputError, NotIsolated

logger = logging.getLogger(__name__)

INFINITE = math.inf


@dataclass(frozen=True)
class Ideal:
    """Ideal generated by nonzero polynomials; generator order does not matter."""

    ambient: Ambient
    generators: tuple[MPoly, ...] = field(default=())

    def __post_init__(self) -> None:
        gens = tuple(g for g in self.generators if g)
        for g in gens:
            if g.ambient != self.ambient:
                raise AmbientMismatch(f"generator {g} is not over ({self.ambient})")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, generators: Sequence[MPoly], ambient: Ambient | None = None) -> "Ideal":
        if ambient is None:
            if not generators:
                raise InputError("an ideal without generators needs an explicit ambient")
            ambient = generators[0].ambient
        return cls(ambient, tuple(generators))

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ambient, self.generators + other.generators)

    def translate(self, point: Sequence) -> "Ideal":
        return Ideal(self.ambient, tuple(g.translate(point) for g in self.generators))


@dataclass(frozen=True)
class GroebnerData:
    """Reduced Groebner basis plus cofactors over the original generators."""

    ambient: Ambient
    generators: tuple[MPoly, ...]
    basis: tuple[MPoly, ...]
    cofactors: tuple[tuple[MPoly, ...], ...]
    order: str

    @property
    def ring(self) -> PolyRing:
        return _ring_for(self.ambient, self.order)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        ring = self.ring
        return [g.in_ring(ring).LM for g in self.basis]

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() for g in self.basis)


def _ring_for(ambient: Ambient, order: str) -> PolyRing:
    if order.startswith("elim:"):
        return elimination_ring(ambient.names, int(order.split(":", 1)[1]))
    return poly_ring(ambient.names, order)


def _combine(
    ring: PolyRing, base: list[PolyElement], terms: Sequence[tuple[PolyElement, list[PolyElement]]]
) -> list[PolyElement]:
    """``base - sum(q * row)`` computed entrywise."""
    out = list(base)
    for q, row in terms:
        if q:
            for i, entry in enumerate(row):
                if entry:
                    out[i] = out[i] - q * entry
    return out


def groebner(
    ideal: Ideal, order: str = "grevlex", settings: EngineSettings | None = None
) -> GroebnerData:
    """Reduced Groebner basis of ``ideal`` with an exact cofactor matrix."""
    settings = settings or get_settings()
    ring = _ring_for(ideal.ambient, order)
    gens = [g.in_ring(ring) for g in ideal.generators]
    m = len(gens)
    if not m:
        return GroebnerData(ideal.ambient, (), (), (), order)

    polys: list[PolyElement] = []
    rows: list[list[PolyElement]] = []
    for i, g in enumerate(gens):
        inv = QQ.one / g.LC
        row = [ring.zero] * m
        row[i] = ring.ground_new(inv)
        polys.append(g.mul_ground(inv))
        rows.append(row)

    order_key = ring.order
    monomial_mul = ring.monomial_mul
    monomial_div = ring.monomial_div
    monomial_lcm = ring.monomial_lcm

    def select(pairs: set[tuple[int, int]]) -> tuple[int, int]:
        # normal selection strategy: minimal lcm of the head monomials
        return min(
            pairs,
            key=lambda pr: (order_key(monomial_lcm(polys[pr[0]].LM, polys[pr[1]].LM)), pr),
        )

    def normal(p: PolyElement, row: list[PolyElement], basis: list[int]) -> int | None:
        quotients, rem = p.div([polys[j] for j in basis])
        if not rem:
            return None
        row = _combine(ring, row, list(zip(quotients, (rows[j] for j in basis))))
        inv = QQ.one / rem.LC
        polys.append(rem.mul_ground(inv))
        rows.append([entry.mul_ground(inv) for entry in row])
        return len(polys) - 1

    def update(
        G: set[int], B: set[tuple[int, int]], ih: int
    ) -> tuple[set[int], set[tuple[int, int]]]:
        mh = polys[ih].LM
        C = set(G)
        D: set[tuple[int, int]] = set()
        while C:
            ig = C.pop()
            mg = polys[ig].LM
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip: int, lcm_hg: tuple = lcm_hg) -> bool:
                return monomial_div(lcm_hg, monomial_lcm(mh, polys[ip].LM)) is not None

            if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ipx) for ipx in C)
                and not any(lcm_divides(pr[1]) for pr in D)
            ):
                D.add((ih, ig))

        E: set[tuple[int, int]] = set()
        while D:
            ih_, ig = D.pop()
            mg = polys[ig].LM
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                E.add((ih_, ig))

        B_new: set[tuple[int, int]] = set()
        while B:
            ig1, ig2 = B.pop()
            mg1, mg2 = polys[ig1].LM, polys[ig2].LM
            lcm12 = monomial_lcm(mg1, mg2)
            if (
                monomial_div(lcm12, mh) is None
                or monomial_lcm(mg1, mh) == lcm12
                or monomial_lcm(mg2, mh) == lcm12
            ):
                B_new.add((ig1, ig2))
        B_new |= E

        G_new = {ig for ig in G if monomial_div(polys[ig].LM, mh) is None}
        G_new.add(ih)
        return G_new, B_new

    G: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    for ih in sorted(range(m), key=lambda i: order_key(polys[i].LM)):
        G, pairs = update(G, pairs, ih)

    steps = 0
    while pairs:
        steps += 1
        if steps > settings.groebner_step_budget:
            raise BudgetExceeded(
                f"Groebner computation exceeded {settings.groebner_step_budget} pair reductions"
            )
        i1, i2 = select(pairs)
        pairs.remove((i1, i2))
        p1, p2 = polys[i1], polys[i2]
        lcm12 = monomial_lcm(p1.LM, p2.LM)
        m1 = monomial_div(lcm12, p1.LM)
        m2 = monomial_div(lcm12, p2.LM)
        spoly = p1.mul_monom(m1) - p2.mul_monom(m2)
        srow = [
            a.mul_monom(m1) - b.mul_monom(m2) for a, b in zip(rows[i1], rows[i2])
        ]
        basis_now = sorted(G, key=lambda j: order_key(polys[j].LM))
        ih = normal(spoly, srow, basis_now)
        if ih is not None:
            G, pairs = update(G, pairs, ih)
    logger.debug(f"Groebner basis over ({ideal.ambient}) done after {steps} pair reductions")

    # drop members whose head is a multiple of another head, then inter-reduce
    minimal: list[int] = []
    for ig in sorted(G, key=lambda j: (order_key(polys[j].LM), j)):
        if all(monomial_div(polys[ig].LM, polys[j].LM) is None for j in minimal):
            minimal.append(ig)
    reduced: list[tuple[PolyElement, list[PolyElement]]] = []
    for ig in minimal:
        others = [j for j in minimal if j != ig]
        quotients, rem = polys[ig].div([polys[j] for j in others]) if others else ([], polys[ig])
        row = _combine(ring, rows[ig], list(zip(quotients, (rows[j] for j in others))))
        inv = QQ.one / rem.LC
        reduced.append((rem.mul_ground(inv), [entry.mul_ground(inv) for entry in row]))
    reduced.sort(key=lambda pr: order_key(pr[0].LM), reverse=True)

    ambient = ideal.ambient
    return GroebnerData(
        ambient=ambient,
        generators=ideal.generators,
        basis=tuple(MPoly(ambient, p) for p, _ in reduced),
        cofactors=tuple(tuple(MPoly(ambient, e) for e in row) for _, row in reduced),
        order=order,
    )


def reduce(f: MPoly, G: GroebnerData) -> tuple[MPoly, tuple[MPoly, ...]]:
    """Normal form of ``f`` and a lift: f = sum(lift_i * generator_i) + normal_form."""
    if f.ambient != G.ambient:
        raise AmbientMismatch(f"ambient mismatch: ({f.ambient}) vs ({G.ambient})")
    ring = G.ring
    m = len(G.generators)
    if not G.basis:
        return f, tuple(MPoly.zero(f.ambient) for _ in range(m))
    quotients, rem = f.in_ring(ring).div([g.in_ring(ring) for g in G.basis])
    lift = [ring.zero] * m
    for q, row in zip(quotients, G.cofactors):
        if q:
            for i, entry in enumerate(row):
                if entry:
                    lift[i] = lift[i] + q * entry.in_ring(ring)
    return MPoly(f.ambient, rem), tuple(MPoly(f.ambient, e) for e in lift)


def member(
    f: MPoly, ideal: Ideal, settings: EngineSettings | None = None
) -> tuple[MPoly, ...] | None:
    """Cofactor row with f = sum(row_i * gen_i), or None if f is not in the ideal."""
    normal_form, lift = reduce(f, groebner(ideal, settings=settings))
    return None if normal_form else lift


def saturate(ideal: Ideal, s: MPoly, settings: EngineSettings | None = None) -> Ideal:
    """(I : s^oo) by eliminating t from I + <1 - t*s>."""
    if not s:
        raise InputError("cannot saturate by the zero polynomial")
    ambient = ideal.ambient
    t_name = "t"
    while t_name in ambient.names:
        t_name = "_" + t_name
    ext = ambient.extend(t_name)
    lift = [MPoly.variable(ext, i + 1) for i in range(ambient.arity)]

    def embed(p: MPoly) -> MPoly:
        return p.substitute(lift, ext)

    t = MPoly.variable(ext, 0)
    aux = Ideal(ext, (*(embed(g) for g in ideal.generators), 1 - t * embed(s)))
    G = groebner(aux, order="elim:1", settings=settings)
    kept = []
    for g in G.basis:
        if g.degree_in(0) <= 0:
            kept.append(
                MPoly.from_terms(ambient, {e[1:]: c for e, c in g.terms.items()})
            )
    return Ideal(ambient, tuple(kept))


def standard_monomials(G: GroebnerData) -> list[tuple[int, ...]] | None:
    """Monomials outside the initial ideal, or None when there are infinitely many."""
    n = G.ambient.arity
    if not G.basis:
        return None
    if G.is_unit_ideal():
        return []
    heads = G.leading_monomials()
    bounds = []
    for i in range(n):
        pure = [h[i] for h in heads if sum(h) == h[i] and h[i] > 0]
        if not pure:
            return None
        bounds.append(min(pure))
    return [
        expo
        for expo in itertools.product(*(range(b) for b in bounds))
        if not any(monomial_divides(h, expo) for h in heads)
    ]


def quotient_dim(ideal: Ideal, settings: EngineSettings | None = None) -> int | float:
    """dim_Q of ring/ideal; ``INFINITE`` when the ideal is not zero-dimensional."""
    staircase = standard_monomials(groebner(ideal, settings=settings))
    return INFINITE if staircase is None else len(staircase)


def maximal_power(ambient: Ambient, k: int) -> tuple[MPoly, ...]:
    """Generators of m^k, m the maximal ideal at the origin."""
    return tuple(MPoly.monomial(ambient, e) for e in monomials_of_degree(ambient, k))


def local_multiplicity(
    ideal: Ideal, point: Sequence, settings: EngineSettings | None = None
) -> int:
    """dim of the local quotient at ``point`` via dim R/(I_p + m^k) stabilization."""
    settings = settings or get_settings()
    point = [to_rational(c) for c in point]
    local = ideal.translate(point)
    previous: int | float | None = None
    for k in range(1, settings.multiplicity_cap + 1):
        current = quotient_dim(
            local + Ideal(ideal.ambient, maximal_power(ideal.ambient, k)), settings
        )
        logger.debug(f"local multiplicity at {point}: k={k} gives {current}")
        if current == previous:
            return int(current)
        previous = current
    raise NotIsolated(
        f"local quotient at {tuple(str(c) for c in point)} did not stabilize by "
        f"k = {settings.multiplicity_cap}; the point is not an isolated zero"
    )
