import random

import pytest

from logbb.algebra import Ambient, MPoly, parse_poly
from logbb.app_utils.config import EngineSettings
from logbb.errors import BudgetExceeded, InputError, NotIsolated
from logbb.ideals import (
    INFINITE,
    Ideal,
    groebner,
    local_multiplicity,
    member,
    quotient_dim,
    reduce,
    saturate,
    standard_monomials,
)


def _random_poly(rng: random.Random, ambient: Ambient, degree: int) -> MPoly:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        expo = [0] * ambient.arity
        for _ in range(rng.randint(0, degree)):
            expo[rng.randrange(ambient.arity)] += 1
        terms[tuple(expo)] = rng.randint(-3, 3)
    p = MPoly.from_terms(ambient, terms)
    return p if p else MPoly.variable(ambient, 0)


def _combination(row: tuple[MPoly, ...], gens: tuple[MPoly, ...], ambient: Ambient) -> MPoly:
    total = MPoly.zero(ambient)
    for c, g in zip(row, gens):
        total = total + c * g
    return total


@pytest.mark.parametrize("seed", range(100))
def test_cofactors_reconstruct_basis(seed: int) -> None:
    """Every basis element and every reduction is an explicit combination of the generators."""
    rng = random.Random(seed)
    ambient = Ambient(("x", "y", "z")[: rng.choice([2, 3])])
    gens = tuple(_random_poly(rng, ambient, 2) for _ in range(rng.randint(1, 3)))
    G = groebner(Ideal(ambient, gens))
    for g, row in zip(G.basis, G.cofactors):
        assert _combination(row, G.generators, ambient) == g
    f = _random_poly(rng, ambient, 3)
    normal_form, lift = reduce(f, G)
    assert f - _combination(lift, G.generators, ambient) == normal_form
    for g in G.generators:
        assert not reduce(g, G)[0]


def test_reduced_basis_of_known_ideal(xy: Ambient) -> None:
    G = groebner(Ideal(xy, (parse_poly("x^2 - y", xy), parse_poly("x*y - 1", xy))))
    assert not reduce(parse_poly("y^3 - 1", xy), G)[0]
    assert standard_monomials(G) is not None
    assert quotient_dim(Ideal(xy, G.basis)) == 3


def test_membership(xy: Ambient) -> None:
    ideal = Ideal(xy, (parse_poly("x^2", xy), parse_poly("y", xy)))
    row = member(parse_poly("x^3 + x*y", xy), ideal)
    assert row is not None
    assert _combination(row, ideal.generators, xy) == parse_poly("x^3 + x*y", xy)
    assert member(parse_poly("x", xy), ideal) is None


def test_unit_and_infinite_quotients(xy: Ambient) -> None:
    assert quotient_dim(Ideal(xy, (parse_poly("x", xy), parse_poly("x - 1", xy)))) == 0
    assert quotient_dim(Ideal(xy, (parse_poly("x*y", xy),))) == INFINITE


def test_saturation_removes_component(xy: Ambient) -> None:
    ideal = Ideal(xy, (parse_poly("x^2*(x - 1)", xy), parse_poly("y", xy)))
    saturated = saturate(ideal, parse_poly("x", xy))
    assert quotient_dim(saturated) == 1
    assert member(parse_poly("x - 1", xy), saturated) is not None


def _product(ambient: Ambient, var: int, roots: list[tuple[int, int]]) -> MPoly:
    p = MPoly.one(ambient)
    x = MPoly.variable(ambient, var)
    for root, mult in roots:
        p = p * (x - root) ** mult
    return p


@pytest.mark.parametrize("seed", range(20))
def test_local_multiplicities_add_up(seed: int, xy: Ambient) -> None:
    """Sum of local multiplicities over the rational zeros equals the global dimension."""
    rng = random.Random(1000 + seed)
    xs = [(r, rng.randint(1, 3)) for r in rng.sample(range(-3, 4), rng.randint(1, 3))]
    if seed % 2:
        ys = [(r, rng.randint(1, 2)) for r in rng.sample(range(-3, 4), rng.randint(1, 2))]
        gens = (_product(xy, 0, xs), _product(xy, 1, ys))
        zeros = [((a, b), ma * mb) for a, ma in xs for b, mb in ys]
    else:
        # y = q(x): the zeros sit on a graph, one per root of the x polynomial
        c = rng.randint(-2, 2)
        x = MPoly.variable(xy, 0)
        gens = (_product(xy, 0, xs), MPoly.variable(xy, 1) - x * x.scale(c))
        zeros = [((a, c * a * a), ma) for a, ma in xs]
    ideal = Ideal(xy, gens)
    total = sum(local_multiplicity(ideal, point) for point, _ in zeros)
    assert total == quotient_dim(ideal)
    for point, expected in zeros:
        assert local_multiplicity(ideal, point) == expected


def test_local_multiplicity_of_non_isolated_point(xy: Ambient) -> None:
    ideal = Ideal(xy, (parse_poly("x*y", xy),))
    with pytest.raises(NotIsolated):
        local_multiplicity(ideal, (0, 0), EngineSettings(multiplicity_cap=4))


def test_step_budget(xyz: Ambient) -> None:
    ideal = Ideal(
        xyz,
        (
            parse_poly("x + y + z", xyz),
            parse_poly("x*y + y*z + z*x", xyz),
            parse_poly("x*y*z - 1", xyz),
        ),
    )
    with pytest.raises(BudgetExceeded):
        groebner(ideal, settings=EngineSettings(groebner_step_budget=1))


def test_basis_is_minimal_and_reduced() -> None:
    x_only = Ambient(("x",))
    ideal = Ideal(x_only, (parse_poly("x^2 - 1", x_only), parse_poly("x - 1", x_only)))
    G = groebner(ideal)
    assert G.basis == (parse_poly("x - 1", x_only),)
    (row,) = G.cofactors
    assert _combination(row, G.generators, x_only) == G.basis[0]


def test_redundant_generators_are_pruned(xy: Ambient) -> None:
    gens = (parse_poly("x^3", xy), parse_poly("x", xy), parse_poly("x*y + y^2", xy))
    G = groebner(Ideal(xy, gens))
    heads = G.leading_monomials()
    for i, a in enumerate(heads):
        for j, b in enumerate(heads):
            assert i == j or not all(p <= q for p, q in zip(a, b))
    for g, row in zip(G.basis, G.cofactors):
        assert _combination(row, G.generators, xy) == g


def test_reduce_examples(xy: Ambient) -> None:
    G = groebner(Ideal(xy, (parse_poly("x + y", xy), parse_poly("y^2", xy))))
    normal_form, lift = reduce(parse_poly("x^2", xy), G)
    assert not normal_form
    assert _combination(lift, G.generators, xy) == parse_poly("x^2", xy)

    normal_form, lift = reduce(parse_poly("x", xy), groebner(Ideal(xy, (parse_poly("y", xy),))))
    assert normal_form == parse_poly("x", xy)
    assert all(not c for c in lift)


def test_membership_examples(xy: Ambient) -> None:
    x, y = MPoly.variable(xy, "x"), MPoly.variable(xy, "y")
    assert member(x * x, Ideal(xy, (x + y, y * y))) is not None
    assert member(MPoly.one(xy), Ideal(xy, (x, y))) is None
    f = parse_poly("x*y*(x + y)", xy)
    euler = x * f.derive("x") + y * f.derive("y")
    row = member(euler, Ideal(xy, (f,)))
    assert row is not None
    assert row == (MPoly.constant(xy, 3),)


def test_quotient_dimension_examples(xy: Ambient) -> None:
    assert quotient_dim(Ideal(xy, (parse_poly("x^2", xy), parse_poly("y^3", xy)))) == 6
    assert quotient_dim(Ideal(xy, (parse_poly("x + y", xy), parse_poly("y^2", xy)))) == 2


def test_local_multiplicity_examples(xy: Ambient) -> None:
    ideal = Ideal(xy, (parse_poly("x*(x - 1)", xy), parse_poly("y", xy)))
    assert local_multiplicity(ideal, (0, 0)) == 1
    assert local_multiplicity(ideal, (1, 0)) == 1
    cusp = Ideal(xy, (parse_poly("x^2", xy), parse_poly("y^3", xy)))
    assert local_multiplicity(cusp, (0, 0)) == 6


def test_ideal_of_needs_an_ambient(xy: Ambient) -> None:
    with pytest.raises(InputError):
        Ideal.of([])
    assert Ideal.of([], xy).generators == ()
    assert Ideal.of([parse_poly("x", xy)]).ambient == xy


def test_saturate_by_zero(xy: Ambient) -> None:
    with pytest.raises(InputError):
        saturate(Ideal(xy, (parse_poly("x", xy),)), MPoly.zero(xy))


def _contains(big: Ideal, small: Ideal) -> bool:
    return all(member(g, big) is not None for g in small.generators)


@pytest.mark.parametrize("seed", range(12))
def test_saturation_contains_ideal_and_is_idempotent(seed: int, xy: Ambient) -> None:
    rng = random.Random(300 + seed)
    xs = [(r, rng.randint(1, 2)) for r in rng.sample(range(-2, 3), rng.randint(1, 3))]
    ys = [(r, 1) for r in rng.sample(range(-2, 3), rng.randint(1, 2))]
    ideal = Ideal(xy, (_product(xy, 0, xs), _product(xy, 1, ys)))
    s = MPoly.variable(xy, rng.randrange(2)) - rng.randint(-2, 2)
    saturated = saturate(ideal, s)
    assert _contains(saturated, ideal)
    again = saturate(saturated, s)
    assert _contains(saturated, again)
    assert _contains(again, saturated)
