import pytest
from sympy import QQ

from logbb.chern import (
    Presentation,
    TotalClass,
    expected_singularities,
    foliation_tangent_pn,
    log_chern_class,
    log_chern_surface,
    poincare_bound_check,
    ring_pn,
    ring_presented,
    tangent_pn,
    total_chern_log_pn,
    virtual_phi,
)
from logbb.errors import DegreeMismatch, InconsistentPresentation, InputError
from logbb.residues import PhiSpec


def _hirzebruch(k: int) -> dict:
    return {
        "generators": ["D", "L"],
        "degrees": [1, 1],
        "relations": ["L^2", f"D^2 + {k}*D*L"],
        "integral_monomial": "D*L",
    }


def test_ring_pn_integration() -> None:
    ring = ring_pn(3)
    h = ring.gen("h")
    assert ring.integrate(h**3) == 1
    assert ring.integrate(h**2 + h) == 0
    assert ring.integrate(h**4) == 0
    assert ring.top == 3
    with pytest.raises(InputError):
        ring_pn(0)


def test_presented_ring_integral_value() -> None:
    ring = ring_presented(
        Presentation(("h",), (1,), ("h^3",), "h^2", QQ(2))
    )
    assert ring.top == 2
    assert ring.integrate(ring.parse("3*h^2 + h")) == 6


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_hirzebruch_log_c2(k: int) -> None:
    """c2(T(-log D)) of the negative section is 2 for every twist."""
    ring = ring_presented(_hirzebruch(k))
    tangent = TotalClass.parse(ring, ["1", f"2*D + {k + 2}*L", "4*D*L"])
    log_tangent = log_chern_class(ring, tangent, [ring.gen("D")])
    trivial = TotalClass.line(ring, ring.parse("0"))
    assert virtual_phi(PhiSpec.top(2), log_tangent, trivial, ring) == 2
    assert virtual_phi(PhiSpec.c1_power(2), log_tangent, trivial, ring) == k + 4
    assert ring.integrate(ring.parse("D^2")) == -k


@pytest.mark.parametrize(
    "data",
    [
        {**_hirzebruch(2), "degrees": [1]},
        {**_hirzebruch(2), "relations": ["L^2 + D"]},
        {**_hirzebruch(2), "relations": ["L^2"]},
        {**_hirzebruch(2), "relations": ["D^2", "L^2", "D*L"]},
        {**_hirzebruch(2), "integral_monomial": "D*L + L^2"},
        {**_hirzebruch(2), "integral_value": 0},
        {"generators": ["h"]},
    ],
)
def test_inconsistent_presentations(data: dict) -> None:
    with pytest.raises(InconsistentPresentation):
        ring_presented(data)


def test_log_chern_of_coordinate_tetrahedron() -> None:
    """Four hyperplanes in P^3: the log tangent bundle is trivial."""
    c = total_chern_log_pn(3, [1, 1, 1, 1])
    assert c.as_strings() == ["1", "0", "0", "0"]


def test_log_chern_of_line_in_plane() -> None:
    c = total_chern_log_pn(2, [1])
    assert c.c(1) == c.ring.parse("2*h")
    assert c.c(2) == c.ring.parse("h^2")
    assert c.ring.integrate(c.c(2)) == 1
    assert log_chern_surface(3, -3, 1) == 1


def test_virtual_phi_on_p3() -> None:
    log_tangent = total_chern_log_pn(3, [1, 1, 1, 1])
    foliation = foliation_tangent_pn(3, 2)
    ring = ring_pn(3)
    assert virtual_phi(PhiSpec.c1_power(3), log_tangent, foliation, ring) == 1
    assert virtual_phi(PhiSpec.top(3), log_tangent, foliation, ring) == 1
    with pytest.raises(DegreeMismatch):
        virtual_phi(PhiSpec.top(2), log_tangent, foliation, ring)


def test_expected_singularities() -> None:
    assert expected_singularities(tangent_pn(3), foliation_tangent_pn(3, 2)) == 15
    for d in (1, 2, 3, 4):
        assert expected_singularities(tangent_pn(2), foliation_tangent_pn(2, d)) == 1 + d + d * d


def test_total_class_inverse_and_dual() -> None:
    ring = ring_pn(2)
    c = TotalClass.parse(ring, ["1", "3*h", "3*h^2"])
    assert c.inverse() == TotalClass.parse(ring, ["1", "-3*h", "6*h^2"])
    assert c * c.inverse() == TotalClass.parse(ring, ["1"])
    assert c.dual() == TotalClass.parse(ring, ["1", "-3*h", "3*h^2"])


def test_total_class_validation() -> None:
    ring = ring_pn(2)
    with pytest.raises(InputError):
        TotalClass.parse(ring, ["2", "h"])
    with pytest.raises(DegreeMismatch):
        TotalClass.parse(ring, ["1", "h^2"])


def test_poincare_bound_statuses() -> None:
    satisfied = poincare_bound_check(3, 4, 2, 1)
    assert satisfied.status == "satisfied"
    assert satisfied.identity_holds

    assert poincare_bound_check(3, 3, 0, 0).status == "boundary"

    violated = poincare_bound_check(3, 6, 1, 1)
    assert violated.status == "violated"
    assert violated.identity_value == -8
    assert not violated.identity_holds

    negative = poincare_bound_check(3, 8, 1, -64)
    assert negative.status == "hypothesis-not-met"
    assert negative.identity_holds
    assert not negative.hypothesis_met

    with pytest.raises(InputError):
        poincare_bound_check(2, 3, 1, 0)
