import pytest
from sympy import QQ

from logbb.algebra import Ambient, parse_poly
from logbb.errors import BranchDegenerate, InputError, UnsupportedBranch
from logbb.foliation import Divisor, VectorField, normal_crossing_basis
from logbb.residues import PhiSpec, SingularPoint, bb_residue, res_log
from logbb.surfaces import (
    LedgerPoint,
    adapted_branch,
    cs_smooth,
    gsv_smooth,
    ledger_totals,
)


def _field(ambient: Ambient, *texts: str) -> VectorField:
    return VectorField(ambient, tuple(parse_poly(t, ambient) for t in texts))


def _divisor(ambient: Ambient, *texts: str) -> Divisor:
    return Divisor(ambient, tuple(parse_poly(t, ambient) for t in texts))


def test_linear_branch_indices(xy: Ambient) -> None:
    v = _field(xy, "2*x", "3*y")
    br = adapted_branch(v, _divisor(xy, "x"), (0, 0))
    assert gsv_smooth(br) == 1
    assert cs_smooth(br) == QQ(2, 3)


def test_shifted_branch(xy: Ambient) -> None:
    v = _field(xy, "2*x", "3*y - 3")
    br = adapted_branch(v, _divisor(xy, "y - 1"), (0, 1))
    assert gsv_smooth(br) == 1
    assert cs_smooth(br) == QQ(3, 2)


def test_tangent_order_two(xy: Ambient) -> None:
    assert gsv_smooth(adapted_branch(_field(xy, "x", "y^2"), _divisor(xy, "x"), (0, 0))) == 2
    br = adapted_branch(_field(xy, "x + x*y", "y^2"), _divisor(xy, "x"), (0, 0))
    assert gsv_smooth(br) == 2
    assert cs_smooth(br) == 1


def test_residue_ledger_at_linear_point(xy: Ambient) -> None:
    """BB - Res^log - CS = 2 * GSV for a linear saddle on an invariant line."""
    D = _divisor(xy, "x")
    v = _field(xy, "2*x", "3*y")
    B = normal_crossing_basis(D)
    p = SingularPoint.at(v, (0, 0), basis=B)
    phi = PhiSpec.c1_power(2)
    bb = bb_residue(phi, v, p)
    rl = res_log(phi, v, B, p)
    br = adapted_branch(v, D, (0, 0))
    assert bb == QQ(25, 6)
    assert rl == QQ(3, 2)
    point = LedgerPoint("p", True, 1, bb, rl, gsv=gsv_smooth(br), cs=cs_smooth(br))
    assert point.gsv_from_residues == 1


def test_branch_degenerate(xy: Ambient) -> None:
    br = adapted_branch(_field(xy, "x", "x*y"), _divisor(xy, "x"), (0, 0))
    with pytest.raises(BranchDegenerate):
        gsv_smooth(br)
    with pytest.raises(BranchDegenerate):
        cs_smooth(br)


def test_unsupported_branches(xy: Ambient, xyz: Ambient) -> None:
    with pytest.raises(UnsupportedBranch):
        adapted_branch(_field(xy, "x", "y"), _divisor(xy, "x", "y"), (0, 0))
    with pytest.raises(UnsupportedBranch):
        adapted_branch(_field(xy, "x", "2*y"), _divisor(xy, "x - y^2"), (0, 0))
    with pytest.raises(UnsupportedBranch):
        adapted_branch(_field(xyz, "x", "y", "z"), _divisor(xyz, "x"), (0, 0, 0))


def test_non_invariant_branch(xy: Ambient) -> None:
    with pytest.raises(InputError):
        adapted_branch(_field(xy, "y", "x"), _divisor(xy, "x"), (0, 0))


def test_ledger_totals() -> None:
    on = LedgerPoint(
        "a", True, 1, QQ(25, 6), QQ(3, 2), res_log_c2=QQ(1), gsv=1, cs=QQ(2, 3)
    )
    off = LedgerPoint("b", False, 3, QQ(4))
    totals = ledger_totals(
        [on, off], divisor_square=QQ(2, 3), normal_dot_divisor=1, c2_chern_side=4
    )
    assert totals.bb == QQ(25, 6)
    assert totals.milnor_off_divisor == 3
    assert totals.ledger_lhs == totals.ledger_rhs == QQ(8, 3)
    assert totals.ledger_holds
    assert totals.camacho_sad_holds
    assert totals.brunella_holds
    assert totals.milnor_ledger_holds

    bare = ledger_totals([on])
    assert bare.camacho_sad_holds is None
    assert bare.milnor_ledger_holds is None
