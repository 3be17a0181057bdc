"""Global verification of a scene.

The per-point pipeline (chart -> Saito frame -> residues) runs for every
supplied singular point; totals are compared with the Chern-side integral
and the completeness of the point list is certified by the Milnor count.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from sympy import QQ

from logbb.algebra.poly import MPoly, Rational, format_rational, to_rational
from logbb.app_utils.config import EngineSettings, get_settings
from logbb.app_utils.typing import (
    Certificate,
    ChernReport,
    GlobalReport,
    LedgerPointRecord,
    LedgerReport,
    PointRecord,
    PoincareRecord,
)
from logbb.chern import (
    TotalClass,
    expected_singularities,
    log_chern_class,
    poincare_bound_check,
    total_chern_log_pn,
    virtual_classes,
    virtual_phi,
)
from logbb.errors import AtlasInconsistency, InputError, SceneValidationError
from logbb.residues import (
    PhiSpec,
    ResidueReport,
    SingularPoint,
    build_separator,
    point_report,
)
from logbb.scene.atlas import (
    chart_data,
    charts_containing,
    in_chart,
    unique_points,
    zeros_in_chart,
)
from logbb.scene.model import Scene, ScenePoint, foliation_tangent
from logbb.surfaces import (
    LedgerPoint,
    adapted_branch,
    cs_smooth,
    gsv_smooth,
    ledger_totals,
)

logger = logging.getLogger(__name__)


def scene_phi(scene: Scene, phi: PhiSpec | str | None = None) -> PhiSpec:
    """The phi to evaluate: an explicit override, the scene's, or c1^n."""
    if isinstance(phi, PhiSpec):
        return phi
    if isinstance(phi, str):
        return PhiSpec.parse(phi, scene.dim)
    return scene.phi or PhiSpec.c1_power(scene.dim)


def _separator(scene: Scene, chart: int, coords: Sequence, points: Sequence[ScenePoint]):
    data = chart_data(scene, chart)
    others = [q for q in zeros_in_chart(scene, chart, points) if tuple(q) != tuple(coords)]
    if not others:
        return None
    return build_separator(data.ambient, coords, others)


def residue_in_chart(
    scene: Scene,
    phi: PhiSpec,
    chart: int,
    coords: Sequence,
    points: Sequence[ScenePoint],
    settings: EngineSettings,
) -> ResidueReport:
    data = chart_data(scene, chart)
    p = SingularPoint.at(data.field, coords, chart, data.basis)
    separator = None if p.nondegenerate else _separator(scene, chart, p.coordinates, points)
    return point_report(phi, data.field, data.basis, p, separator, settings)


def _same_invariants(a: ResidueReport, b: ResidueReport) -> bool:
    return (a.milnor, a.bb_phi, a.res_log_phi, a.ind_log) == (
        b.milnor,
        b.bb_phi,
        b.res_log_phi,
        b.ind_log,
    )


def _point_task(
    scene: Scene,
    phi: PhiSpec,
    point: ScenePoint,
    points: Sequence[ScenePoint],
    settings: EngineSettings,
) -> ResidueReport:
    report = residue_in_chart(scene, phi, point.chart, point.coordinates, points, settings)
    if settings.cross_check_charts:
        for other in charts_containing(scene, point):
            coords = in_chart(point, other)
            again = residue_in_chart(scene, phi, other, coords, points, settings)
            if not _same_invariants(report, again):
                raise AtlasInconsistency(
                    f"{point.label} gives different invariants in chart {point.chart} "
                    f"and chart {other}: bb {format_rational(report.bb_phi)} vs "
                    f"{format_rational(again.bb_phi)}"
                )
    return report


def _prepare_charts(scene: Scene, points: Sequence[ScenePoint], settings: EngineSettings) -> None:
    # charts are cached on the scene; build them before fanning out
    for point in points:
        chart_data(scene, point.chart)
        if settings.cross_check_charts:
            for other in charts_containing(scene, point):
                chart_data(scene, other)


def compute_points(
    scene: Scene, phi: PhiSpec, settings: EngineSettings | None = None
) -> list[tuple[ScenePoint, ResidueReport]]:
    """Residue reports for the deduplicated, sorted point list."""
    settings = settings or get_settings()
    points = unique_points(scene)
    _prepare_charts(scene, points, settings)
    if settings.jobs > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
            reports = list(
                pool.map(lambda p: _point_task(scene, phi, p, points, settings), points)
            )
    else:
        reports = [_point_task(scene, phi, p, points, settings) for p in points]
    return list(zip(points, reports))


def expected_count(scene: Scene) -> int | None:
    F = foliation_tangent(scene)
    if scene.tangent is not None and F is not None:
        return expected_singularities(scene.tangent, F)
    return scene.declared_expected


def certify_completeness(
    scene: Scene, milnors: Sequence[int] | None = None, settings: EngineSettings | None = None
) -> Certificate:
    """Sum of Milnor numbers over the point list against the expected count."""
    if milnors is None:
        settings = settings or get_settings()
        points = unique_points(scene)
        milnors = [
            residue_in_chart(
                scene, PhiSpec.top(scene.dim), p.chart, p.coordinates, points, settings
            ).milnor
            for p in points
        ]
    total = sum(milnors)
    expected = expected_count(scene)
    if expected is None:
        return Certificate(
            ok=False,
            milnor_total=total,
            expected=None,
            points=len(milnors),
            reason="no expected singularity count for this scene",
        )
    ok = total == expected
    reason = "" if ok else f"Milnor total {total} differs from the expected {expected}"
    return Certificate(ok=ok, milnor_total=total, expected=expected, points=len(milnors), reason=reason)


def log_tangent_class(scene: Scene) -> TotalClass:
    """c(T_X(-log D)): supplied, the NC product formula on P^n, or the presented data."""
    if scene.supplied_log_tangent is not None:
        return scene.supplied_log_tangent
    if scene.is_projective:
        return total_chern_log_pn(scene.dim, scene.divisor_degrees())
    if scene.kind == "presented" and scene.tangent is not None:
        return log_chern_class(scene.ring, scene.tangent, scene.divisor_classes)
    raise SceneValidationError(
        "presented.tangent_class",
        "the scene has no way to compute c(T(-log D)); supply a tangent class",
    )


def chern_side(scene: Scene, phi: PhiSpec) -> Rational:
    if scene.supplied_chern_value is not None:
        return scene.supplied_chern_value
    if scene.ring is None:
        raise SceneValidationError(
            "chern.value", f"{scene.kind} scenes must supply the Chern-side value"
        )
    F = foliation_tangent(scene)
    return virtual_phi(phi, log_tangent_class(scene), F, scene.ring)


def _record(point: ScenePoint, report: ResidueReport) -> PointRecord:
    def fmt(x: Rational | None) -> str | None:
        return None if x is None else format_rational(x)

    return PointRecord(
        chart=point.chart,
        point=point.as_strings(),
        on_divisor=report.point.on_divisor,
        milnor=report.milnor,
        bb=format_rational(report.bb_phi),
        res_log=fmt(report.res_log_phi),
        ind_log=report.ind_log,
        res_log_det=fmt(report.res_log_det),
        contribution=format_rational(report.contribution),
        flags=list(report.flags),
    )


def _poincare(scene: Scene, phi: PhiSpec, total: Rational) -> PoincareRecord | None:
    if not scene.is_projective or scene.dim % 2 == 0 or not phi.is_c1_power():
        return None
    verdict = poincare_bound_check(
        scene.dim, sum(scene.divisor_degrees()), scene.degree, total
    )
    return PoincareRecord(
        n=verdict.n,
        deg_D=verdict.deg_D,
        deg_F=verdict.deg_F,
        total=format_rational(verdict.total),
        identity_value=format_rational(verdict.identity_value),
        identity_holds=verdict.identity_holds,
        hypothesis_met=verdict.hypothesis_met,
        status=verdict.status,
    )


def run_global(
    scene: Scene, phi: PhiSpec | str | None = None, settings: EngineSettings | None = None
) -> GlobalReport:
    """Sum of local residues against the Chern-side integral."""
    settings = settings or get_settings()
    phi = scene_phi(scene, phi)
    rows = compute_points(scene, phi, settings)
    local_total = sum((r.contribution for _, r in rows), QQ.zero)
    certificate = certify_completeness(scene, [r.milnor for _, r in rows])
    rhs = chern_side(scene, phi)
    difference = local_total - rhs
    verdict = "equal" if not difference else "mismatch"
    if verdict == "mismatch":
        status = "mismatch"
    else:
        status = "verified" if certificate.ok else "uncertified"
    report = GlobalReport(
        scene=scene.name,
        phi=str(phi),
        points=[_record(p, r) for p, r in rows],
        local_total=format_rational(local_total),
        chern_side=format_rational(rhs),
        difference=format_rational(difference),
        verdict=verdict,
        certificate=certificate,
        status=status,
        poincare=_poincare(scene, phi, local_total),
        warnings=list(scene.warnings),
    )
    logger.info(
        f"{scene.name}: local total {report.local_total}, Chern side {report.chern_side}, "
        f"{report.status}"
    )
    return report


def residue_at(
    scene: Scene,
    chart: int,
    coords: Sequence,
    phi: PhiSpec | str | None = None,
    settings: EngineSettings | None = None,
) -> PointRecord:
    """Local invariants at one point (need not be in the scene's list)."""
    settings = settings or get_settings()
    phi = scene_phi(scene, phi)
    values = tuple(to_rational(c) for c in coords)
    points = unique_points(scene)
    report = residue_in_chart(scene, phi, chart, values, points, settings)
    return _record(ScenePoint(chart, values), report)


def chern_report(scene: Scene, phi: PhiSpec | str | None = None) -> ChernReport:
    phi = scene_phi(scene, phi)
    if scene.ring is None:
        raise InputError(f"{scene.kind} scenes have no intersection ring")
    E = log_tangent_class(scene)
    F = foliation_tangent(scene)
    if F is None:
        raise InputError("the scene has no foliation class")
    virtual = virtual_classes(E, F)
    return ChernReport(
        scene=scene.name,
        ring=str(scene.ring),
        log_tangent=E.as_strings(),
        foliation_tangent=F.as_strings(),
        virtual=virtual.as_strings(),
        phi=str(phi),
        chern_side=format_rational(virtual_phi(phi, E, F, scene.ring)),
        expected_singularities=expected_count(scene),
    )


def _surface_numbers(scene: Scene) -> tuple[Rational | None, Rational | None]:
    """D^2 and (N_F - D).D, from the ring when there is one."""
    if scene.ring is None:
        return scene.ledger_divisor_square, scene.ledger_normal_dot_divisor
    ring = scene.ring
    if scene.is_projective:
        D = ring.gen(0).scale(sum(scene.divisor_degrees()))
    else:
        D = MPoly.zero(ring.ambient)
        for d in scene.divisor_classes:
            D = D + d
    F = foliation_tangent(scene)
    if scene.tangent is None or F is None:
        return ring.integrate(D * D), scene.ledger_normal_dot_divisor
    normal = scene.tangent.c(1) - F.c(1)
    return ring.integrate(D * D), ring.integrate((normal - D) * D)


def surface_ledger(scene: Scene, settings: EngineSettings | None = None) -> LedgerReport:
    """GSV, Camacho-Sad and BB - Res^log ledgers of a surface scene."""
    settings = settings or get_settings()
    if scene.dim != 2:
        raise InputError(f"surface ledgers need a surface scene, got dimension {scene.dim}")
    c1sq = PhiSpec.c1_power(2)
    c2 = PhiSpec.top(2)
    rows = compute_points(scene, c1sq, settings)
    points = [p for p, _ in rows]
    ledger_points = []
    records = []
    for point, report in rows:
        res_log_c2 = gsv = cs = None
        if report.point.on_divisor:
            data = chart_data(scene, point.chart)
            res_log_c2 = report.res_log_det
            branch = adapted_branch(data.field, data.divisor, point.coordinates)
            gsv = gsv_smooth(branch)
            cs = cs_smooth(branch)
        ledger_points.append(
            LedgerPoint(
                point.label,
                report.point.on_divisor,
                report.milnor,
                report.bb_phi,
                report.res_log_phi,
                res_log_c2,
                gsv,
                cs,
            )
        )
        records.append(
            LedgerPointRecord(
                chart=point.chart,
                point=point.as_strings(),
                on_divisor=report.point.on_divisor,
                milnor=report.milnor,
                bb=format_rational(report.bb_phi),
                res_log=None if report.res_log_phi is None else format_rational(report.res_log_phi),
                res_log_c2=None if res_log_c2 is None else format_rational(res_log_c2),
                gsv=gsv,
                cs=None if cs is None else format_rational(cs),
            )
        )
    divisor_square, normal_dot_divisor = _surface_numbers(scene)
    c2_side = None
    F = foliation_tangent(scene)
    has_log_tangent = scene.is_projective or scene.tangent is not None
    if F is not None and (has_log_tangent or scene.supplied_log_tangent is not None):
        c2_side = virtual_phi(c2, log_tangent_class(scene), F, scene.ring)
    totals = ledger_totals(ledger_points, divisor_square, normal_dot_divisor, c2_side)
    nonnegative = all(
        p.gsv_from_residues is None or p.gsv_from_residues >= 0 for p in ledger_points
    )
    logger.debug(f"surface ledger over {len(points)} points")

    def fmt(x: Rational | None) -> str | None:
        return None if x is None else format_rational(x)

    return LedgerReport(
        scene=scene.name,
        points=records,
        bb=format_rational(totals.bb),
        res_log=format_rational(totals.res_log),
        gsv=totals.gsv,
        cs=format_rational(totals.cs),
        divisor_square=fmt(totals.divisor_square),
        normal_dot_divisor=fmt(totals.normal_dot_divisor),
        camacho_sad_holds=totals.camacho_sad_holds,
        brunella_holds=totals.brunella_holds,
        ledger_lhs=format_rational(totals.ledger_lhs),
        ledger_rhs=format_rational(totals.ledger_rhs),
        ledger_holds=totals.ledger_holds,
        gsv_nonnegative=nonnegative,
        milnor_off_divisor=totals.milnor_off_divisor,
        res_log_c2=format_rational(totals.res_log_c2),
        c2_chern_side=fmt(totals.c2_chern_side),
        milnor_ledger_holds=totals.milnor_ledger_holds,
    )
