"""Charts of a scene: restriction, point bookkeeping and compatibility checks."""

import logging
import random
from collections.abc import Sequence
from itertools import permutations

from sympy import QQ

from logbb.algebra.poly import MPoly, Rational, format_rational
from logbb.app_utils.config import EngineSettings, get_settings
from logbb.errors import DegenerateChart, InputError, SceneValidationError
from logbb.foliation import Divisor, VectorField
from logbb.scene.model import (
    ChartData,
    Scene,
    ScenePoint,
    build_basis,
    chart_coordinates,
    dehomogenize,
    dehomogenize_divisor,
    homogeneous_coordinates,
    normalized_key,
    projective_chart_ambient,
)

logger = logging.getLogger(__name__)


def chart_restrict(scene: Scene, chart: int) -> tuple[VectorField, Divisor]:
    """Affine field and divisor of a chart.

    For homogeneous F the chart z_j = 1 carries v_k = F_k - x_k F_j (k != j),
    everything evaluated at z_j = 1.
    """
    data = chart_data(scene, chart)
    return data.field, data.divisor


def chart_data(scene: Scene, chart: int) -> ChartData:
    cache = scene.chart_cache
    if chart in cache:
        return cache[chart]
    if not scene.is_projective or scene.homogeneous is None:
        raise InputError(f"scene {scene.name} has no field for chart {chart}")
    if not 0 <= chart <= scene.dim:
        raise InputError(f"P^{scene.dim} has charts 0..{scene.dim}, not {chart}")
    ambient = projective_chart_ambient(scene.dim, chart)
    F = [dehomogenize(Fk, chart, ambient) for Fk in scene.homogeneous]
    components = []
    k = 0
    for i in range(scene.dim + 1):
        if i == chart:
            continue
        components.append(F[i] - MPoly.variable(ambient, k) * F[chart])
        k += 1
    field = VectorField(ambient, tuple(components))
    if field.is_zero():
        raise DegenerateChart(
            f"the foliation restricts to the zero field on chart {chart}; "
            "the homogeneous components are a multiple of the radial field there"
        )
    divisor = Divisor(
        ambient, dehomogenize_divisor(scene.divisor_components, chart, ambient)
    )
    rows = scene.saito_overrides.get(chart)
    basis = build_basis(divisor, rows, f"divisor.saito[chart {chart}]")
    data = ChartData(chart, field, divisor, basis)
    cache[chart] = data
    logger.debug(f"chart {chart}: {field}")
    return data


def projective_key(scene: Scene, point: ScenePoint) -> tuple:
    if scene.is_projective:
        return normalized_key(homogeneous_coordinates(point.chart, point.coordinates))
    return point.key()


def validate_points(scene: Scene) -> None:
    """Every supplied point must be a zero of its chart field."""
    for point in scene.points:
        path = f"singularities[{point.source_index}]"
        try:
            field, _ = chart_restrict(scene, point.chart)
        except DegenerateChart:
            raise
        except InputError as exc:
            raise SceneValidationError(f"{path}.chart", str(exc)) from exc
        if not field.vanishes_at(point.coordinates):
            raise SceneValidationError(
                f"{path}.point",
                f"({', '.join(point.as_strings())}) is not a zero of the chart "
                f"{point.chart} field",
            )
    if scene.is_projective and scene.homogeneous is None:
        check_chart_compatibility(scene)


def unique_points(scene: Scene) -> list[ScenePoint]:
    """Supplied points sorted by (chart, coordinates), one per projective point."""
    seen: dict[tuple, ScenePoint] = {}
    for point in sorted(scene.points, key=lambda p: p.key()):
        key = projective_key(scene, point)
        if key in seen:
            message = (
                f"{point.label} duplicates {seen[key].label}; counted once"
            )
            logger.warning(message)
            if message not in scene.warnings:
                scene.warnings.append(message)
            continue
        seen[key] = point
    return list(seen.values())


def charts_containing(scene: Scene, point: ScenePoint) -> list[int]:
    """Other charts in which the point can be recomputed."""
    if not scene.is_projective:
        return []
    values = homogeneous_coordinates(point.chart, point.coordinates)
    available = (
        range(scene.dim + 1) if scene.homogeneous is not None else scene.explicit_charts
    )
    return [k for k in available if k != point.chart and values[k]]


def in_chart(point: ScenePoint, chart: int) -> tuple[Rational, ...] | None:
    """Coordinates of a projective point in another chart (None off that chart)."""
    if chart == point.chart:
        return point.coordinates
    return chart_coordinates(homogeneous_coordinates(point.chart, point.coordinates), chart)


def zeros_in_chart(scene: Scene, chart: int, points: Sequence[ScenePoint]) -> list[tuple]:
    out = []
    for p in points:
        if scene.is_projective:
            coords = in_chart(p, chart)
        else:
            coords = p.coordinates if p.chart == chart else None
        if coords is not None:
            out.append(coords)
    return out


def _pushforward(
    source: int, target: int, values: Sequence[Rational], vector: Sequence[Rational]
) -> list[Rational]:
    """Image of a chart-``source`` tangent vector in chart ``target``."""
    dZ = list(vector)
    dZ.insert(source, QQ.zero)
    pivot, dpivot = values[target], dZ[target]
    return [
        (dZ[k] * pivot - values[k] * dpivot) / (pivot * pivot)
        for k in range(len(values))
        if k != target
    ]


def _parallel(a: Sequence[Rational], b: Sequence[Rational]) -> bool:
    if any(a) != any(b):
        return False
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def check_chart_compatibility(scene: Scene, settings: EngineSettings | None = None) -> None:
    """Spot-check that explicit chart fields define one foliation.

    At seeded random points of each overlap the pushforward of v_a must be
    parallel to v_b: v_a = g_ab v_b with g_ab a unit on the overlap.
    """
    settings = settings or get_settings()
    rng = random.Random(settings.compat_seed)
    charts = scene.explicit_charts
    for a, b in permutations(sorted(charts), 2):
        checked = 0
        attempts = 0
        while checked < settings.compat_samples and attempts < 50 * max(settings.compat_samples, 1):
            attempts += 1
            x = tuple(QQ(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(scene.dim))
            values = homogeneous_coordinates(a, x)
            if not values[b]:
                continue
            y = chart_coordinates(values, b)
            pushed = _pushforward(a, b, values, charts[a].field.eval(x))
            direct = charts[b].field.eval(y)
            if not _parallel(pushed, direct):
                raise SceneValidationError(
                    "foliation.charts",
                    f"chart {a} and chart {b} fields disagree at "
                    f"({', '.join(format_rational(c) for c in x)}) in chart {a}",
                )
            checked += 1
        logger.debug(f"charts {a}/{b}: {checked} compatibility samples agree")
