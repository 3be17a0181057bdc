"""Scene files: TOML schema, validation and the in-memory ``Scene``.

A scene is one of

* ``projective``: P^n with homogeneous coordinates z0..zn, a foliation given
  by homogeneous F_0..F_n (or explicit per-chart fields), a divisor of
  homogeneous components;
* ``presented``: a surface (or higher) given by a presented intersection
  ring plus explicit per-chart affine fields;
* ``affine``: a single chart, used for local experiments.
"""

import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from logbb.algebra.parser import parse_poly
from logbb.algebra.poly import Ambient, MPoly, Rational, format_rational, to_rational
from logbb.chern import (
    CohomologyRing,
    Presentation,
    TotalClass,
    foliation_tangent_pn,
    ring_pn,
    ring_presented,
    tangent_pn,
)
from logbb.errors import InputError, LogbbError, SceneValidationError
from logbb.foliation import (
    Divisor,
    SaitoBasis,
    VectorField,
    normal_crossing_basis,
    verify_saito,
)
from logbb.residues import PhiSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

Number = str | int


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpaceSection(_Section):
    kind: Literal["projective", "presented", "affine"]
    dim: int = Field(ge=1)


class SaitoSection(_Section):
    chart: int = 0
    matrix: list[list[str]]


class DivisorSection(_Section):
    components: list[str] = Field(default_factory=list)
    saito: list[SaitoSection] = Field(default_factory=list)


class ChartSection(_Section):
    chart: int = Field(ge=0)
    variables: list[str] | None = None
    field: list[str]
    divisor: list[str] = Field(default_factory=list)
    saito: list[list[str]] | None = None


class FoliationSection(_Section):
    homogeneous: list[str] | None = None
    charts: list[ChartSection] = Field(default_factory=list)
    degree: int | None = Field(default=None, ge=0)


class SingularitySection(_Section):
    chart: int = Field(default=0, ge=0)
    point: list[Number]
    label: str | None = None


class PhiSection(_Section):
    expr: str


class ChernSection(_Section):
    total_log_tangent: list[str] | None = None
    value: Number | None = None


class PresentedSection(_Section):
    generators: list[str]
    degrees: list[int]
    relations: list[str]
    integral_monomial: str
    integral_value: Number = 1
    tangent_class: list[str] | None = None
    divisor_classes: list[str] = Field(default_factory=list)
    foliation_class: str = "0"


class LedgerSection(_Section):
    divisor_square: Number | None = None
    normal_dot_divisor: Number | None = None


class SceneFile(_Section):
    name: str = ""
    description: str = ""
    space: SpaceSection
    divisor: DivisorSection = Field(default_factory=DivisorSection)
    foliation: FoliationSection
    singularities: list[SingularitySection] = Field(default_factory=list)
    phi: PhiSection | None = None
    chern: ChernSection = Field(default_factory=ChernSection)
    presented: PresentedSection | None = None
    ledger: LedgerSection = Field(default_factory=LedgerSection)
    expected_singularities: int | None = Field(default=None, ge=0)


@dataclass(frozen=True)
class ChartData:
    """One affine chart: its field, divisor and Saito basis."""

    index: int
    field: VectorField
    divisor: Divisor
    basis: SaitoBasis

    @property
    def ambient(self) -> Ambient:
        return self.field.ambient


@dataclass(frozen=True)
class ScenePoint:
    chart: int
    coordinates: tuple[Rational, ...]
    label: str = ""
    source_index: int = 0

    def key(self) -> tuple:
        return (self.chart, tuple(self.coordinates))

    def as_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coordinates]


@dataclass
class Scene:
    name: str
    kind: str
    dim: int
    phi: PhiSpec | None
    degree: int | None
    homogeneous_ambient: Ambient | None
    divisor_components: tuple[MPoly, ...]
    homogeneous: tuple[MPoly, ...] | None
    explicit_charts: dict[int, ChartData]
    points: list[ScenePoint]
    ring: CohomologyRing | None = None
    tangent: TotalClass | None = None
    divisor_classes: tuple[MPoly, ...] = ()
    foliation_class: MPoly | None = None
    supplied_log_tangent: TotalClass | None = None
    supplied_chern_value: Rational | None = None
    saito_overrides: dict[int, tuple[tuple[str, ...], ...]] = field(default_factory=dict)
    ledger_divisor_square: Rational | None = None
    ledger_normal_dot_divisor: Rational | None = None
    declared_expected: int | None = None
    warnings: list[str] = field(default_factory=list)
    source: Path | None = None

    @property
    def is_projective(self) -> bool:
        return self.kind == "projective"

    @cached_property
    def chart_cache(self) -> dict[int, ChartData]:
        return dict(self.explicit_charts)

    def divisor_degrees(self) -> list[int]:
        return [c.total_degree() for c in self.divisor_components]


def projective_chart_ambient(n: int, chart: int) -> Ambient:
    """Chart z_j = 1 of P^n uses the coordinates x_k for k != j."""
    return Ambient(tuple(f"x{k}" for k in range(n + 1) if k != chart))


def homogeneous_ambient(n: int) -> Ambient:
    return Ambient(tuple(f"z{k}" for k in range(n + 1)))


def _parse(text: str, ambient: Ambient, path: str) -> MPoly:
    try:
        return parse_poly(text, ambient)
    except LogbbError as exc:
        raise SceneValidationError(path, str(exc)) from exc


def _location(loc: Sequence[Any]) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out


def parse_scene_file(data: dict) -> SceneFile:
    try:
        return SceneFile.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SceneValidationError(_location(first["loc"]), first["msg"]) from exc


def build_basis(divisor: Divisor, rows: Sequence[Sequence[str]] | None, path: str) -> SaitoBasis:
    if rows is None:
        return normal_crossing_basis(divisor)
    ambient = divisor.ambient
    matrix = [
        [_parse(entry, ambient, f"{path}[{i}][{j}]") for j, entry in enumerate(row)]
        for i, row in enumerate(rows)
    ]
    return verify_saito(matrix, divisor)


def _explicit_chart(
    section: ChartSection, index: int, n: int, kind: str, divisor_override: tuple[MPoly, ...] | None
) -> ChartData:
    path = f"foliation.charts[{index}]"
    if kind == "projective":
        ambient = projective_chart_ambient(n, section.chart)
        if section.variables is not None and tuple(section.variables) != ambient.names:
            raise SceneValidationError(
                f"{path}.variables", f"projective chart {section.chart} uses {list(ambient.names)}"
            )
    else:
        names = section.variables or [f"x{k}" for k in range(1, n + 1)]
        ambient = Ambient.of(names)
    if ambient.arity != n:
        raise SceneValidationError(f"{path}.variables", f"expected {n} variables")
    if len(section.field) != n:
        raise SceneValidationError(f"{path}.field", f"expected {n} components")
    components = tuple(
        _parse(text, ambient, f"{path}.field[{k}]") for k, text in enumerate(section.field)
    )
    if divisor_override is not None:
        div_components = divisor_override
    else:
        div_components = tuple(
            _parse(text, ambient, f"{path}.divisor[{k}]")
            for k, text in enumerate(section.divisor)
        )
    try:
        divisor = Divisor(ambient, div_components)
        basis = build_basis(divisor, section.saito, f"{path}.saito")
    except SceneValidationError:
        raise
    except InputError as exc:
        raise SceneValidationError(f"{path}.divisor", str(exc)) from exc
    return ChartData(section.chart, VectorField(ambient, components), divisor, basis)


def build_scene(raw: SceneFile, source: Path | None = None) -> Scene:
    """Turn the validated schema into a ``Scene`` and check its invariants."""
    n = raw.space.dim
    kind = raw.space.kind
    name = raw.name or (source.stem if source else "scene")
    warnings: list[str] = []

    phi = None
    if raw.phi is not None:
        try:
            phi = PhiSpec.parse(raw.phi.expr, n)
        except LogbbError as exc:
            raise SceneValidationError("phi.expr", str(exc)) from exc

    h_ambient = homogeneous_ambient(n) if kind == "projective" else None
    divisor_components: tuple[MPoly, ...] = ()
    homogeneous = None
    degree = raw.foliation.degree

    if kind == "projective":
        divisor_components = tuple(
            _parse(text, h_ambient, f"divisor.components[{k}]")
            for k, text in enumerate(raw.divisor.components)
        )
        for k, c in enumerate(divisor_components):
            if not c.is_homogeneous() or c.is_constant():
                raise SceneValidationError(
                    f"divisor.components[{k}]", f"{c} is not a homogeneous form"
                )
        try:
            Divisor(h_ambient, divisor_components)
        except InputError as exc:
            raise SceneValidationError("divisor.components", str(exc)) from exc
        if raw.foliation.homogeneous is not None:
            if raw.foliation.charts:
                raise SceneValidationError(
                    "foliation", "give either homogeneous components or per-chart fields"
                )
            if len(raw.foliation.homogeneous) != n + 1:
                raise SceneValidationError(
                    "foliation.homogeneous", f"expected {n + 1} components"
                )
            homogeneous = tuple(
                _parse(text, h_ambient, f"foliation.homogeneous[{k}]")
                for k, text in enumerate(raw.foliation.homogeneous)
            )
            degrees = {F.total_degree() for F in homogeneous if F}
            for k, F in enumerate(homogeneous):
                if not F.is_homogeneous():
                    raise SceneValidationError(
                        f"foliation.homogeneous[{k}]", f"{F} is not homogeneous"
                    )
            if len(degrees) != 1:
                raise SceneValidationError(
                    "foliation.homogeneous",
                    f"components have different degrees {sorted(degrees)}",
                )
            field_degree = degrees.pop()
            if degree is None:
                degree = field_degree
            elif degree != field_degree:
                message = (
                    f"declared degree {degree} differs from the degree {field_degree} "
                    "of the homogeneous components; the declared degree is used"
                )
                logger.warning(message)
                warnings.append(message)
        elif not raw.foliation.charts:
            raise SceneValidationError("foliation", "no foliation data")
        elif degree is None:
            raise SceneValidationError(
                "foliation.degree", "per-chart projective scenes must declare the degree"
            )
    elif raw.foliation.homogeneous is not None:
        raise SceneValidationError(
            "foliation.homogeneous", f"{kind} scenes take per-chart fields"
        )
    elif not raw.foliation.charts:
        raise SceneValidationError("foliation.charts", "no chart fields given")

    saito_overrides = {s.chart: tuple(tuple(r) for r in s.matrix) for s in raw.divisor.saito}

    explicit: dict[int, ChartData] = {}
    for index, section in enumerate(raw.foliation.charts):
        if section.chart in explicit:
            raise SceneValidationError(
                f"foliation.charts[{index}].chart", f"chart {section.chart} given twice"
            )
        if kind == "projective" and section.chart > n:
            raise SceneValidationError(
                f"foliation.charts[{index}].chart", f"P^{n} has charts 0..{n}"
            )
        if kind == "affine" and section.chart != 0:
            raise SceneValidationError(
                f"foliation.charts[{index}].chart", "affine scenes have the single chart 0"
            )
        override = None
        if kind == "projective":
            ambient = projective_chart_ambient(n, section.chart)
            override = dehomogenize_divisor(divisor_components, section.chart, ambient)
            if section.saito is None and section.chart in saito_overrides:
                section = section.model_copy(update={"saito": saito_overrides[section.chart]})
        explicit[section.chart] = _explicit_chart(section, index, n, kind, override)

    ring = tangent = supplied = None
    divisor_classes: tuple[MPoly, ...] = ()
    foliation_class = None
    if kind == "projective":
        ring = ring_pn(n)
        tangent = tangent_pn(n)
    elif kind == "presented":
        if raw.presented is None:
            raise SceneValidationError("presented", "presented scenes need a [presented] block")
        block = raw.presented
        try:
            ring = ring_presented(
                Presentation(
                    tuple(block.generators),
                    tuple(block.degrees),
                    tuple(block.relations),
                    block.integral_monomial,
                    to_rational(block.integral_value),
                )
            )
        except LogbbError as exc:
            raise SceneValidationError("presented", str(exc)) from exc
        if ring.top != n:
            raise SceneValidationError(
                "presented.integral_monomial", f"top degree {ring.top} is not dim = {n}"
            )
        try:
            if block.tangent_class is not None:
                tangent = TotalClass.parse(ring, block.tangent_class)
            divisor_classes = tuple(ring.parse(t) for t in block.divisor_classes)
            foliation_class = ring.parse(block.foliation_class)
        except LogbbError as exc:
            raise SceneValidationError("presented", str(exc)) from exc
    if raw.chern.total_log_tangent is not None:
        if ring is None:
            raise SceneValidationError(
                "chern.total_log_tangent", "affine scenes have no intersection ring"
            )
        try:
            supplied = TotalClass.parse(ring, raw.chern.total_log_tangent)
        except LogbbError as exc:
            raise SceneValidationError("chern.total_log_tangent", str(exc)) from exc
    supplied_value = None
    if raw.chern.value is not None:
        try:
            supplied_value = to_rational(raw.chern.value)
        except InputError as exc:
            raise SceneValidationError("chern.value", str(exc)) from exc

    points = []
    for index, entry in enumerate(raw.singularities):
        path = f"singularities[{index}]"
        try:
            coords = tuple(to_rational(c) for c in entry.point)
        except InputError as exc:
            raise SceneValidationError(f"{path}.point", str(exc)) from exc
        if len(coords) != n:
            raise SceneValidationError(f"{path}.point", f"expected {n} coordinates")
        if kind == "projective":
            if entry.chart > n:
                raise SceneValidationError(f"{path}.chart", f"P^{n} has charts 0..{n}")
        elif entry.chart not in explicit:
            raise SceneValidationError(f"{path}.chart", f"no field for chart {entry.chart}")
        label = entry.label or f"p{index + 1}"
        points.append(ScenePoint(entry.chart, coords, label, index))

    ledger = raw.ledger
    scene = Scene(
        name=name,
        kind=kind,
        dim=n,
        phi=phi,
        degree=degree,
        homogeneous_ambient=h_ambient,
        divisor_components=divisor_components,
        homogeneous=homogeneous,
        explicit_charts=explicit,
        points=points,
        ring=ring,
        tangent=tangent,
        divisor_classes=divisor_classes,
        foliation_class=foliation_class,
        supplied_log_tangent=supplied,
        supplied_chern_value=supplied_value,
        saito_overrides=saito_overrides,
        ledger_divisor_square=(
            None if ledger.divisor_square is None else to_rational(ledger.divisor_square)
        ),
        ledger_normal_dot_divisor=(
            None
            if ledger.normal_dot_divisor is None
            else to_rational(ledger.normal_dot_divisor)
        ),
        declared_expected=raw.expected_singularities,
        warnings=warnings,
        source=source,
    )
    return scene


def dehomogenize(F: MPoly, chart: int, ambient: Ambient) -> MPoly:
    """F(x_0, ..., 1, ..., x_n) with the 1 in position ``chart``."""
    images = []
    k = 0
    for i in range(F.ambient.arity):
        if i == chart:
            images.append(MPoly.one(ambient))
        else:
            images.append(MPoly.variable(ambient, k))
            k += 1
    return F.substitute(images, ambient)


def dehomogenize_divisor(
    components: Sequence[MPoly], chart: int, ambient: Ambient
) -> tuple[MPoly, ...]:
    """Affine divisor components in a chart; components that become units drop out."""
    out = []
    for c in components:
        affine = dehomogenize(c, chart, ambient)
        if not affine.is_constant():
            out.append(affine)
    return tuple(out)


def load_scene(path: str | Path) -> Scene:
    """Read, validate and build a scene file."""
    from logbb.scene.atlas import validate_points

    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise InputError(f"scene file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise SceneValidationError("", f"{path}: {exc}") from exc
    scene = build_scene(parse_scene_file(data), path)
    validate_points(scene)
    logger.info(f"Loaded scene {scene.name} ({scene.kind}, dim {scene.dim})")
    return scene


def homogeneous_coordinates(chart: int, coords: Sequence) -> tuple[Rational, ...]:
    values = [to_rational(c) for c in coords]
    values.insert(chart, to_rational(1))
    return tuple(values)


def normalized_key(values: Sequence[Rational]) -> tuple[Rational, ...]:
    """Projective point with the first nonzero coordinate scaled to 1."""
    lead = next(v for v in values if v)
    return tuple(v / lead for v in values)


def chart_coordinates(values: Sequence[Rational], chart: int) -> tuple[Rational, ...] | None:
    """Affine coordinates of a projective point in a chart, or None off the chart."""
    pivot = values[chart]
    if not pivot:
        return None
    return tuple(v / pivot for k, v in enumerate(values) if k != chart)


def foliation_tangent(scene: Scene) -> TotalClass | None:
    if scene.is_projective:
        return foliation_tangent_pn(scene.dim, scene.degree)
    if scene.kind == "presented" and scene.foliation_class is not None:
        return TotalClass.line(scene.ring, scene.foliation_class)
    return None
