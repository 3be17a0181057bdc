"""Scenes: TOML input, the chart atlas and the global residue check."""

from logbb.scene.atlas import chart_restrict, check_chart_compatibility, unique_points
from logbb.scene.model import Scene, ScenePoint, build_scene, load_scene, parse_scene_file
from logbb.scene.verify import (
    certify_completeness,
    chern_report,
    chern_side,
    residue_at,
    run_global,
    surface_ledger,
)

__all__ = [
    "Scene",
    "ScenePoint",
    "build_scene",
    "certify_completeness",
    "chart_restrict",
    "check_chart_compatibility",
    "chern_report",
    "chern_side",
    "load_scene",
    "parse_scene_file",
    "residue_at",
    "run_global",
    "surface_ledger",
    "unique_points",
]
