"""Scene configuration: strict JSON schema for bench descriptions.

A scene names exactly one input mode (eps value, preparation plate
angles, or a ball point), the element list of each interferometer arm,
and optional grid/tilt/photon/sweep settings.  Unknown keys are
rejected; angles are degrees in the file and radians everywhere else.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import SpinOrbitState, TransverseGrid, epsilon_state
from .errors import ParseError, SchemaError
from .optics import (
    RetarderSpec,
    double_pass_arm,
    double_pass_spec,
    hwp,
    hwp_spec,
    polarizer,
    prepare_stage,
    qwp,
    qwp_spec,
)
from .topology import SpherePoint, mns_from_point

ELEMENT_TYPES = ("hwp", "qwp", "qwp-double", "polarizer")


@dataclass(frozen=True)
class ElementConfig:
    type: str
    angle_deg: float = 0.0
    axis: str = ""


@dataclass(frozen=True)
class InputConfig:
    """Exactly one of the three input descriptions is populated."""

    eps: float = None
    theta_a_deg: float = None
    theta_b_deg: float = None
    point_a_deg: float = None
    point_k: tuple = None


@dataclass(frozen=True)
class PhotonConfig:
    n_total: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class SceneConfig:
    input: InputConfig
    arm1: tuple
    arm2: tuple
    grid: TransverseGrid
    tilt: float = None  # None = default 8*pi / full grid width
    arm_phase_rad: float = 0.0
    photon: PhotonConfig = PhotonConfig()
    sweep_theta_deg: tuple = None
    basename: str = None

    def resolved_tilt(self) -> float:
        from .interferometer import default_tilt

        return default_tilt(self.grid) if self.tilt is None else self.tilt

    def with_grid(self, nx: int, ny: int) -> "SceneConfig":
        return replace(self, grid=replace(self.grid, nx=nx, ny=ny))

    def with_seed(self, seed: int) -> "SceneConfig":
        return replace(self, photon=replace(self.photon, seed=seed))


def _require_keys(obj: dict, allowed, context: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"unknown key {key!r} in {context}")


def _number(obj, key, context, default=None, required=False):
    if key not in obj:
        if required:
            raise SchemaError(f"missing key {key!r} in {context}")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SchemaError(f"key {key!r} in {context} must be a finite number")
    return float(value)


def _parse_element(obj, context) -> ElementConfig:
    if not isinstance(obj, dict):
        raise SchemaError(f"{context} must be an object")
    kind = obj.get("type")
    if kind not in ELEMENT_TYPES:
        raise SchemaError(f"unknown element type {kind!r} in {context}")
    if kind == "polarizer":
        _require_keys(obj, {"type", "axis"}, context)
        axis = obj.get("axis")
        if axis not in ("H", "V"):
            raise SchemaError(f"polarizer axis must be 'H' or 'V' in {context}")
        return ElementConfig(type=kind, axis=axis)
    _require_keys(obj, {"type", "angle_deg"}, context)
    angle = _number(obj, "angle_deg", context, required=True)
    return ElementConfig(type=kind, angle_deg=angle)


def _parse_input(obj) -> InputConfig:
    if not isinstance(obj, dict):
        raise SchemaError("'input' must be an object")
    _require_keys(obj, {"eps", "hwp_deg", "point"}, "'input'")
    given = [k for k in ("eps", "hwp_deg", "point") if k in obj]
    if len(given) != 1:
        raise SchemaError(f"exactly one input kind required, got {given!r}")
    if "eps" in obj:
        return InputConfig(eps=_number(obj, "eps", "'input'", required=True))
    if "hwp_deg" in obj:
        sub = obj["hwp_deg"]
        if not isinstance(sub, dict):
            raise SchemaError("'input.hwp_deg' must be an object")
        _require_keys(sub, {"theta_a", "theta_b"}, "'input.hwp_deg'")
        return InputConfig(
            theta_a_deg=_number(sub, "theta_a", "'input.hwp_deg'", required=True),
            theta_b_deg=_number(sub, "theta_b", "'input.hwp_deg'", required=True),
        )
    sub = obj["point"]
    if not isinstance(sub, dict):
        raise SchemaError("'input.point' must be an object")
    _require_keys(sub, {"a_deg", "k"}, "'input.point'")
    a_deg = _number(sub, "a_deg", "'input.point'", required=True)
    k = sub.get("k")
    if not isinstance(k, list) or len(k) != 3:
        raise SchemaError("'input.point.k' must be a 3-element list")
    for comp in k:
        if isinstance(comp, bool) or not isinstance(comp, (int, float)) or not math.isfinite(comp):
            raise SchemaError("'input.point.k' components must be finite numbers")
    return InputConfig(point_a_deg=a_deg, point_k=tuple(float(c) for c in k))


def parse_scene(text: str) -> SceneConfig:
    """Parse and validate a scene document.

    Raises ParseError (with position) for malformed JSON and SchemaError
    naming the offending key for schema violations.  Defaults are
    applied only for the grid and the tilt.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise SchemaError("scene document must be a JSON object")
    _require_keys(
        doc,
        {"input", "arms", "grid", "tilt_rad", "arm_phase_rad", "photon", "sweep", "outputs"},
        "scene",
    )
    for key in ("input", "arms"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r} in scene")

    input_cfg = _parse_input(doc["input"])

    arms = doc["arms"]
    if not isinstance(arms, dict):
        raise SchemaError("'arms' must be an object")
    _require_keys(arms, {"arm1", "arm2"}, "'arms'")
    parsed_arms = {}
    for name in ("arm1", "arm2"):
        seq = arms.get(name)
        if not isinstance(seq, list):
            raise SchemaError(f"missing or non-list {name!r} in 'arms'")
        parsed_arms[name] = tuple(
            _parse_element(el, f"'arms.{name}[{i}]'") for i, el in enumerate(seq)
        )

    grid_obj = doc.get("grid", {})
    if not isinstance(grid_obj, dict):
        raise SchemaError("'grid' must be an object")
    _require_keys(grid_obj, {"nx", "ny", "extent", "waist"}, "'grid'")
    try:
        grid = TransverseGrid(
            nx=int(_number(grid_obj, "nx", "'grid'", default=256)),
            ny=int(_number(grid_obj, "ny", "'grid'", default=256)),
            extent=_number(grid_obj, "extent", "'grid'", default=5.0),
            waist=_number(grid_obj, "waist", "'grid'", default=1.0),
        )
    except ValueError as exc:
        raise SchemaError(f"invalid 'grid': {exc}") from exc

    tilt = _number(doc, "tilt_rad", "scene", default=None)
    arm_phase = _number(doc, "arm_phase_rad", "scene", default=0.0)

    photon_obj = doc.get("photon", {})
    if not isinstance(photon_obj, dict):
        raise SchemaError("'photon' must be an object")
    _require_keys(photon_obj, {"n_total", "seed"}, "'photon'")
    photon = PhotonConfig(
        n_total=int(_number(photon_obj, "n_total", "'photon'", default=100_000)),
        seed=int(_number(photon_obj, "seed", "'photon'", default=0)),
    )
    if photon.n_total < 1:
        raise SchemaError("'photon.n_total' must be at least 1")

    sweep = None
    if "sweep" in doc:
        sweep_obj = doc["sweep"]
        if not isinstance(sweep_obj, dict):
            raise SchemaError("'sweep' must be an object")
        _require_keys(sweep_obj, {"theta_deg"}, "'sweep'")
        thetas = sweep_obj.get("theta_deg")
        if not isinstance(thetas, list) or not thetas:
            raise SchemaError("'sweep.theta_deg' must be a nonempty list")
        for value in thetas:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise SchemaError("'sweep.theta_deg' entries must be finite numbers")
        sweep = tuple(float(v) for v in thetas)

    basename = None
    if "outputs" in doc:
        outputs = doc["outputs"]
        if not isinstance(outputs, dict):
            raise SchemaError("'outputs' must be an object")
        _require_keys(outputs, {"basename"}, "'outputs'")
        basename = outputs.get("basename")
        if basename is not None and not isinstance(basename, str):
            raise SchemaError("'outputs.basename' must be a string")

    return SceneConfig(
        input=input_cfg,
        arm1=parsed_arms["arm1"],
        arm2=parsed_arms["arm2"],
        grid=grid,
        tilt=tilt,
        arm_phase_rad=arm_phase,
        photon=photon,
        sweep_theta_deg=sweep,
        basename=basename,
    )


def serialize_scene(config: SceneConfig) -> str:
    """Emit a scene document that parses back to an equal SceneConfig."""
    doc = {}
    inp = config.input
    if inp.eps is not None:
        doc["input"] = {"eps": inp.eps}
    elif inp.theta_a_deg is not None:
        doc["input"] = {"hwp_deg": {"theta_a": inp.theta_a_deg, "theta_b": inp.theta_b_deg}}
    else:
        doc["input"] = {"point": {"a_deg": inp.point_a_deg, "k": list(inp.point_k)}}
    doc["arms"] = {
        name: [
            {"type": el.type, "axis": el.axis}
            if el.type == "polarizer"
            else {"type": el.type, "angle_deg": el.angle_deg}
            for el in arm
        ]
        for name, arm in (("arm1", config.arm1), ("arm2", config.arm2))
    }
    doc["grid"] = {
        "nx": config.grid.nx,
        "ny": config.grid.ny,
        "extent": config.grid.extent,
        "waist": config.grid.waist,
    }
    if config.tilt is not None:
        doc["tilt_rad"] = config.tilt
    doc["arm_phase_rad"] = config.arm_phase_rad
    doc["photon"] = {"n_total": config.photon.n_total, "seed": config.photon.seed}
    if config.sweep_theta_deg is not None:
        doc["sweep"] = {"theta_deg": list(config.sweep_theta_deg)}
    if config.basename is not None:
        doc["outputs"] = {"basename": config.basename}
    return json.dumps(doc, indent=2) + "\n"


def state_from_config(config: SceneConfig) -> SpinOrbitState:
    """Build the input mode a scene describes."""
    inp = config.input
    if inp.eps is not None:
        return epsilon_state(inp.eps)
    if inp.theta_a_deg is not None:
        return prepare_stage(np.deg2rad(inp.theta_a_deg), np.deg2rad(inp.theta_b_deg))
    k = np.asarray(inp.point_k, dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0.0:
        raise SchemaError("'input.point.k' must be a nonzero vector")
    k = k / norm
    point = SpherePoint(a=float(np.deg2rad(inp.point_a_deg)), k=tuple(k))
    return mns_from_point(point)


def element_matrix(element: ElementConfig) -> np.ndarray:
    """Jones matrix of one configured element."""
    theta = np.deg2rad(element.angle_deg)
    if element.type == "hwp":
        return hwp(theta)
    if element.type == "qwp":
        return qwp(theta)
    if element.type == "qwp-double":
        return double_pass_arm(theta)
    return polarizer(element.axis)


def element_retarder_spec(element: ElementConfig) -> RetarderSpec:
    """Ramp descriptor of one configured element; polarizers cannot be ramped."""
    theta = np.deg2rad(element.angle_deg)
    if element.type == "hwp":
        return hwp_spec(theta)
    if element.type == "qwp":
        return qwp_spec(theta)
    if element.type == "qwp-double":
        return double_pass_spec(theta)
    raise SchemaError("polarizers have no retardance to ramp; remove them to lift the path")


def arm_matrices(config: SceneConfig):
    """Total Jones matrix of each configured arm (identity for an empty arm)."""
    out = []
    for arm in (config.arm1, config.arm2):
        total = np.eye(2, dtype=complex)
        for element in arm:
            total = element_matrix(element) @ total
        out.append(total)
    return out[0], out[1]
