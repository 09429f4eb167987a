"""Scenario configuration: parse, emit, and build.

The format is flat ``key = value`` lines with repeated ``[segment]``
sections and an optional ``[path]`` section.  Function-valued entries
use a small value grammar::

    const:v          constant v
    affine:a,b       a*t + b
    samples:v0,v1,.. explicit per-point values
    inf / -inf       unbounded side
    v0,v1,..         bare coordinate list (Hilbert centers and paths)

Numbers are parsed as full-precision decimals.  A scenario emitted by
:func:`emit_config` re-parses to an equal :class:`Scenario`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .extension import ExtensionOperator
from .geometry import Ball, Band, HalfSpaceSplit, SegmentFamily
from .spaces import C01, CM, Grid, GridFunction, HVector
from .targets import TargetMap, target_from_key
from .verify import ProbeConfig

__all__ = [
    "ConfigError",
    "ValueSpec",
    "SegmentSpec",
    "Scenario",
    "parse_config",
    "emit_config",
    "build_grid",
    "build_family",
    "build_target",
    "build_operator",
    "probe_from",
    "scenario_is_1d",
    "reduce_to_1d",
]


class ConfigError(ValueError):
    """Malformed scenario file; message carries the offending line."""


@dataclass(frozen=True)
class ValueSpec:
    """Parsed function-valued entry."""

    form: str  # const | affine | samples | inf | ninf | coords
    params: tuple = ()

    @classmethod
    def parse(cls, text: str, line_no: int = 0) -> "ValueSpec":
        text = text.strip()
        try:
            if text == "inf":
                return cls("inf")
            if text == "-inf":
                return cls("ninf")
            if text.startswith("const:"):
                return cls("const", (float(text[6:]),))
            if text.startswith("affine:"):
                a, b = (float(v) for v in text[7:].split(","))
                return cls("affine", (a, b))
            if text.startswith("samples:"):
                return cls("samples", tuple(float(v) for v in text[8:].split(",")))
            return cls("coords", tuple(float(v) for v in text.split(",")))
        except ValueError as exc:
            raise ConfigError(f"line {line_no}: bad value {text!r} ({exc})") from None

    def to_text(self) -> str:
        if self.form == "inf":
            return "inf"
        if self.form == "ninf":
            return "-inf"
        if self.form == "const":
            return f"const:{self.params[0]:.17g}"
        if self.form == "affine":
            return f"affine:{self.params[0]:.17g},{self.params[1]:.17g}"
        if self.form == "samples":
            return "samples:" + ",".join(f"{v:.17g}" for v in self.params)
        return ",".join(f"{v:.17g}" for v in self.params)

    @property
    def infinite(self) -> bool:
        return self.form in ("inf", "ninf")

    def to_gridfunction(self, grid: Grid) -> GridFunction:
        if self.form == "const":
            return GridFunction.constant(grid, self.params[0])
        if self.form == "affine":
            a, b = self.params
            return GridFunction(grid, a * grid.points + b)
        if self.form == "samples":
            return GridFunction(grid, np.array(self.params))
        raise ConfigError(f"value {self.to_text()!r} is not a grid function")


@dataclass(frozen=True)
class SegmentSpec:
    kind: str  # band | ball | half
    phi: ValueSpec | None = None
    psi: ValueSpec | None = None
    z: ValueSpec | None = None
    center: ValueSpec | None = None
    radius: float | None = None
    mask: tuple = ()
    anchor: ValueSpec | None = None
    delta: float = 0.5


@dataclass(frozen=True)
class Scenario:
    """Everything a run needs: space, segments, mode, target, probes."""

    space: tuple
    segments: tuple
    mode: tuple = ("literal", 0.5, None)
    target: tuple = ("point_eval", 0.5, None)
    seed: int = 42
    samples: int = 1000
    q_check: int = 2
    steps: tuple = (1e-3, 1e-4, 1e-5)
    path: tuple | None = None


# --- parsing -------------------------------------------------------------------

def _parse_mask(text: str, line_no: int) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "-" in part[1:]:
                cut = part.index("-", 1)
                lo, hi = int(part[:cut]), int(part[cut + 1:])
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"line {line_no}: bad mask entry {part!r}") from None
    return tuple(sorted(set(out)))


def _build_segment_spec(sec: dict, line_no: int) -> SegmentSpec:
    kind = sec.get("kind")
    if kind not in ("band", "ball", "half"):
        raise ConfigError(f"line {line_no}: segment kind must be band/ball/half")
    delta = float(sec.get("delta", 0.5))
    if kind == "band":
        if "phi" not in sec or "psi" not in sec:
            raise ConfigError(f"line {line_no}: band needs phi and psi")
        return SegmentSpec(
            "band",
            phi=ValueSpec.parse(sec["phi"], line_no),
            psi=ValueSpec.parse(sec["psi"], line_no),
            z=ValueSpec.parse(sec["z"], line_no) if "z" in sec else None,
            delta=delta,
        )
    if kind == "ball":
        if "center" not in sec or "radius" not in sec:
            raise ConfigError(f"line {line_no}: ball needs center and radius")
        return SegmentSpec(
            "ball",
            center=ValueSpec.parse(sec["center"], line_no),
            radius=float(sec["radius"]),
            delta=delta,
        )
    if "mask" not in sec:
        raise ConfigError(f"line {line_no}: half needs a mask")
    anchor = ValueSpec.parse(sec["anchor"], line_no) if "anchor" in sec else ValueSpec(
        "const", (-1.0,))
    return SegmentSpec("half", mask=_parse_mask(sec["mask"], line_no),
                       anchor=anchor, delta=delta)


def parse_config(text: str) -> Scenario:
    top: dict = {}
    segments: list = []
    path_sec: dict | None = None
    current = top
    section_line = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line == "[segment]":
                current = {}
                segments.append((current, no))
            elif line == "[path]":
                path_sec = {}
                current = path_sec
                section_line = no
            else:
                raise ConfigError(f"line {no}: unknown section {line}")
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected key = value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        current[key] = val

    try:
        space = _parse_space(top)
        mode = _parse_mode(top)
        target = _parse_target(top)
        seed = int(top.get("seed", 42))
        samples = int(top.get("samples", 1000))
        q_check = int(top.get("q_check", 2))
        steps = tuple(float(v) for v in top.get("steps", "1e-3,1e-4,1e-5").split(","))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad scalar option: {exc}") from None

    if not segments:
        raise ConfigError("scenario needs at least one [segment] section")
    seg_specs = tuple(_build_segment_spec(sec, no) for sec, no in segments)
    kinds = {s.kind for s in seg_specs}
    if "half" in kinds and len(seg_specs) > 1:
        raise ConfigError("a half-space scenario takes exactly one segment")
    if kinds == {"band", "ball"}:
        raise ConfigError("cannot mix band and ball segments")

    path = None
    if path_sec is not None:
        for k in ("from", "to"):
            if k not in path_sec:
                raise ConfigError(f"line {section_line}: [path] needs '{k}'")
        path = (
            ValueSpec.parse(path_sec["from"], section_line),
            ValueSpec.parse(path_sec["to"], section_line),
            int(path_sec.get("points", 201)),
        )

    return Scenario(space, seg_specs, mode, target, seed, samples, q_check, steps, path)


def _parse_space(top: dict) -> tuple:
    kind = top.get("space")
    if kind == "c01":
        return ("c01", int(top.get("n", 101)))
    if kind == "hilbert":
        return ("hilbert", int(top.get("n", 2)))
    if kind == "cm":
        if "points" not in top:
            raise ConfigError("cm space needs a 'points' list")
        return ("cm", tuple(float(v) for v in top["points"].split(",")))
    raise ConfigError("space must be one of c01, cm, hilbert")


def _parse_mode(top: dict) -> tuple:
    mode = top.get("mode", "literal")
    if mode == "literal":
        eps = float(top["epsilon"]) if "epsilon" in top else None
        return ("literal", float(top.get("safety", 0.5)), eps)
    if mode == "clamp":
        if "theta" not in top:
            raise ConfigError("clamp mode needs theta")
        return ("clamp", float(top["theta"]))
    raise ConfigError("mode must be literal or clamp")


def _parse_target(top: dict) -> tuple:
    kind = top.get("target")
    if kind is None:
        raise ConfigError("scenario needs a target")
    t0 = float(top.get("t0", 0.5))
    weight = ValueSpec.parse(top["weight"]) if "weight" in top else None
    if kind == "linear_functional" and weight is None:
        raise ConfigError("linear_functional target needs a weight")
    return (kind, t0, weight)


# --- emission ------------------------------------------------------------------

def emit_config(sc: Scenario) -> str:
    lines = []
    kind = sc.space[0]
    lines.append(f"space = {kind}")
    if kind == "cm":
        lines.append("points = " + ",".join(f"{v:.17g}" for v in sc.space[1]))
    else:
        lines.append(f"n = {sc.space[1]}")
    if sc.mode[0] == "literal":
        lines.append("mode = literal")
        lines.append(f"safety = {sc.mode[1]:.17g}")
        if sc.mode[2] is not None:
            lines.append(f"epsilon = {sc.mode[2]:.17g}")
    else:
        lines.append("mode = clamp")
        lines.append(f"theta = {sc.mode[1]:.17g}")
    lines.append(f"target = {sc.target[0]}")
    lines.append(f"t0 = {sc.target[1]:.17g}")
    if sc.target[2] is not None:
        lines.append(f"weight = {sc.target[2].to_text()}")
    lines.append(f"seed = {sc.seed}")
    lines.append(f"samples = {sc.samples}")
    lines.append(f"q_check = {sc.q_check}")
    lines.append("steps = " + ",".join(f"{h:.17g}" for h in sc.steps))
    for seg in sc.segments:
        lines.append("")
        lines.append("[segment]")
        lines.append(f"kind = {seg.kind}")
        if seg.kind == "band":
            lines.append(f"phi = {seg.phi.to_text()}")
            lines.append(f"psi = {seg.psi.to_text()}")
            if seg.z is not None:
                lines.append(f"z = {seg.z.to_text()}")
        elif seg.kind == "ball":
            lines.append(f"center = {seg.center.to_text()}")
            lines.append(f"radius = {seg.radius:.17g}")
        else:
            lines.append("mask = " + ",".join(str(i) for i in seg.mask))
            lines.append(f"anchor = {seg.anchor.to_text()}")
        lines.append(f"delta = {seg.delta:.17g}")
    if sc.path is not None:
        lines.append("")
        lines.append("[path]")
        lines.append(f"from = {sc.path[0].to_text()}")
        lines.append(f"to = {sc.path[1].to_text()}")
        lines.append(f"points = {sc.path[2]}")
    return "\n".join(lines) + "\n"


# --- builders ------------------------------------------------------------------

def build_grid(sc: Scenario) -> Grid | None:
    kind = sc.space[0]
    if kind == "c01":
        return Grid.uniform(sc.space[1])
    if kind == "cm":
        return Grid.labels(sc.space[1])
    return None  # hilbert: no grid


def _band_anchor(spec: SegmentSpec, grid: Grid, phi, psi) -> GridFunction:
    if spec.z is not None:
        return spec.z.to_gridfunction(grid)
    if phi is not None and psi is not None:
        return GridFunction(grid, 0.5 * (phi.values + psi.values))
    if psi is not None:
        return GridFunction(grid, psi.values - 1.0)
    return GridFunction(grid, phi.values + 1.0)


def _build_segment(spec: SegmentSpec, sc: Scenario, grid: Grid | None):
    if spec.kind == "band":
        if grid is None:
            raise ConfigError("band segments need a c01/cm space")
        phi = None if spec.phi.infinite else spec.phi.to_gridfunction(grid)
        psi = None if spec.psi.infinite else spec.psi.to_gridfunction(grid)
        return Band(phi, psi, _band_anchor(spec, grid, phi, psi), spec.delta)
    if spec.kind == "ball":
        if sc.space[0] == "hilbert":
            coords = spec.center.params
            if len(coords) != sc.space[1]:
                raise ConfigError(
                    f"ball center has {len(coords)} coords, space dimension is {sc.space[1]}"
                )
            return Ball(HVector(coords), spec.radius, spec.delta)
        return Ball(spec.center.to_gridfunction(grid), spec.radius, spec.delta)
    if grid is None:
        raise ConfigError("half segments need a c01/cm space")
    mask = np.zeros(grid.size, dtype=bool)
    for i in spec.mask:
        if not 0 <= i < grid.size:
            raise ConfigError(f"mask index {i} outside the grid (size {grid.size})")
        mask[i] = True
    anchor = spec.anchor.to_gridfunction(grid.subgrid(mask))
    return HalfSpaceSplit(grid, mask, anchor, spec.delta)


def build_family(sc: Scenario):
    grid = build_grid(sc)
    segs = [_build_segment(s, sc, grid) for s in sc.segments]
    if isinstance(segs[0], HalfSpaceSplit):
        return segs[0]
    if isinstance(segs[0], Band):
        return SegmentFamily.of_bands(*segs)
    return SegmentFamily.of_balls(*segs)


def build_target(sc: Scenario) -> TargetMap:
    kind, t0, weight_spec = sc.target
    weight = None
    if weight_spec is not None:
        if sc.space[0] == "hilbert":
            weight = HVector(weight_spec.params)
        else:
            weight = weight_spec.to_gridfunction(build_grid(sc))
    return target_from_key(kind, t0=t0, weight=weight)


def build_operator(sc: Scenario) -> ExtensionOperator:
    family = build_family(sc)
    target = build_target(sc)
    if sc.mode[0] == "literal":
        return ExtensionOperator(family, target, "literal",
                                 safety=sc.mode[1], epsilon=sc.mode[2])
    return ExtensionOperator(family, target, "clamp", theta=sc.mode[1])


def probe_from(sc: Scenario) -> ProbeConfig:
    return ProbeConfig(q_check=sc.q_check, steps=sc.steps,
                       samples=sc.samples, seed=sc.seed)


# --- 1-D reduction --------------------------------------------------------------

_CONST_FORMS = ("const", "inf", "ninf")


def _spec_is_const(v: ValueSpec | None) -> bool:
    return v is None or v.form in _CONST_FORMS


def scenario_is_1d(sc: Scenario) -> bool:
    """True when the scenario transfers unchanged to the N = 1 model:
    constant segment data and a target that needs no quadrature."""
    kind = sc.target[0]
    if sc.space[0] == "hilbert":
        return sc.space[1] == 1 and kind == "quad_norm" and all(
            s.kind == "ball" and len(s.center.params) == 1 for s in sc.segments
        )
    if kind not in ("point_eval", "pointwise_sin"):
        return False
    for s in sc.segments:
        if s.kind == "band":
            if not (_spec_is_const(s.phi) and _spec_is_const(s.psi) and _spec_is_const(s.z)):
                return False
        elif s.kind == "ball":
            if not _spec_is_const(s.center):
                return False
        else:
            if not _spec_is_const(s.anchor):
                return False
    return True


def reduce_to_1d(sc: Scenario) -> Scenario:
    """The same scenario on the single-point model (half-space masks
    collapse to the whole space)."""
    if not scenario_is_1d(sc):
        raise ValueError("scenario is not 1-D expressible")
    if sc.space[0] == "hilbert":
        space = ("hilbert", 1)
    elif sc.space[0] == "cm":
        space = ("cm", (sc.space[1][0],))
    else:
        space = ("c01", 1)
    segments = tuple(
        replace(s, mask=(0,)) if s.kind == "half" else s for s in sc.segments
    )
    return replace(sc, space=space, segments=segments, path=None)
