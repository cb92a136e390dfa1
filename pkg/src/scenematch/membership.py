"""Trapezoidal memberships over bounding-box features.

Every geometric judgement is a trapezoid over one scalar feature.  The
defaults below were tuned on the bundled installation scene; all of them can
be overridden from a JSON params document (see ``load_params``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from typing import IO

from .scene import BoundingBox, SceneFormatError

INF = math.inf


@dataclass(frozen=True)
class Trapezoid:
    """Membership 0 at <= a, ramp to 1 at b, full on [b, c], ramp to 0 at d.

    Open shoulders use -inf/inf; a == b (or c == d) makes the edge a step.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid corners must be ordered, got {self}")

    def __call__(self, x: float) -> float:
        if self.b <= x <= self.c:
            return 1.0
        if x <= self.a or x >= self.d:
            return 0.0
        if x < self.b:
            return (x - self.a) / (self.b - self.a)
        return (self.d - x) / (self.d - self.c)

    def as_list(self) -> list[float | None]:
        return [None if math.isinf(v) else v for v in (self.a, self.b, self.c, self.d)]

    @classmethod
    def from_list(cls, values) -> "Trapezoid":
        if not isinstance(values, (list, tuple)) or len(values) != 4:
            raise SceneFormatError(f"trapezoid must be a 4-element list, got {values!r}")
        corners = []
        for idx, v in enumerate(values):
            if v is None:
                corners.append(-INF if idx < 2 else INF)
            else:
                corners.append(float(v))
        return cls(*corners)


@dataclass(frozen=True)
class MembershipParams:
    """Tunable feature memberships for attributes and relations."""

    # width/height for horizontal, height/width for vertical
    horizontal_ratio: Trapezoid = Trapezoid(1.5, 3.0, INF, INF)
    vertical_ratio: Trapezoid = Trapezoid(1.5, 3.0, INF, INF)
    # long/elongated and short over max(w, h) / min(w, h)
    elongation_ratio: Trapezoid = Trapezoid(2.0, 5.0, INF, INF)
    short_ratio: Trapezoid = Trapezoid(-INF, -INF, 1.5, 3.0)
    # shared axis-overlap feature: overlap length / narrower extent
    overlap_ratio: Trapezoid = Trapezoid(0.0, 0.5, INF, INF)
    # separation in px for above/below and left/right
    stack_gap: Trapezoid = Trapezoid(0.0, 0.0, 60.0, 200.0)
    side_gap: Trapezoid = Trapezoid(0.0, 0.0, 60.0, 200.0)
    # box-to-box distance in px for connected_to and elbow contact
    contact_gap: Trapezoid = Trapezoid(-INF, -INF, 2.0, 15.0)
    # center distance / mean box diagonal
    near_distance: Trapezoid = Trapezoid(-INF, -INF, 2.0, 6.0)
    # junction offset from a box end / box length, for elbow corners
    corner_offset: Trapezoid = Trapezoid(-INF, -INF, 0.15, 0.35)


DEFAULT_PARAMS = MembershipParams()

_PARAM_NAMES = tuple(f.name for f in fields(MembershipParams))


def params_to_doc(params: MembershipParams) -> dict:
    return {name: getattr(params, name).as_list() for name in _PARAM_NAMES}


def dump_params(params: MembershipParams = DEFAULT_PARAMS) -> str:
    return json.dumps(params_to_doc(params), indent=2) + "\n"


def load_params(source: bytes | str | IO, base: MembershipParams = DEFAULT_PARAMS) -> MembershipParams:
    """Overlay a JSON params document over ``base``; unknown keys are rejected."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as err:
        raise SceneFormatError(f"params document is not valid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise SceneFormatError("params document must be a JSON object")
    updates = {}
    for key, value in doc.items():
        if key not in _PARAM_NAMES:
            raise SceneFormatError(f"unknown membership parameter {key!r}")
        try:
            updates[key] = Trapezoid.from_list(value)
        except ValueError as err:
            raise SceneFormatError(f"parameter {key!r}: {err}") from err
    return replace(base, **updates)


def load_params_file(path, base: MembershipParams = DEFAULT_PARAMS) -> MembershipParams:
    with open(path, "rb") as handle:
        return load_params(handle, base)


# ---------------------------------------------------------------------------
# Box features.  Extents are clamped to one pixel so degenerate detections
# (zero-width seams) keep well-defined ratios and separations.
# ---------------------------------------------------------------------------


def effective_box(box: BoundingBox) -> BoundingBox:
    return BoundingBox(
        box.x_min,
        max(box.x_max, box.x_min + 1.0),
        box.y_min,
        max(box.y_max, box.y_min + 1.0),
    )


def aspect_ratio(box: BoundingBox) -> float:
    """width / height of the effective box."""
    box = effective_box(box)
    return box.width / box.height


def elongation(box: BoundingBox) -> float:
    box = effective_box(box)
    long_side = max(box.width, box.height)
    short_side = min(box.width, box.height)
    return long_side / short_side


def overlap_length(lo_a: float, hi_a: float, lo_b: float, hi_b: float) -> float:
    return max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))


def x_overlap_ratio(a: BoundingBox, b: BoundingBox) -> float:
    """Overlap of the x-intervals relative to the narrower box."""
    a, b = effective_box(a), effective_box(b)
    inter = overlap_length(a.x_min, a.x_max, b.x_min, b.x_max)
    return inter / min(a.width, b.width)


def y_overlap_ratio(a: BoundingBox, b: BoundingBox) -> float:
    a, b = effective_box(a), effective_box(b)
    inter = overlap_length(a.y_min, a.y_max, b.y_min, b.y_max)
    return inter / min(a.height, b.height)


def box_gap(a: BoundingBox, b: BoundingBox) -> float:
    """Shortest distance between the two effective boxes (0 when they touch)."""
    a, b = effective_box(a), effective_box(b)
    dx = max(b.x_min - a.x_max, a.x_min - b.x_max, 0.0)
    dy = max(b.y_min - a.y_max, a.y_min - b.y_max, 0.0)
    return math.hypot(dx, dy)


def center_distance_ratio(a: BoundingBox, b: BoundingBox) -> float:
    """Center distance normalized by the mean box diagonal."""
    a, b = effective_box(a), effective_box(b)
    (ax, ay), (bx, by) = a.center, b.center
    diag = (math.hypot(a.width, a.height) + math.hypot(b.width, b.height)) / 2.0
    return math.hypot(bx - ax, by - ay) / diag


def junction_center(a: BoundingBox, b: BoundingBox) -> tuple[float, float]:
    """Midpoint of the overlap region, or of the gap when the boxes are apart."""
    a, b = effective_box(a), effective_box(b)
    jx = (max(a.x_min, b.x_min) + min(a.x_max, b.x_max)) / 2.0
    jy = (max(a.y_min, b.y_min) + min(a.y_max, b.y_max)) / 2.0
    return jx, jy


def end_offset_ratio(box: BoundingBox, point: tuple[float, float]) -> float:
    """Distance from ``point`` to the nearer end of the box's long axis, / length."""
    box = effective_box(box)
    if box.height >= box.width:
        length = box.height
        coord, lo, hi = point[1], box.y_min, box.y_max
    else:
        length = box.width
        coord, lo, hi = point[0], box.x_min, box.x_max
    return min(abs(coord - lo), abs(hi - coord)) / length


__all__ = [
    "Trapezoid",
    "MembershipParams",
    "DEFAULT_PARAMS",
    "params_to_doc",
    "dump_params",
    "load_params",
    "load_params_file",
    "effective_box",
    "aspect_ratio",
    "elongation",
    "overlap_length",
    "x_overlap_ratio",
    "y_overlap_ratio",
    "box_gap",
    "center_distance_ratio",
    "junction_center",
    "end_offset_ratio",
]
