"""Perceived scene model and its JSON document format.

A scene is what the perception stage hands over: axis-aligned boxes in image
coordinates (y grows downwards), a detected type with its confidence, optional
per-color degrees and optional stored degrees that take precedence over
anything computed from geometry.

Document layout::

    {"objects": [{"id": "omega13", "type": "floodgate", "confidence": 1.0,
                  "bbox": [363, 369, 182, 224],
                  "colors": {"red": 1.0},
                  "attribute_overrides": {}}],
     "relation_overrides": [{"relation": "on", "args": ["omega5", "omega11"],
                             "degree": 1.0}]}

``save_scene`` emits a canonical byte stream (sorted ids and keys) so equal
scenes serialize identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Mapping

from . import vocab


class SceneFormatError(ValueError):
    """Malformed scene document or violated scene invariant."""


def unit_interval(value: object, what: str) -> float:
    """Validate a possibility degree in [0, 1] and return it as float."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneFormatError(f"{what} must be a number, got {value!r}")
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise SceneFormatError(f"{what} must lie in [0, 1], got {v}")
    return v


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise SceneFormatError(f"inverted bounding box {self.as_list()}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> tuple[float, float]:
        return (self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0

    def as_list(self) -> list[float]:
        return [self.x_min, self.x_max, self.y_min, self.y_max]


@dataclass(frozen=True)
class PerceivedObject:
    id: str
    detected_type: str
    detection_confidence: float
    bbox: BoundingBox
    color_degrees: Mapping[str, float] = field(default_factory=dict)
    attribute_overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise SceneFormatError("object id must be non-empty")
        if self.detected_type not in vocab.TYPE_ATOMS:
            raise SceneFormatError(f"object {self.id!r}: unregistered type {self.detected_type!r}")
        unit_interval(self.detection_confidence, f"object {self.id!r}: confidence")
        for color, degree in self.color_degrees.items():
            if color not in vocab.COLOR_ATOMS:
                raise SceneFormatError(f"object {self.id!r}: unregistered color {color!r}")
            unit_interval(degree, f"object {self.id!r}: color {color!r}")
        for pred, degree in self.attribute_overrides.items():
            if pred not in vocab.ATTRIBUTE_ATOMS:
                raise SceneFormatError(f"object {self.id!r}: unregistered attribute {pred!r}")
            unit_interval(degree, f"object {self.id!r}: override {pred!r}")


@dataclass(frozen=True)
class Scene:
    objects: tuple[PerceivedObject, ...] = ()
    relation_overrides: Mapping[tuple[str, tuple[str, ...]], float] = field(default_factory=dict)

    def __post_init__(self):
        ids = [o.id for o in self.objects]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise SceneFormatError(f"duplicate object ids: {sorted(dup)}")
        known = set(ids)
        for (pred, args), degree in self.relation_overrides.items():
            if pred not in vocab.RELATION_ATOMS:
                raise SceneFormatError(f"override names unregistered relation {pred!r}")
            if len(args) != vocab.RELATION_ARITY[pred]:
                raise SceneFormatError(f"override {pred!r}: expected {vocab.RELATION_ARITY[pred]} args")
            missing = [a for a in args if a not in known]
            if missing:
                raise SceneFormatError(f"override {pred!r} references unknown objects {missing}")
            unit_interval(degree, f"override {pred!r}{args!r}")

    def by_id(self, object_id: str) -> PerceivedObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def relation_override(self, predicate: str, args: tuple[str, ...]) -> float | None:
        return self.relation_overrides.get((predicate, args))


def _object_from_doc(doc: object) -> PerceivedObject:
    if not isinstance(doc, dict):
        raise SceneFormatError(f"object entry must be a mapping, got {type(doc).__name__}")
    try:
        raw_bbox = doc["bbox"]
        obj_id = doc["id"]
        obj_type = doc["type"]
        confidence = doc["confidence"]
    except KeyError as missing:
        raise SceneFormatError(f"object entry missing key {missing}") from None
    if not isinstance(raw_bbox, (list, tuple)) or len(raw_bbox) != 4:
        raise SceneFormatError(f"object {obj_id!r}: bbox must be [x_min, x_max, y_min, y_max]")
    return PerceivedObject(
        id=str(obj_id),
        detected_type=str(obj_type),
        detection_confidence=unit_interval(confidence, f"object {obj_id!r}: confidence"),
        bbox=BoundingBox(*(float(v) for v in raw_bbox)),
        color_degrees=dict(doc.get("colors") or {}),
        attribute_overrides=dict(doc.get("attribute_overrides") or {}),
    )


def load_scene(source: bytes | str | IO) -> Scene:
    """Build a scene from a JSON byte stream, string or open file."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as err:
        raise SceneFormatError(f"not valid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise SceneFormatError("scene document must be a JSON object")
    objects = tuple(_object_from_doc(entry) for entry in doc.get("objects", []))
    overrides: dict[tuple[str, tuple[str, ...]], float] = {}
    for entry in doc.get("relation_overrides", []):
        if not isinstance(entry, dict) or not {"relation", "args", "degree"} <= set(entry):
            raise SceneFormatError(f"bad relation override entry: {entry!r}")
        key = (str(entry["relation"]), tuple(str(a) for a in entry["args"]))
        if key in overrides:
            raise SceneFormatError(f"duplicate relation override for {key}")
        overrides[key] = float(entry["degree"])
    return Scene(objects, overrides)


def load_scene_file(path) -> Scene:
    with open(path, "rb") as handle:
        return load_scene(handle)


def scene_to_doc(scene: Scene) -> dict:
    """Plain-dict form of a scene with canonical (sorted) ordering."""
    objects = []
    for obj in sorted(scene.objects, key=lambda o: o.id):
        entry: dict = {
            "id": obj.id,
            "type": obj.detected_type,
            "confidence": obj.detection_confidence,
            "bbox": obj.bbox.as_list(),
        }
        if obj.color_degrees:
            entry["colors"] = {k: obj.color_degrees[k] for k in sorted(obj.color_degrees)}
        if obj.attribute_overrides:
            entry["attribute_overrides"] = {
                k: obj.attribute_overrides[k] for k in sorted(obj.attribute_overrides)
            }
        objects.append(entry)
    doc: dict = {"objects": objects}
    if scene.relation_overrides:
        doc["relation_overrides"] = [
            {"relation": pred, "args": list(args), "degree": degree}
            for (pred, args), degree in sorted(scene.relation_overrides.items())
        ]
    return doc


def save_scene(scene: Scene) -> bytes:
    """Canonical JSON byte stream; load(save(s)) == s."""
    return (json.dumps(scene_to_doc(scene), indent=2, sort_keys=False) + "\n").encode("utf-8")


__all__ = [
    "SceneFormatError",
    "unit_interval",
    "BoundingBox",
    "PerceivedObject",
    "Scene",
    "load_scene",
    "load_scene_file",
    "scene_to_doc",
    "save_scene",
]
