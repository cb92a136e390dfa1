"""Seeded synthetic scenario generator.

Builds small pipe-graph scenes with a known target so matching strategies can
be scored automatically: a vertical pipe meets a horizontal pipe in an exact
corner contact, a floodgate sits on the horizontal pipe, and clutter objects
fill the rest of the canvas.  Two chain descriptions of the target are
emitted with deliberately redundant adjectives.

Three failure modes can be injected, each driven by one rate:

* ``degrade``   scales every confidence down (never below 0.7 of its value)
  and, per path object, may ruin one redundant channel (a color degree or an
  orientation/size override drops to at most 0.3);
* ``false_rate`` may add a decoy floodgate that carries the target's color
  but none of its relations;
* ``hidden_rate`` may remove the vertical pipe entirely.

With all rates at zero the ground-truth binding scores likelihood 1.0.  All
draws come from one ``random.Random(seed)`` in a fixed order, so output is
byte-identical across runs for the same spec.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .scene import BoundingBox, PerceivedObject, Scene, scene_to_doc

CANVAS_WIDTH = 640
CANVAS_HEIGHT = 512

_CLUTTER_TYPES = ("cistern", "supercharger", "tsquare", "elbow", "pipe", "floodgate")
_CLUTTER_COLORS = ("blue", "green", "yellow", "grey")


@dataclass(frozen=True)
class GenSpec:
    seed: int
    clutter: int = 4
    degrade: float = 0.0
    false_rate: float = 0.0
    hidden_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.clutter < 0:
            raise ValueError("clutter count must be >= 0")
        for name in ("degrade", "false_rate", "hidden_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class GenResult:
    spec: GenSpec
    scene: Scene
    descriptions: tuple[str, ...]
    ground_truth: dict[str, str] = field(default_factory=dict)
    hunt_id: str = ""

    def to_doc(self) -> dict:
        return {
            "spec": {
                "seed": self.spec.seed,
                "clutter": self.spec.clutter,
                "degrade": self.spec.degrade,
                "false_rate": self.spec.false_rate,
                "hidden_rate": self.spec.hidden_rate,
            },
            "scene": scene_to_doc(self.scene),
            "descriptions": list(self.descriptions),
            "ground_truth": {"binding": dict(self.ground_truth), "hunt": self.hunt_id},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True) + "\n"


DESCRIPTION_TEMPLATES = (
    "green vertical pipe elbow green horizontal long pipe under red short floodgate[hunt]",
    "vertical elongated pipe elbow horizontal pipe connected to red floodgate[hunt]",
)


def generate(spec: GenSpec) -> GenResult:
    rng = random.Random(spec.seed)

    # Path: vertical pipe, horizontal pipe off its top-right corner, floodgate
    # resting on the horizontal pipe.  All contacts are exact, so the chain
    # relations score 1.0 before noise.
    wa = rng.randint(4, 8)
    ha = rng.randint(90, 180)
    xa = rng.randint(30, 320)
    ya = rng.randint(60, 240)
    v_pipe = PerceivedObject(
        id="p1",
        detected_type="pipe",
        detection_confidence=1.0,
        bbox=BoundingBox(xa, xa + wa, ya, ya + ha),
        color_degrees={"green": 1.0},
    )

    hb = rng.randint(4, 8)
    len_b = rng.randint(90, 200)
    h_pipe = PerceivedObject(
        id="p2",
        detected_type="pipe",
        detection_confidence=1.0,
        bbox=BoundingBox(xa + wa, xa + wa + len_b, ya, ya + hb),
        color_degrees={"green": 1.0},
    )

    wf = rng.randint(14, 26)
    hf = wf + rng.randint(-2, 2)
    xc = rng.randint(xa + wa + 6, xa + wa + len_b - 6 - wf)
    gate = PerceivedObject(
        id="g1",
        detected_type="floodgate",
        detection_confidence=1.0,
        bbox=BoundingBox(xc, xc + wf, ya - hf, ya),
        color_degrees={"red": 1.0},
    )

    objects = [v_pipe, h_pipe, gate]
    for i in range(spec.clutter):
        kind = rng.choice(_CLUTTER_TYPES)
        w = rng.randint(8, 60)
        h = rng.randint(8, 60)
        x = rng.randint(0, CANVAS_WIDTH - 1 - w)
        y = rng.randint(300, CANVAS_HEIGHT - 1 - h)
        color = rng.choice(_CLUTTER_COLORS)
        objects.append(
            PerceivedObject(
                id=f"c{i + 1}",
                detected_type=kind,
                detection_confidence=round(rng.uniform(0.4, 0.95), 2),
                bbox=BoundingBox(x, x + w, y, y + h),
                color_degrees={color: round(rng.uniform(0.3, 1.0), 2)},
            )
        )

    objects = _apply_noise(objects, spec, rng)
    scene = Scene(tuple(objects))
    return GenResult(
        spec=spec,
        scene=scene,
        descriptions=DESCRIPTION_TEMPLATES,
        ground_truth={"o1": "p1", "o2": "p2", "o3": "g1"},
        hunt_id="g1",
    )


def _apply_noise(
    objects: list[PerceivedObject], spec: GenSpec, rng: random.Random
) -> list[PerceivedObject]:
    noisy: list[PerceivedObject] = []
    for obj in objects:
        confidence = obj.detection_confidence
        if spec.degrade > 0.0:
            confidence = round(confidence * (1.0 - spec.degrade * rng.uniform(0.0, 0.3)), 4)
        colors = dict(obj.color_degrees)
        overrides = dict(obj.attribute_overrides)
        if obj.id in ("p1", "p2", "g1") and rng.random() < spec.degrade:
            # Sabotage exactly one redundant channel: the core type evidence
            # stays strong, so only dropping the item can recover the match.
            low = round(rng.uniform(0.0, 0.3), 4)
            channel = rng.choice(("color", "shape"))
            if channel == "color":
                colors = {key: low for key in colors}
            elif obj.id == "g1":
                overrides["short"] = low
            else:
                overrides["vertical" if obj.id == "p1" else "horizontal"] = low
        noisy.append(
            PerceivedObject(
                id=obj.id,
                detected_type=obj.detected_type,
                detection_confidence=confidence,
                bbox=obj.bbox,
                color_degrees=colors,
                attribute_overrides=overrides,
            )
        )

    if rng.random() < spec.false_rate:
        # Decoy floodgate: right color, wrong place (below the horizontal
        # pipe and clear of it, so on/connected relations stay near zero).
        base = noisy[1].bbox
        wf = rng.randint(14, 26)
        hf = wf + rng.randint(-2, 2)
        gap = rng.randint(25, 60)
        x = rng.randint(int(base.x_min), int(base.x_max) - wf)
        y = int(base.y_max) + gap
        noisy.append(
            PerceivedObject(
                id="f1",
                detected_type="floodgate",
                detection_confidence=round(rng.uniform(0.5, 0.9), 2),
                bbox=BoundingBox(x, x + wf, y, y + hf),
                color_degrees={"red": round(rng.uniform(0.5, 0.9), 2)},
            )
        )

    if rng.random() < spec.hidden_rate:
        noisy = [obj for obj in noisy if obj.id != "p1"]
    return noisy


__all__ = [
    "CANVAS_WIDTH",
    "CANVAS_HEIGHT",
    "DESCRIPTION_TEMPLATES",
    "GenSpec",
    "GenResult",
    "generate",
]
