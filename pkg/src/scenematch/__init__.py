"""Possibility-based matching of logical scene descriptions to perceived objects."""

from .lang import (
    Alternative,
    And,
    AttributeAtom,
    Description,
    DescriptionError,
    DescriptionSyntaxError,
    ExpectedObject,
    HuntMarkerError,
    Not,
    Or,
    RelationArityError,
    RelationAtom,
    RelationEdge,
    UnknownWordError,
    format_formula,
    hunt_object,
    parse_description,
    print_description,
    validate_description,
)
from .matching import (
    Aggregator,
    MatchHypothesis,
    MatchingPerformance,
    RecognizedScene,
    enumerate_hypotheses,
    hunt_binding,
    non_ambiguity,
    recognized_performance,
    score_hypothesis,
)
from .membership import DEFAULT_PARAMS, MembershipParams, Trapezoid, load_params, load_params_file
from .redundancy import (
    AmbiguityScope,
    PerformanceThreshold,
    RedundancyReport,
    SubDescription,
    description_items,
    evaluate_subd,
    kernels,
    maximal_subds,
    redundancy_report,
)
from .scene import BoundingBox, PerceivedObject, Scene, SceneFormatError, load_scene, load_scene_file, save_scene

__version__ = "0.1.0"

__all__ = [
    "Alternative",
    "And",
    "AttributeAtom",
    "Description",
    "DescriptionError",
    "DescriptionSyntaxError",
    "ExpectedObject",
    "HuntMarkerError",
    "Not",
    "Or",
    "RelationArityError",
    "RelationAtom",
    "RelationEdge",
    "UnknownWordError",
    "format_formula",
    "hunt_object",
    "parse_description",
    "print_description",
    "validate_description",
    "Aggregator",
    "MatchHypothesis",
    "MatchingPerformance",
    "RecognizedScene",
    "enumerate_hypotheses",
    "hunt_binding",
    "non_ambiguity",
    "recognized_performance",
    "score_hypothesis",
    "DEFAULT_PARAMS",
    "MembershipParams",
    "Trapezoid",
    "load_params",
    "load_params_file",
    "AmbiguityScope",
    "PerformanceThreshold",
    "RedundancyReport",
    "SubDescription",
    "description_items",
    "evaluate_subd",
    "kernels",
    "maximal_subds",
    "redundancy_report",
    "BoundingBox",
    "PerceivedObject",
    "Scene",
    "SceneFormatError",
    "load_scene",
    "load_scene_file",
    "save_scene",
    "__version__",
]
