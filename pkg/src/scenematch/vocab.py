"""Attribute and relation vocabularies shared by the parser and the evaluators."""

from __future__ import annotations

TYPE_ATOMS = frozenset({"pipe", "floodgate", "elbow", "cistern", "supercharger", "tsquare"})
COLOR_ATOMS = frozenset({"red", "blue", "green", "yellow", "grey"})
ORIENTATION_ATOMS = frozenset({"horizontal", "vertical"})
SIZE_ATOMS = frozenset({"long", "elongated", "short"})

ATTRIBUTE_ATOMS = TYPE_ATOMS | COLOR_ATOMS | ORIENTATION_ATOMS | SIZE_ATOMS

RELATION_ATOMS = frozenset(
    {
        "above",
        "below",
        "on",
        "under",
        "on_the_left_to",
        "on_the_right_to",
        "in_front_of",
        "behind",
        "connected_to",
        "near_from",
        "elbow",
    }
)

# Depth ordering is invisible to a single 2-D view; these two evaluate to
# stored degrees only.
DEPTH_RELATIONS = frozenset({"in_front_of", "behind"})

RELATION_ARITY = {name: 2 for name in RELATION_ATOMS}


class UnknownPredicateError(ValueError):
    """A predicate name is not part of the registered vocabulary."""


def normalize_word(word: str) -> str:
    """Fold case and hyphenation so that e.g. ``Super-charger`` matches ``supercharger``."""
    folded = word.lower()
    if folded in ATTRIBUTE_ATOMS or folded in RELATION_ATOMS:
        return folded
    return folded.replace("-", "")


def attribute_kind(predicate: str) -> str:
    """Classify a registered attribute predicate; raises for unknown names."""
    if predicate in TYPE_ATOMS:
        return "type"
    if predicate in COLOR_ATOMS:
        return "color"
    if predicate in ORIENTATION_ATOMS:
        return "orientation"
    if predicate in SIZE_ATOMS:
        return "size"
    raise UnknownPredicateError(f"unknown attribute predicate: {predicate!r}")


__all__ = [
    "TYPE_ATOMS",
    "COLOR_ATOMS",
    "ORIENTATION_ATOMS",
    "SIZE_ATOMS",
    "ATTRIBUTE_ATOMS",
    "RELATION_ATOMS",
    "DEPTH_RELATIONS",
    "RELATION_ARITY",
    "UnknownPredicateError",
    "normalize_word",
    "attribute_kind",
]
