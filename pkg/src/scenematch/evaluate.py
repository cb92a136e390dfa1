"""Possibility evaluation of attribute and relation predicates and formulas.

Connectives follow possibility theory: conjunction is min, disjunction is
max, negation is 1 - pi.  Stored degrees always win over geometry: an
object's ``attribute_overrides`` shadow computed attribute memberships and a
scene's ``relation_overrides`` shadow computed relation memberships.

``in_front_of`` and ``behind`` cannot be judged from a single 2-D view.
Without a stored degree they evaluate to full possibility (ignorance); pass
``strict=True`` to make that an error, or a ``diagnostics`` list to collect a
note per occurrence.
"""

from __future__ import annotations

from . import membership as mb
from . import vocab
from .lang import And, AttributeAtom, Node, Not, Or, RelationAtom
from .membership import DEFAULT_PARAMS, MembershipParams
from .scene import PerceivedObject, Scene


class UnevaluableRelationError(ValueError):
    """A depth relation has no stored degree and strict mode is on."""


def eval_attribute(
    predicate: str, obj: PerceivedObject, params: MembershipParams = DEFAULT_PARAMS
) -> float:
    """Possibility that ``obj`` satisfies an attribute predicate."""
    override = obj.attribute_overrides.get(predicate)
    if override is not None:
        return override
    kind = vocab.attribute_kind(predicate)
    if kind == "type":
        return obj.detection_confidence if obj.detected_type == predicate else 0.0
    if kind == "color":
        return obj.color_degrees.get(predicate, 0.0)
    if kind == "orientation":
        if predicate == "horizontal":
            return params.horizontal_ratio(mb.aspect_ratio(obj.bbox))
        return params.vertical_ratio(1.0 / mb.aspect_ratio(obj.bbox))
    if predicate == "short":
        return params.short_ratio(mb.elongation(obj.bbox))
    return params.elongation_ratio(mb.elongation(obj.bbox))


def _orientation_degree(box, params: MembershipParams, vertical: bool) -> float:
    ratio = mb.aspect_ratio(box)
    return params.vertical_ratio(1.0 / ratio) if vertical else params.horizontal_ratio(ratio)


def _rel_on(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    support = params.overlap_ratio(mb.x_overlap_ratio(a.bbox, b.bbox))
    ea, eb = mb.effective_box(a.bbox), mb.effective_box(b.bbox)
    return support if ea.y_min <= eb.y_min else 0.0


def _rel_above(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    support = params.overlap_ratio(mb.x_overlap_ratio(a.bbox, b.bbox))
    ea, eb = mb.effective_box(a.bbox), mb.effective_box(b.bbox)
    return min(support, params.stack_gap(eb.y_min - ea.y_max))


def _rel_left(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    support = params.overlap_ratio(mb.y_overlap_ratio(a.bbox, b.bbox))
    ea, eb = mb.effective_box(a.bbox), mb.effective_box(b.bbox)
    return min(support, params.side_gap(eb.x_min - ea.x_max))


def _rel_connected(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    return params.contact_gap(mb.box_gap(a.bbox, b.bbox))


def _rel_near(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    return params.near_distance(mb.center_distance_ratio(a.bbox, b.bbox))


def _rel_elbow(a: PerceivedObject, b: PerceivedObject, params: MembershipParams) -> float:
    """Two elongated boxes meeting at right angles near both their ends."""
    contact = params.contact_gap(mb.box_gap(a.bbox, b.bbox))
    if contact == 0.0:
        return 0.0
    perpendicular = max(
        min(_orientation_degree(a.bbox, params, True), _orientation_degree(b.bbox, params, False)),
        min(_orientation_degree(a.bbox, params, False), _orientation_degree(b.bbox, params, True)),
    )
    point = mb.junction_center(a.bbox, b.bbox)
    corner_a = params.corner_offset(mb.end_offset_ratio(a.bbox, point))
    corner_b = params.corner_offset(mb.end_offset_ratio(b.bbox, point))
    return min(contact, perpendicular, corner_a, corner_b)


_SWAPPED = {"under": "on", "below": "above", "on_the_right_to": "on_the_left_to", "behind": "in_front_of"}
_SYMMETRIC = {"connected_to", "near_from"}


def eval_relation(
    predicate: str,
    args: tuple[PerceivedObject, ...],
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    *,
    strict: bool = False,
    diagnostics: list[str] | None = None,
) -> float:
    """Possibility that the ordered ``args`` stand in the named relation."""
    if predicate not in vocab.RELATION_ATOMS:
        raise vocab.UnknownPredicateError(f"unknown relation predicate: {predicate!r}")
    if len(args) != vocab.RELATION_ARITY[predicate]:
        raise ValueError(f"{predicate} takes {vocab.RELATION_ARITY[predicate]} arguments")
    ids = tuple(o.id for o in args)
    stored = scene.relation_override(predicate, ids)
    if stored is None and predicate in _SYMMETRIC:
        stored = scene.relation_override(predicate, ids[::-1])
    if stored is not None:
        return stored
    swapped = _SWAPPED.get(predicate)
    if swapped is not None:
        return eval_relation(
            swapped, args[::-1], scene, params, strict=strict, diagnostics=diagnostics
        )
    if predicate == "in_front_of":
        note = f"in_front_of{ids}: no stored degree for a depth relation; assuming full possibility"
        if strict:
            raise UnevaluableRelationError(note)
        if diagnostics is not None:
            diagnostics.append(note)
        return 1.0
    a, b = args
    if predicate == "on":
        return _rel_on(a, b, params)
    if predicate == "above":
        return _rel_above(a, b, params)
    if predicate == "on_the_left_to":
        return _rel_left(a, b, params)
    if predicate == "connected_to":
        return _rel_connected(a, b, params)
    if predicate == "near_from":
        return _rel_near(a, b, params)
    return _rel_elbow(a, b, params)


def eval_attribute_formula(
    formula: Node, obj: PerceivedObject, params: MembershipParams = DEFAULT_PARAMS
) -> float:
    if isinstance(formula, AttributeAtom):
        return eval_attribute(formula.predicate, obj, params)
    if isinstance(formula, Not):
        return 1.0 - eval_attribute_formula(formula.child, obj, params)
    if isinstance(formula, And):
        return min(eval_attribute_formula(c, obj, params) for c in formula.children)
    if isinstance(formula, Or):
        return max(eval_attribute_formula(c, obj, params) for c in formula.children)
    raise TypeError(f"not an attribute formula node: {formula!r}")


def eval_relation_formula(
    formula: Node,
    args: tuple[PerceivedObject, ...],
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    *,
    strict: bool = False,
    diagnostics: list[str] | None = None,
) -> float:
    if isinstance(formula, RelationAtom):
        return eval_relation(
            formula.predicate, args, scene, params, strict=strict, diagnostics=diagnostics
        )
    if isinstance(formula, Not):
        return 1.0 - eval_relation_formula(
            formula.child, args, scene, params, strict=strict, diagnostics=diagnostics
        )
    if isinstance(formula, And):
        return min(
            eval_relation_formula(c, args, scene, params, strict=strict, diagnostics=diagnostics)
            for c in formula.children
        )
    if isinstance(formula, Or):
        return max(
            eval_relation_formula(c, args, scene, params, strict=strict, diagnostics=diagnostics)
            for c in formula.children
        )
    raise TypeError(f"not a relation formula node: {formula!r}")


__all__ = [
    "UnevaluableRelationError",
    "eval_attribute",
    "eval_relation",
    "eval_attribute_formula",
    "eval_relation_formula",
]
