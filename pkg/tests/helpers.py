"""Shared test utilities: brute-force oracles and seeded instance builders.

The oracles re-derive engine outputs through the dumbest possible route
(permutations and subset enumeration) so the search code is checked against
something that cannot share its bugs.
"""

from __future__ import annotations

import itertools
import random

from scenematch import vocab
from scenematch.evaluate import eval_attribute_formula, eval_relation_formula
from scenematch.lang import (
    Alternative,
    And,
    AttributeAtom,
    Description,
    ExpectedObject,
    Node,
    Not,
    Or,
    RelationAtom,
    RelationEdge,
    hunt_object,
)
from scenematch.matching import Aggregator, aggregate
from scenematch.membership import DEFAULT_PARAMS
from scenematch.redundancy import SubDescription, description_items, induced_alternative
from scenematch.scene import BoundingBox, PerceivedObject, Scene

_ADJECTIVES = sorted(vocab.COLOR_ATOMS | vocab.ORIENTATION_ATOMS | vocab.SIZE_ATOMS)
_TYPES = sorted(vocab.TYPE_ATOMS)
_RELATIONS = sorted(vocab.RELATION_ATOMS)
_FLAT_RELATIONS = sorted(vocab.RELATION_ATOMS - vocab.DEPTH_RELATIONS)


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------


def brute_force_rows(
    description: Description,
    scene: Scene,
    params=DEFAULT_PARAMS,
    aggregator: Aggregator = Aggregator.MIN,
    floor: float = 0.0,
    cache: dict | None = None,
) -> list[tuple[float, int, tuple[tuple[str, str], ...]]]:
    """Every injective binding by raw permutation, ranked like the engine.

    ``cache`` memoizes raw formula evaluations (value-keyed, so equal induced
    formulas hit) without touching the enumeration itself; the subset loops
    in the lattice oracles would otherwise re-score identical pairs 2^n times.
    """

    def attr(formula, obj) -> float:
        if cache is None:
            return eval_attribute_formula(formula, obj, params)
        key = ("a", formula, obj.id)
        if key not in cache:
            cache[key] = eval_attribute_formula(formula, obj, params)
        return cache[key]

    def rel(formula, bound) -> float:
        if cache is None:
            return eval_relation_formula(formula, bound, scene, params)
        key = ("r", formula, tuple(o.id for o in bound))
        if key not in cache:
            cache[key] = eval_relation_formula(formula, bound, scene, params)
        return cache[key]

    rows = []
    wids = [o.id for o in scene.objects]
    for index, alt in enumerate(description.alternatives):
        oids = [o.id for o in alt.objects]
        if len(oids) > len(wids):
            continue
        for combo in itertools.permutations(wids, len(oids)):
            binding = dict(zip(oids, combo))
            scores = [attr(o.formula, scene.by_id(binding[o.id])) for o in alt.objects]
            for edge in alt.relations:
                bound = tuple(scene.by_id(binding[a]) for a in edge.args)
                scores.append(rel(edge.formula, bound))
            likelihood = aggregate(scores, aggregator)
            if likelihood >= floor:
                rows.append((likelihood, index, tuple(sorted(binding.items()))))
    rows.sort(key=lambda row: (-row[0], row[1], row[2]))
    return rows


def engine_rows(recognized) -> list[tuple[float, int, tuple[tuple[str, str], ...]]]:
    return [
        (h.likelihood, h.alternative_index, tuple(sorted(h.binding.items())))
        for h in recognized.hypotheses
    ]


def brute_force_subd_perf(
    alternative: Alternative,
    kept: frozenset[int],
    scene: Scene,
    params=DEFAULT_PARAMS,
    cache: dict | None = None,
):
    """(likelihood, non-ambiguity, leader binding) of one kept-set, from scratch."""
    alt = induced_alternative(SubDescription(alternative, kept))
    rows = brute_force_rows(Description((alt,)), scene, params, cache=cache)
    if not rows:
        return 0.0, 0.0, None
    likelihood, _, binding = rows[0]
    hunt_id = hunt_object(alt).id
    target = dict(binding)[hunt_id]
    competitor = max(
        (lik for lik, _, b in rows if dict(b)[hunt_id] != target), default=0.0
    )
    return likelihood, round(likelihood - competitor, 12), binding


def brute_force_maximal(
    alternative: Alternative, scene: Scene, params=DEFAULT_PARAMS, threshold=None
) -> set[frozenset[int]]:
    from scenematch.redundancy import PerformanceThreshold

    threshold = threshold or PerformanceThreshold()
    items = description_items(alternative)
    droppable = [it.index for it in items if it.droppable]
    core = frozenset(it.index for it in items if not it.droppable)
    cache: dict = {}
    acceptable: dict[frozenset[int], bool] = {}
    for r in range(len(droppable) + 1):
        for combo in itertools.combinations(droppable, r):
            lik, namb, _ = brute_force_subd_perf(
                alternative, core | frozenset(combo), scene, params, cache=cache
            )
            acceptable[frozenset(combo)] = (
                lik >= threshold.min_likelihood and namb >= threshold.min_non_ambiguity
            )
    return {
        core | kept
        for kept, ok in acceptable.items()
        if ok
        and all(not acceptable[kept | {d}] for d in droppable if d not in kept)
    }


def brute_force_kernels(
    alternative: Alternative,
    dn_kept: frozenset[int],
    scene: Scene,
    params=DEFAULT_PARAMS,
) -> set[frozenset[int]]:
    """Removal-minimal kept-subsets whose margin at the dn leader stays positive."""
    _, _, binding = brute_force_subd_perf(alternative, dn_kept, scene, params)
    if binding is None:
        return set()
    items = description_items(alternative)
    core = frozenset(it.index for it in items if not it.droppable)
    dn_droppable = sorted(set(dn_kept) - core)
    hunt_id = hunt_object(alternative).id
    target = dict(binding)[hunt_id]
    cache: dict = {}

    def positive_margin(combo) -> bool:
        alt = induced_alternative(
            SubDescription(alternative, core | frozenset(combo))
        )
        rows = brute_force_rows(Description((alt,)), scene, params, cache=cache)
        at_binding = next(lik for lik, _, b in rows if b == binding)
        competitor = max(
            (lik for lik, _, b in rows if dict(b)[hunt_id] != target), default=0.0
        )
        return round(at_binding - competitor, 12) > 0.0

    satisfied: dict[frozenset[int], bool] = {}
    for r in range(len(dn_droppable) + 1):
        for combo in itertools.combinations(dn_droppable, r):
            satisfied[frozenset(combo)] = positive_margin(combo)
    return {
        core | kept
        for kept, ok in satisfied.items()
        if ok and all(not satisfied[kept - {d}] for d in kept)
    }


# ---------------------------------------------------------------------------
# Seeded random builders
# ---------------------------------------------------------------------------


def random_scene(rng: random.Random, n_objects: int) -> Scene:
    objects = []
    for i in range(n_objects):
        x = rng.randint(0, 560)
        y = rng.randint(0, 440)
        w = rng.randint(3, 80)
        h = rng.randint(3, 80)
        colors = {
            color: round(rng.uniform(0.1, 1.0), 2)
            for color in rng.sample(sorted(vocab.COLOR_ATOMS), rng.randint(0, 2))
        }
        objects.append(
            PerceivedObject(
                id=f"w{i + 1}",
                detected_type=rng.choice(_TYPES),
                detection_confidence=round(rng.uniform(0.1, 1.0), 2),
                bbox=BoundingBox(x, x + w, y, y + h),
                color_degrees=colors,
            )
        )
    return Scene(tuple(objects))


def random_attribute_conjunct(rng: random.Random, depth: int = 0) -> Node:
    roll = rng.random()
    if roll < 0.55 or depth >= 2:
        return AttributeAtom(rng.choice(_ADJECTIVES))
    if roll < 0.7:
        return Not(random_attribute_conjunct(rng, depth + 1))
    children = tuple(
        random_attribute_conjunct(rng, depth + 1) for _ in range(rng.randint(2, 3))
    )
    return Or(children) if roll < 0.9 else And(children)


def random_relation_formula(rng: random.Random, evaluable_only: bool = False) -> Node:
    pool = _FLAT_RELATIONS if evaluable_only else _RELATIONS
    roll = rng.random()
    if roll < 0.6:
        return RelationAtom(rng.choice(pool))
    if roll < 0.75:
        return Not(RelationAtom(rng.choice(pool)))
    children = (RelationAtom(rng.choice(pool)), RelationAtom(rng.choice(pool)))
    return Or(children) if roll < 0.9 else And(children)


def random_description(
    rng: random.Random,
    max_alternatives: int = 2,
    max_objects: int = 3,
    max_conjuncts: int = 3,
    max_edges: int = 2,
    evaluable_only: bool = False,
) -> Description:
    """A random valid description; exactly one hunt per alternative."""
    alternatives = []
    for _ in range(rng.randint(1, max_alternatives)):
        n = rng.randint(1, max_objects)
        hunt_index = rng.randrange(n)
        objects = []
        for i in range(n):
            conjuncts: list[Node] = [AttributeAtom(rng.choice(_TYPES))]
            for _ in range(rng.randint(0, max_conjuncts)):
                conjuncts.append(random_attribute_conjunct(rng))
            rng.shuffle(conjuncts)
            formula = conjuncts[0] if len(conjuncts) == 1 else And(tuple(conjuncts))
            objects.append(ExpectedObject(f"o{i + 1}", formula, is_hunt=i == hunt_index))
        edges = []
        if n >= 2:
            for _ in range(rng.randint(0, max_edges)):
                a, b = rng.sample([o.id for o in objects], 2)
                edges.append(
                    RelationEdge(random_relation_formula(rng, evaluable_only), (a, b))
                )
        alternatives.append(Alternative(tuple(objects), tuple(edges)))
    return Description(tuple(alternatives))


def random_instance(
    rng: random.Random,
    max_scene: int = 6,
    max_objects: int = 3,
    max_conjuncts: int = 2,
    max_edges: int = 2,
) -> tuple[Description, Scene]:
    description = random_description(
        rng,
        max_alternatives=1,
        max_objects=max_objects,
        max_conjuncts=max_conjuncts,
        max_edges=max_edges,
        evaluable_only=True,
    )
    scene = random_scene(rng, rng.randint(1, max_scene))
    return description, scene
