"""Hypothesis enumeration, scoring and ranking.

A hypothesis is an injective binding of one alternative's expected objects to
perceived objects.  Its item scores are the possibility of each object
formula on its bound object plus the possibility of each relation edge on the
bound tuple; the likelihood aggregates those scores.

Under the ``MIN`` aggregator the search prunes any partial binding whose
running minimum is already below the requested likelihood floor; ``GEOMEAN``
(n-th root of the product) rewards descriptions whose items reinforce each
other and is computed exhaustively.  Ranking is deterministic: likelihood
descending, then alternative index, then the sorted binding pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .evaluate import eval_attribute_formula, eval_relation_formula
from .lang import Alternative, Description, hunt_object
from .membership import DEFAULT_PARAMS, MembershipParams
from .scene import PerceivedObject, Scene


class Aggregator(Enum):
    MIN = "min"
    GEOMEAN = "geomean"


def tidy(value: float) -> float:
    """Snap a difference of decimal-valued scores back onto its decimal value."""
    return round(value, 12)


def aggregate(scores: list[float], aggregator: Aggregator) -> float:
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    if aggregator is Aggregator.MIN:
        return min(scores)
    mean = math.prod(scores) ** (1.0 / len(scores))
    # The root can drift a few ulps outside the score range; pin it back.
    return min(max(mean, min(scores)), max(scores))


@dataclass(frozen=True)
class MatchingPerformance:
    likelihood: float
    non_ambiguity: float


@dataclass
class MatchHypothesis:
    alternative_index: int
    binding: dict[str, str]  # expected object id -> perceived object id
    item_scores: dict[str, float]  # object ids plus "r1", "r2", ... edge keys
    likelihood: float

    def sort_key(self):
        return (-self.likelihood, self.alternative_index, sorted(self.binding.items()))


@dataclass
class RecognizedScene:
    description: Description
    hypotheses: tuple[MatchHypothesis, ...]

    def leader(self) -> MatchHypothesis | None:
        return self.hypotheses[0] if self.hypotheses else None


def edge_key(index: int) -> str:
    return f"r{index + 1}"


def object_match(
    expected, perceived: PerceivedObject, params: MembershipParams = DEFAULT_PARAMS
) -> float:
    """Possibility that one perceived object satisfies an expected object's formula."""
    return eval_attribute_formula(expected.formula, perceived, params)


def hunt_binding(description: Description, hypothesis: MatchHypothesis) -> str:
    """Perceived id bound to the hypothesis' hunt object."""
    alt = description.alternatives[hypothesis.alternative_index]
    return hypothesis.binding[hunt_object(alt).id]


def score_hypothesis(
    alternative: Alternative,
    binding: dict[str, str],
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    aggregator: Aggregator = Aggregator.MIN,
    alternative_index: int = 0,
    *,
    strict: bool = False,
    diagnostics: list[str] | None = None,
) -> MatchHypothesis:
    item_scores: dict[str, float] = {}
    for obj in alternative.objects:
        item_scores[obj.id] = object_match(obj, scene.by_id(binding[obj.id]), params)
    for idx, edge in enumerate(alternative.relations):
        bound = tuple(scene.by_id(binding[a]) for a in edge.args)
        item_scores[edge_key(idx)] = eval_relation_formula(
            edge.formula, bound, scene, params, strict=strict, diagnostics=diagnostics
        )
    likelihood = aggregate(list(item_scores.values()), aggregator)
    return MatchHypothesis(alternative_index, dict(binding), item_scores, likelihood)


def _search_alternative(
    alternative: Alternative,
    alternative_index: int,
    scene: Scene,
    params: MembershipParams,
    aggregator: Aggregator,
    min_likelihood: float,
    strict: bool,
    diagnostics: list[str] | None,
    out: list[MatchHypothesis],
) -> None:
    pruning = aggregator is Aggregator.MIN
    candidates: dict[str, list[tuple[str, float]]] = {}
    for obj in alternative.objects:
        scored = [(w.id, object_match(obj, w, params)) for w in scene.objects]
        if pruning:
            scored = [(wid, s) for wid, s in scored if s >= min_likelihood]
        candidates[obj.id] = scored
    if any(not candidates[obj.id] for obj in alternative.objects):
        return

    # Most-constrained object first keeps the search tree small.
    order = sorted(alternative.objects, key=lambda o: (len(candidates[o.id]), o.id))
    placed = {order[i].id: i for i in range(len(order))}
    # An edge is checked as soon as its later argument is bound.
    ready: list[list[tuple[int, tuple[str, ...]]]] = [[] for _ in order]
    for idx, edge in enumerate(alternative.relations):
        last = max(placed[a] for a in edge.args)
        ready[last].append((idx, edge.args))

    binding: dict[str, str] = {}
    used: set[str] = set()

    def extend(depth: int, running_min: float) -> None:
        if depth == len(order):
            hyp = score_hypothesis(
                alternative,
                binding,
                scene,
                params,
                aggregator,
                alternative_index,
                strict=strict,
                diagnostics=None,
            )
            if hyp.likelihood >= min_likelihood:
                out.append(hyp)
            return
        obj = order[depth]
        for wid, score in candidates[obj.id]:
            if wid in used:
                continue
            new_min = min(running_min, score)
            if pruning and new_min < min_likelihood:
                continue
            binding[obj.id] = wid
            used.add(wid)
            ok = True
            for idx, args in ready[depth]:
                bound = tuple(scene.by_id(binding[a]) for a in args)
                degree = eval_relation_formula(
                    alternative.relations[idx].formula,
                    bound,
                    scene,
                    params,
                    strict=strict,
                    diagnostics=diagnostics,
                )
                new_min = min(new_min, degree)
                if pruning and new_min < min_likelihood:
                    ok = False
                    break
            if ok:
                extend(depth + 1, new_min)
            used.discard(wid)
            del binding[obj.id]

    extend(0, 1.0)


def enumerate_hypotheses(
    description: Description,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    aggregator: Aggregator = Aggregator.MIN,
    min_likelihood: float = 0.0,
    *,
    strict: bool = False,
    diagnostics: list[str] | None = None,
) -> RecognizedScene:
    """All injective bindings of every alternative with likelihood >= the floor."""
    found: list[MatchHypothesis] = []
    for index, alternative in enumerate(description.alternatives):
        if len(alternative.objects) > len(scene.objects):
            continue
        _search_alternative(
            alternative,
            index,
            scene,
            params,
            aggregator,
            min_likelihood,
            strict,
            diagnostics,
            found,
        )
    found.sort(key=MatchHypothesis.sort_key)
    return RecognizedScene(description, tuple(found))


def non_ambiguity(recognized: RecognizedScene, *, competitor: str = "hunt") -> float:
    """Leader likelihood minus the best differently-bound competitor's.

    With ``competitor="hunt"`` (the default) only hypotheses whose hunt object
    is bound elsewhere compete; ``competitor="binding"`` treats any differing
    binding as a competitor.  No hypotheses, or no competitor, gives 0 and the
    leader's full likelihood respectively.
    """
    leader = recognized.leader()
    if leader is None:
        return 0.0
    if competitor == "hunt":
        leader_target = hunt_binding(recognized.description, leader)
        rival = next(
            (
                h
                for h in recognized.hypotheses
                if hunt_binding(recognized.description, h) != leader_target
            ),
            None,
        )
    elif competitor == "binding":
        rival = next((h for h in recognized.hypotheses if h.binding != leader.binding), None)
    else:
        raise ValueError(f"competitor must be 'hunt' or 'binding', got {competitor!r}")
    return tidy(leader.likelihood - (rival.likelihood if rival is not None else 0.0))


def recognized_performance(recognized: RecognizedScene, *, competitor: str = "hunt") -> MatchingPerformance:
    leader = recognized.leader()
    likelihood = leader.likelihood if leader is not None else 0.0
    return MatchingPerformance(likelihood, non_ambiguity(recognized, competitor=competitor))


__all__ = [
    "Aggregator",
    "tidy",
    "aggregate",
    "MatchingPerformance",
    "MatchHypothesis",
    "RecognizedScene",
    "edge_key",
    "object_match",
    "hunt_binding",
    "score_hypothesis",
    "enumerate_hypotheses",
    "non_ambiguity",
    "recognized_performance",
]
