"""Scoring harness: classic matching vs redundancy exploitation on generated scenes.

Each trial parses one generated description, matches it against the noisy
scene, and asks which perceived object is the target.  The classic strategy
accepts the plain leader only when the full description meets the thresholds;
the redundancy strategy accepts whenever some acceptable sub-description
exists.  A trial is correct when the accepted answer names the ground-truth
object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .generator import GenResult, GenSpec, generate
from .lang import parse_description
from .matching import Aggregator, enumerate_hypotheses, hunt_binding, non_ambiguity
from .membership import DEFAULT_PARAMS, MembershipParams
from .redundancy import AmbiguityScope, PerformanceThreshold, redundancy_report


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    description_index: int
    true_hunt: str
    classic_hunt: str | None
    redundancy_hunt: str | None

    @property
    def classic_correct(self) -> bool:
        return self.classic_hunt == self.true_hunt

    @property
    def redundancy_correct(self) -> bool:
        return self.redundancy_hunt == self.true_hunt


@dataclass(frozen=True)
class AccuracySummary:
    outcomes: tuple[TrialOutcome, ...]

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def classic_accuracy(self) -> float:
        if not self.outcomes:
            return 0.0
        return sum(o.classic_correct for o in self.outcomes) / len(self.outcomes)

    @property
    def redundancy_accuracy(self) -> float:
        if not self.outcomes:
            return 0.0
        return sum(o.redundancy_correct for o in self.outcomes) / len(self.outcomes)


def classic_hunt(
    description,
    scene,
    params: MembershipParams,
    threshold: PerformanceThreshold,
) -> str | None:
    """Leader's hunt object if the full description meets both floors, else None."""
    # Floor 0 keeps sub-threshold competitors visible to the ambiguity check.
    recognized = enumerate_hypotheses(description, scene, params, Aggregator.MIN, 0.0)
    leader = recognized.leader()
    if leader is None or leader.likelihood < threshold.min_likelihood:
        return None
    if non_ambiguity(recognized) < threshold.min_non_ambiguity:
        return None
    return hunt_binding(description, leader)


def redundancy_hunt(
    description,
    scene,
    params: MembershipParams,
    threshold: PerformanceThreshold,
) -> str | None:
    """Hunt object at the best acceptable sub-description's binding, else None."""
    report = redundancy_report(
        description, scene, params, threshold, AmbiguityScope.FULL_DESCRIPTION
    )
    if not report.matched or report.best_subi is None:
        return None
    return hunt_binding(description, report.best_subi)


def run_trial(
    result: GenResult,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
) -> list[TrialOutcome]:
    outcomes = []
    for index, text in enumerate(result.descriptions):
        description = parse_description(text)
        outcomes.append(
            TrialOutcome(
                seed=result.spec.seed,
                description_index=index,
                true_hunt=result.hunt_id,
                classic_hunt=classic_hunt(description, result.scene, params, threshold),
                redundancy_hunt=redundancy_hunt(description, result.scene, params, threshold),
            )
        )
    return outcomes


def accuracy_sweep(
    seeds: Iterable[int] | Sequence[int],
    *,
    clutter: int = 4,
    degrade: float = 0.6,
    false_rate: float = 0.3,
    hidden_rate: float = 0.1,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
) -> AccuracySummary:
    outcomes: list[TrialOutcome] = []
    for seed in seeds:
        spec = GenSpec(
            seed=seed,
            clutter=clutter,
            degrade=degrade,
            false_rate=false_rate,
            hidden_rate=hidden_rate,
        )
        outcomes.extend(run_trial(generate(spec), params, threshold))
    return AccuracySummary(tuple(outcomes))


__all__ = [
    "TrialOutcome",
    "AccuracySummary",
    "classic_hunt",
    "redundancy_hunt",
    "run_trial",
    "accuracy_sweep",
]
