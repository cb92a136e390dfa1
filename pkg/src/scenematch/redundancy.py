"""Redundancy exploitation: sub-descriptions, kernels and reinforced matching.

An operator's description usually says more than is strictly needed.  When
the full description fails the performance requirement (likelihood and
non-ambiguity floors), dropping badly sensed items can restore it; when it
succeeds, dropping items it never needed tells us how much margin it had.

The unit of dropping is the description item: each top-level conjunct of an
object formula that does not carry the object's type atom, and each relation
edge.  Type atoms and hunt markers are never dropped, and dropping an edge
never removes its endpoint objects, so every sub-description still binds the
same object set.

* A *maximal sub-description* is an acceptable kept-set such that restoring
  any single dropped item makes it unacceptable.
* The *kernel* of a sub-description is a removal-minimal kept-set whose best
  explanation is still the same binding: removing any further item lets some
  competitor take the lead (or tie), i.e. the requirement collapses through
  the non-ambiguity side.  When several kernels exist the largest is kept.
* The reported performance pairs the kernel's likelihood at the chosen
  binding with a non-ambiguity computed either over the full description
  (default) or over the maximal sub-description.

The lattice walk is exhaustive over the droppable items (2^n with a hard
cap), memoizing one likelihood vector per visited kept-set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .evaluate import eval_attribute_formula, eval_relation_formula
from .lang import Alternative, And, AttributeAtom, Description, ExpectedObject, Node, Not, Or, RelationAtom, format_formula, hunt_object
from .matching import (
    Aggregator,
    MatchHypothesis,
    MatchingPerformance,
    enumerate_hypotheses,
    non_ambiguity,
    score_hypothesis,
    tidy,
)
from .membership import DEFAULT_PARAMS, MembershipParams
from .scene import Scene
from . import vocab

DEFAULT_DROPPABLE_CAP = 16


class LatticeSizeError(ValueError):
    """More droppable items than the configured cap allows."""


@dataclass(frozen=True)
class PerformanceThreshold:
    min_likelihood: float = 0.6
    min_non_ambiguity: float = 0.3

    def met_by(self, performance: MatchingPerformance) -> bool:
        return (
            performance.likelihood >= self.min_likelihood
            and performance.non_ambiguity >= self.min_non_ambiguity
        )


class AmbiguityScope(Enum):
    FULL_DESCRIPTION = "full"
    MAXIMAL_SUBD = "subd"


# ---------------------------------------------------------------------------
# Description items
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DescriptionItem:
    index: int
    kind: str  # "attribute" or "relation"
    object_id: str | None
    edge_index: int | None
    node: Node | None
    droppable: bool
    label: str


def _flatten_and(node: Node) -> list[Node]:
    if isinstance(node, And):
        out: list[Node] = []
        for child in node.children:
            out.extend(_flatten_and(child))
        return out
    return [node]


def _has_positive_type(node: Node, under_not: bool = False) -> bool:
    if isinstance(node, AttributeAtom):
        return not under_not and node.predicate in vocab.TYPE_ATOMS
    if isinstance(node, Not):
        return _has_positive_type(node.child, True)
    if isinstance(node, (And, Or)):
        return any(_has_positive_type(c, under_not) for c in node.children)
    return False


def description_items(alternative: Alternative) -> tuple[DescriptionItem, ...]:
    """Every countable item of one alternative, droppable or not."""
    items: list[DescriptionItem] = []
    seen: dict[str, int] = {}

    def unique(label: str) -> str:
        seen[label] = seen.get(label, 0) + 1
        return label if seen[label] == 1 else f"{label}#{seen[label]}"

    for obj in alternative.objects:
        for conjunct in _flatten_and(obj.formula):
            droppable = not _has_positive_type(conjunct)
            items.append(
                DescriptionItem(
                    index=len(items),
                    kind="attribute",
                    object_id=obj.id,
                    edge_index=None,
                    node=conjunct,
                    droppable=droppable,
                    label=unique(f"{obj.id}.{format_formula(conjunct)}"),
                )
            )
    for edge_index, edge in enumerate(alternative.relations):
        label = unique(f"{format_formula(edge.formula)}({', '.join(edge.args)})")
        items.append(
            DescriptionItem(
                index=len(items),
                kind="relation",
                object_id=None,
                edge_index=edge_index,
                node=edge.formula,
                droppable=True,
                label=label,
            )
        )
    return tuple(items)


@dataclass(frozen=True)
class SubDescription:
    """A kept subset of one alternative's items (cores always included)."""

    alternative: Alternative
    kept: frozenset[int]

    @staticmethod
    def full(alternative: Alternative) -> "SubDescription":
        return SubDescription(alternative, frozenset(range(len(description_items(alternative)))))

    def kept_labels(self) -> tuple[str, ...]:
        items = description_items(self.alternative)
        return tuple(it.label for it in items if it.index in self.kept)

    def dropped_labels(self) -> tuple[str, ...]:
        items = description_items(self.alternative)
        return tuple(it.label for it in items if it.index not in self.kept)


def induced_alternative(subd: SubDescription) -> Alternative:
    """The alternative that keeps exactly the sub-description's items."""
    items = description_items(subd.alternative)
    objects = []
    for obj in subd.alternative.objects:
        conjuncts = [
            it.node
            for it in items
            if it.kind == "attribute" and it.object_id == obj.id and (not it.droppable or it.index in subd.kept)
        ]
        formula: Node = conjuncts[0] if len(conjuncts) == 1 else And(tuple(conjuncts))
        objects.append(ExpectedObject(obj.id, formula, obj.is_hunt))
    kept_edges = tuple(
        subd.alternative.relations[it.edge_index]
        for it in items
        if it.kind == "relation" and it.index in subd.kept
    )
    return Alternative(tuple(objects), kept_edges)


def evaluate_subd(
    subd: SubDescription,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
) -> tuple[MatchingPerformance, MatchHypothesis | None]:
    """Performance of a sub-description: leader likelihood and non-ambiguity."""
    reduced = Description((induced_alternative(subd),))
    recognized = enumerate_hypotheses(reduced, scene, params, Aggregator.MIN, 0.0)
    leader = recognized.leader()
    if leader is None:
        return MatchingPerformance(0.0, 0.0), None
    return (
        MatchingPerformance(leader.likelihood, non_ambiguity(recognized)),
        leader,
    )


def is_acceptable(
    subd: SubDescription,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
) -> bool:
    performance, _ = evaluate_subd(subd, scene, params, threshold)
    return threshold.met_by(performance)


# ---------------------------------------------------------------------------
# Lattice machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Row:
    binding: tuple[tuple[str, str], ...]  # sorted (expected id, perceived id) pairs
    hunt_pid: str
    core: float
    scores: tuple[float, ...]  # one score per droppable item


class _AltLattice:
    """Per-alternative score table plus exhaustive kept-set evaluation."""

    def __init__(
        self,
        alternative: Alternative,
        alternative_index: int,
        scene: Scene,
        params: MembershipParams,
        *,
        droppable_cap: int = DEFAULT_DROPPABLE_CAP,
        strict: bool = False,
        diagnostics: list[str] | None = None,
    ):
        self.alternative = alternative
        self.alternative_index = alternative_index
        self.scene = scene
        self.params = params
        self.items = description_items(alternative)
        self.droppable = [it for it in self.items if it.droppable]
        if len(self.droppable) > droppable_cap:
            raise LatticeSizeError(
                f"{len(self.droppable)} droppable items exceed the cap of {droppable_cap}"
            )
        self.core_items = [it for it in self.items if not it.droppable]
        self.full_mask = (1 << len(self.droppable)) - 1
        self.rows = self._build_rows(strict, diagnostics)
        self._perfs: dict[int, tuple[int | None, float, float]] | None = None

    # -- rows ---------------------------------------------------------------

    def _build_rows(self, strict: bool, diagnostics: list[str] | None) -> list[_Row]:
        objects = self.alternative.objects
        hunt_id = hunt_object(self.alternative).id
        cores: dict[str, list[Node]] = {o.id: [] for o in objects}
        for it in self.core_items:
            cores[it.object_id].append(it.node)
        # Bindings whose core is already 0 stay 0 for every kept-set, so they
        # can never lead nor raise a competitor above the no-rival floor.
        candidates: dict[str, list[tuple[str, float]]] = {}
        for obj in objects:
            scored = []
            for w in self.scene.objects:
                core = min(
                    (eval_attribute_formula(c, w, self.params) for c in cores[obj.id]),
                    default=1.0,
                )
                if core > 0.0:
                    scored.append((w.id, core))
            candidates[obj.id] = scored
        rows: list[_Row] = []
        order = sorted(objects, key=lambda o: (len(candidates[o.id]), o.id))
        binding: dict[str, str] = {}
        used: set[str] = set()

        def emit() -> None:
            core = min(
                min(c for wid, c in candidates[o.id] if wid == binding[o.id]) for o in order
            )
            scores = []
            for it in self.droppable:
                if it.kind == "attribute":
                    scores.append(
                        eval_attribute_formula(
                            it.node, self.scene.by_id(binding[it.object_id]), self.params
                        )
                    )
                else:
                    edge = self.alternative.relations[it.edge_index]
                    bound = tuple(self.scene.by_id(binding[a]) for a in edge.args)
                    scores.append(
                        eval_relation_formula(
                            edge.formula,
                            bound,
                            self.scene,
                            self.params,
                            strict=strict,
                            diagnostics=diagnostics,
                        )
                    )
            rows.append(
                _Row(
                    binding=tuple(sorted(binding.items())),
                    hunt_pid=binding[hunt_id],
                    core=core,
                    scores=tuple(scores),
                )
            )

        def extend(depth: int) -> None:
            if depth == len(order):
                emit()
                return
            obj = order[depth]
            for wid, _ in candidates[obj.id]:
                if wid in used:
                    continue
                binding[obj.id] = wid
                used.add(wid)
                extend(depth + 1)
                used.discard(wid)
                del binding[obj.id]

        if all(candidates[o.id] for o in objects) and len(objects) <= len(self.scene.objects):
            extend(0)
        rows.sort(key=lambda r: r.binding)
        return rows

    # -- kept-set evaluation ------------------------------------------------

    def _likelihoods(self, mask: int) -> list[float]:
        out = []
        for row in self.rows:
            lik = row.core
            m = mask
            while m:
                low = (m & -m).bit_length() - 1
                lik = min(lik, row.scores[low])
                m &= m - 1
            out.append(lik)
        return out

    def _perf_from(self, liks: list[float]) -> tuple[int | None, float, float]:
        leader = None
        for idx, lik in enumerate(liks):
            if leader is None or lik > liks[leader]:
                leader = idx
        if leader is None:
            return None, 0.0, 0.0
        leader_hunt = self.rows[leader].hunt_pid
        competitor = 0.0
        for idx, lik in enumerate(liks):
            if self.rows[idx].hunt_pid != leader_hunt and lik > competitor:
                competitor = lik
        return leader, liks[leader], tidy(liks[leader] - competitor)

    def all_perfs(self) -> dict[int, tuple[int | None, float, float]]:
        """Leader index, likelihood and non-ambiguity for every kept-set."""
        if self._perfs is not None:
            return self._perfs
        n = len(self.droppable)
        perfs: dict[int, tuple[int | None, float, float]] = {}
        base = [row.core for row in self.rows]

        def visit(mask: int, liks: list[float], start: int) -> None:
            perfs[mask] = self._perf_from(liks)
            for j in range(start, n):
                child = [min(l, row.scores[j]) for l, row in zip(liks, self.rows)]
                visit(mask | (1 << j), child, j + 1)

        visit(0, base, 0)
        self._perfs = perfs
        return perfs

    def performance(self, mask: int) -> MatchingPerformance:
        _, lik, namb = self.all_perfs()[mask]
        return MatchingPerformance(lik, namb)

    def subd(self, mask: int) -> SubDescription:
        kept = {it.index for it in self.core_items}
        for j, it in enumerate(self.droppable):
            if mask >> j & 1:
                kept.add(it.index)
        return SubDescription(self.alternative, frozenset(kept))

    def mask_of(self, subd: SubDescription) -> int:
        mask = 0
        for j, it in enumerate(self.droppable):
            if it.index in subd.kept:
                mask |= 1 << j
        return mask

    def maximal_masks(self, threshold: PerformanceThreshold) -> list[int]:
        perfs = self.all_perfs()

        def ok(mask: int) -> bool:
            _, lik, namb = perfs[mask]
            return lik >= threshold.min_likelihood and namb >= threshold.min_non_ambiguity

        out = []
        for mask in perfs:
            if not ok(mask):
                continue
            dropped = self.full_mask & ~mask
            restorable = []
            m = dropped
            while m:
                bit = m & -m
                restorable.append(bit)
                m &= m - 1
            if all(not ok(mask | bit) for bit in restorable):
                out.append(mask)
        return out

    def kernel_requirements(self, dn_mask: int, leader_index: int) -> dict[int, float]:
        """Strict-leadership margin of every kept-subset of ``dn_mask``.

        The margin is the likelihood at the candidate binding minus the best
        likelihood over bindings hunting a different object; the binding stays
        the unique best explanation exactly while the margin is positive.
        """
        rivals = [
            idx
            for idx, row in enumerate(self.rows)
            if row.hunt_pid != self.rows[leader_index].hunt_pid
        ]
        bits = [j for j in range(len(self.droppable)) if dn_mask >> j & 1]
        margins: dict[int, float] = {}

        def visit(mask: int, liks: list[float], start: int) -> None:
            competitor = max((liks[r] for r in rivals), default=0.0)
            margins[mask] = tidy(liks[leader_index] - competitor)
            for pos in range(start, len(bits)):
                j = bits[pos]
                child = [min(l, row.scores[j]) for l, row in zip(liks, self.rows)]
                visit(mask | (1 << j), child, pos + 1)

        visit(0, [row.core for row in self.rows], 0)
        return margins

    def kernel_masks(self, dn_mask: int, leader_index: int) -> list[int]:
        margins = self.kernel_requirements(dn_mask, leader_index)

        def ok(mask: int) -> bool:
            return margins[mask] > 0.0

        out = []
        for mask in margins:
            if not ok(mask):
                continue
            m = mask
            minimal = True
            while m:
                bit = m & -m
                if ok(mask & ~bit):
                    minimal = False
                    break
                m &= m - 1
            if minimal:
                out.append(mask)
        return out

    def hypothesis_for(self, mask: int, row_index: int) -> MatchHypothesis:
        subd = self.subd(mask)
        binding = dict(self.rows[row_index].binding)
        return score_hypothesis(
            induced_alternative(subd),
            binding,
            self.scene,
            self.params,
            Aggregator.MIN,
            self.alternative_index,
        )

    def likelihood_at(self, mask: int, row_index: int) -> float:
        row = self.rows[row_index]
        lik = row.core
        m = mask
        while m:
            low = (m & -m).bit_length() - 1
            lik = min(lik, row.scores[low])
            m &= m - 1
        return lik

    def ambiguity_at(self, mask: int, row_index: int) -> float:
        """Gap between the chosen binding and its best rival at this kept-set."""
        liks = self._likelihoods(mask)
        hunt = self.rows[row_index].hunt_pid
        competitor = max(
            (lik for idx, lik in enumerate(liks) if self.rows[idx].hunt_pid != hunt),
            default=0.0,
        )
        return max(0.0, tidy(liks[row_index] - competitor))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _subd_sort_key(lattice: _AltLattice):
    def key(mask: int):
        _, lik, _ = lattice.all_perfs()[mask]
        return (-mask.bit_count(), -lik, lattice.subd(mask).kept_labels())

    return key


def maximal_subds(
    alternative: Alternative,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
    *,
    droppable_cap: int = DEFAULT_DROPPABLE_CAP,
) -> list[SubDescription]:
    """All acceptable kept-sets whose every single-item restoration fails."""
    lattice = _AltLattice(alternative, 0, scene, params, droppable_cap=droppable_cap)
    masks = sorted(lattice.maximal_masks(threshold), key=_subd_sort_key(lattice))
    return [lattice.subd(mask) for mask in masks]


def kernels(
    subd: SubDescription,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
    *,
    droppable_cap: int = DEFAULT_DROPPABLE_CAP,
) -> list[SubDescription]:
    """Removal-minimal kept-subsets that keep the sub-description's leader in front.

    Ordered largest first (ties by label); the head of the list is the kernel
    to retain.
    """
    lattice = _AltLattice(subd.alternative, 0, scene, params, droppable_cap=droppable_cap)
    dn_mask = lattice.mask_of(subd)
    leader_index, _, _ = lattice.all_perfs()[dn_mask]
    if leader_index is None:
        return []
    masks = lattice.kernel_masks(dn_mask, leader_index)
    masks.sort(key=lambda m: (-m.bit_count(), lattice.subd(m).kept_labels()))
    return [lattice.subd(mask) for mask in masks]


def description_redundancy(alternative: Alternative, kernel: SubDescription) -> int:
    """Number of items of the full alternative that the kernel does without."""
    return len(description_items(alternative)) - len(kernel.kept)


@dataclass(frozen=True)
class LatticeEntry:
    dropped: tuple[str, ...]
    likelihood: float
    non_ambiguity: float
    acceptable: bool


@dataclass
class RedundancyReport:
    matched: bool
    alternative_index: int | None
    performance: MatchingPerformance
    classic_performance: MatchingPerformance | None = None
    best_subi: MatchHypothesis | None = None
    maximal_subd: SubDescription | None = None
    all_maximal: tuple[SubDescription, ...] = ()
    kernel_candidates: tuple[SubDescription, ...] = ()
    chosen_kernel: SubDescription | None = None
    redundancy: int = 0
    used_redundancy: int = 0
    dropped_items: tuple[str, ...] = ()
    subd_dropped_items: tuple[str, ...] = ()
    ambiguity_scope: AmbiguityScope = AmbiguityScope.FULL_DESCRIPTION
    lattice_trace: tuple[LatticeEntry, ...] | None = None

    def to_doc(self) -> dict:
        doc: dict = {
            "matched": self.matched,
            "alternative": self.alternative_index,
            "performance": {
                "likelihood": self.performance.likelihood,
                "non_ambiguity": self.performance.non_ambiguity,
            },
            "ambiguity_scope": self.ambiguity_scope.value,
            "redundancy": self.redundancy,
            "used_redundancy": self.used_redundancy,
            "dropped_items": list(self.dropped_items),
            "subd_dropped_items": list(self.subd_dropped_items),
        }
        if self.classic_performance is not None:
            doc["classic_performance"] = {
                "likelihood": self.classic_performance.likelihood,
                "non_ambiguity": self.classic_performance.non_ambiguity,
            }
        if self.best_subi is not None:
            doc["binding"] = dict(self.best_subi.binding)
            doc["item_scores"] = dict(self.best_subi.item_scores)
        if self.maximal_subd is not None:
            doc["maximal_subd_kept"] = list(self.maximal_subd.kept_labels())
        if self.chosen_kernel is not None:
            doc["kernel_kept"] = list(self.chosen_kernel.kept_labels())
        if self.lattice_trace is not None:
            doc["lattice"] = [
                {
                    "dropped": list(entry.dropped),
                    "likelihood": entry.likelihood,
                    "non_ambiguity": entry.non_ambiguity,
                    "acceptable": entry.acceptable,
                }
                for entry in self.lattice_trace
            ]
        return doc


def _trace(lattice: _AltLattice, threshold: PerformanceThreshold) -> tuple[LatticeEntry, ...]:
    entries = []
    perfs = lattice.all_perfs()
    for mask in sorted(perfs, key=lambda m: (lattice.full_mask & ~m).bit_count()):
        _, lik, namb = perfs[mask]
        entries.append(
            LatticeEntry(
                dropped=lattice.subd(mask).dropped_labels(),
                likelihood=lik,
                non_ambiguity=namb,
                acceptable=lik >= threshold.min_likelihood and namb >= threshold.min_non_ambiguity,
            )
        )
    return tuple(entries)


def redundancy_report(
    description: Description,
    scene: Scene,
    params: MembershipParams = DEFAULT_PARAMS,
    threshold: PerformanceThreshold = PerformanceThreshold(),
    scope: AmbiguityScope = AmbiguityScope.FULL_DESCRIPTION,
    *,
    droppable_cap: int = DEFAULT_DROPPABLE_CAP,
    verbose: bool = False,
    strict: bool = False,
    diagnostics: list[str] | None = None,
) -> RedundancyReport:
    """Best reinforced match over all alternatives, or the best rejection."""
    best_report: RedundancyReport | None = None
    best_rejected = MatchingPerformance(0.0, 0.0)
    best_rejected_trace: tuple[LatticeEntry, ...] | None = None
    for index, alternative in enumerate(description.alternatives):
        lattice = _AltLattice(
            alternative,
            index,
            scene,
            params,
            droppable_cap=droppable_cap,
            strict=strict,
            diagnostics=diagnostics,
        )
        perfs = lattice.all_perfs()
        trace = _trace(lattice, threshold) if verbose else None
        maximal = sorted(lattice.maximal_masks(threshold), key=_subd_sort_key(lattice))
        if not maximal:
            for mask in perfs:
                _, lik, namb = perfs[mask]
                if (lik, namb) > (best_rejected.likelihood, best_rejected.non_ambiguity):
                    best_rejected = MatchingPerformance(lik, namb)
                    best_rejected_trace = trace
            continue
        dn_mask = min(
            maximal,
            key=lambda m: (
                -perfs[m][1],
                -perfs[m][2],
                -m.bit_count(),
                lattice.subd(m).kept_labels(),
            ),
        )
        leader_index, dn_lik, dn_namb = perfs[dn_mask]
        kernel_masks = lattice.kernel_masks(dn_mask, leader_index)
        kernel_masks.sort(key=lambda m: (-m.bit_count(), lattice.subd(m).kept_labels()))
        # No kept-subset preserves strict leadership only in degenerate ties;
        # the sub-description itself is then its own kernel.
        kernel_mask = kernel_masks[0] if kernel_masks else dn_mask
        kernel = lattice.subd(kernel_mask)
        if scope is AmbiguityScope.FULL_DESCRIPTION:
            ambiguity = lattice.ambiguity_at(lattice.full_mask, leader_index)
        else:
            ambiguity = dn_namb
        performance = MatchingPerformance(
            lattice.likelihood_at(kernel_mask, leader_index), ambiguity
        )
        full_leader, full_lik, full_namb = perfs[lattice.full_mask]
        report = RedundancyReport(
            matched=True,
            alternative_index=index,
            performance=performance,
            classic_performance=MatchingPerformance(full_lik, full_namb),
            best_subi=lattice.hypothesis_for(dn_mask, leader_index),
            maximal_subd=lattice.subd(dn_mask),
            all_maximal=tuple(lattice.subd(m) for m in maximal),
            kernel_candidates=tuple(lattice.subd(m) for m in kernel_masks),
            chosen_kernel=kernel,
            redundancy=description_redundancy(alternative, kernel),
            used_redundancy=(lattice.full_mask & ~dn_mask).bit_count(),
            dropped_items=kernel.dropped_labels(),
            subd_dropped_items=lattice.subd(dn_mask).dropped_labels(),
            ambiguity_scope=scope,
            lattice_trace=trace,
        )
        if best_report is None or (
            report.performance.likelihood,
            report.performance.non_ambiguity,
            -report.alternative_index,
        ) > (
            best_report.performance.likelihood,
            best_report.performance.non_ambiguity,
            -best_report.alternative_index,
        ):
            best_report = report
    if best_report is not None:
        return best_report
    return RedundancyReport(
        matched=False,
        alternative_index=None,
        performance=best_rejected,
        ambiguity_scope=scope,
        lattice_trace=best_rejected_trace,
    )


__all__ = [
    "DEFAULT_DROPPABLE_CAP",
    "LatticeSizeError",
    "PerformanceThreshold",
    "AmbiguityScope",
    "DescriptionItem",
    "description_items",
    "SubDescription",
    "induced_alternative",
    "evaluate_subd",
    "is_acceptable",
    "maximal_subds",
    "kernels",
    "description_redundancy",
    "LatticeEntry",
    "RedundancyReport",
    "redundancy_report",
]
