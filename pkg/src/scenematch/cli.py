"""Command-line front end.

Subcommands: ``match`` (ranked hypotheses), ``redundancy`` (reinforced match
with kernel and dropped items), ``parse`` (canonical form plus tree dump),
``gen`` (seeded synthetic scenario) and ``params`` (effective membership
parameters).  Exit codes: 0 success / qualifying match, 1 no qualifying
match, 2 input or usage error.
"""

from __future__ import annotations

import json
import sys

import click

from .evaluate import UnevaluableRelationError
from .generator import GenSpec, generate
from .lang import (
    And,
    AttributeAtom,
    Description,
    DescriptionError,
    Node,
    Not,
    Or,
    RelationAtom,
    format_formula,
    parse_description,
    print_description,
    validate_description,
)
from .matching import Aggregator, enumerate_hypotheses, non_ambiguity
from .membership import DEFAULT_PARAMS, MembershipParams, dump_params, load_params_file
from .redundancy import AmbiguityScope, PerformanceThreshold, redundancy_report
from .scene import Scene, SceneFormatError, load_scene_file

_AGGREGATORS = {"min": Aggregator.MIN, "geomean": Aggregator.GEOMEAN}
_SCOPES = {"full": AmbiguityScope.FULL_DESCRIPTION, "subd": AmbiguityScope.MAXIMAL_SUBD}


def _load_description(desc: str | None, desc_text: str | None) -> Description:
    if (desc is None) == (desc_text is None):
        raise click.UsageError("provide exactly one of --desc or --desc-text")
    if desc is not None:
        try:
            with open(desc, "r", encoding="utf-8") as handle:
                desc_text = handle.read()
        except OSError as exc:
            raise click.UsageError(f"cannot read description file: {exc}")
    try:
        description = parse_description(desc_text)
    except DescriptionError as exc:
        raise click.UsageError(f"description error: {exc}")
    problems = validate_description(description)
    if problems:
        lines = "; ".join(f"{p.where}: {p.message}" for p in problems)
        raise click.UsageError(f"invalid description: {lines}")
    return description


def _load_scene(path: str | None) -> Scene:
    if path is None:
        raise click.UsageError("--scene is required")
    try:
        return load_scene_file(path)
    except OSError as exc:
        raise click.UsageError(f"cannot read scene file: {exc}")
    except (SceneFormatError, ValueError) as exc:
        raise click.UsageError(f"scene error: {exc}")


def _load_params(path: str | None) -> MembershipParams:
    if path is None:
        return DEFAULT_PARAMS
    try:
        return load_params_file(path)
    except OSError as exc:
        raise click.UsageError(f"cannot read params file: {exc}")
    except (SceneFormatError, ValueError) as exc:
        raise click.UsageError(f"params error: {exc}")


def _threshold(min_likelihood: float, min_ambiguity: float) -> PerformanceThreshold:
    for name, value in (("--min-likelihood", min_likelihood), ("--min-ambiguity", min_ambiguity)):
        if not 0.0 <= value <= 1.0:
            raise click.UsageError(f"{name} must be in [0, 1], got {value}")
    return PerformanceThreshold(min_likelihood, min_ambiguity)


def _emit_notes(diagnostics: list[str]) -> None:
    for note in dict.fromkeys(diagnostics):
        click.echo(f"note: {note}", err=True)


def _common_options(command):
    for option in reversed(
        [
            click.option("--scene", "scene_path", type=click.Path(), help="Scene document (JSON)."),
            click.option("--desc", "desc_path", type=click.Path(), help="Description file."),
            click.option("--desc-text", help="Inline description text."),
            click.option("--min-likelihood", default=0.6, show_default=True, help="Likelihood floor."),
            click.option("--min-ambiguity", default=0.3, show_default=True, help="Non-ambiguity floor."),
            click.option(
                "--aggregator",
                type=click.Choice(sorted(_AGGREGATORS)),
                default="min",
                show_default=True,
            ),
            click.option(
                "--ambiguity-scope",
                type=click.Choice(sorted(_SCOPES)),
                default="full",
                show_default=True,
            ),
            click.option("--params", "params_path", type=click.Path(), help="Membership parameter overlay (JSON)."),
            click.option(
                "--format",
                "output_format",
                type=click.Choice(["text", "json"]),
                default="text",
                show_default=True,
            ),
            click.option("--strict", is_flag=True, help="Fail on relations the geometry cannot decide."),
            click.option("-v", "--verbose", count=True),
        ]
    ):
        command = option(command)
    return command


@click.group()
def main() -> None:
    """Match logical scene descriptions against perceived objects."""


@main.command()
@_common_options
def match(
    scene_path,
    desc_path,
    desc_text,
    min_likelihood,
    min_ambiguity,
    aggregator,
    ambiguity_scope,
    params_path,
    output_format,
    strict,
    verbose,
) -> None:
    """Rank every injective binding of the description against the scene."""
    threshold = _threshold(min_likelihood, min_ambiguity)
    description = _load_description(desc_path, desc_text)
    scene = _load_scene(scene_path)
    params = _load_params(params_path)
    notes: list[str] = []
    try:
        recognized = enumerate_hypotheses(
            description,
            scene,
            params,
            _AGGREGATORS[aggregator],
            threshold.min_likelihood,
            strict=strict,
            diagnostics=notes,
        )
    except UnevaluableRelationError as exc:
        raise click.UsageError(str(exc))
    _emit_notes(notes)
    ambiguity = non_ambiguity(recognized)
    if output_format == "json":
        doc = {
            "hypotheses": [
                {
                    "rank": rank,
                    "alternative": h.alternative_index,
                    "likelihood": h.likelihood,
                    "binding": dict(h.binding),
                    "item_scores": dict(h.item_scores),
                }
                for rank, h in enumerate(recognized.hypotheses, start=1)
            ],
            "non_ambiguity": ambiguity,
        }
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        if not recognized.hypotheses:
            click.echo("no hypothesis reaches the likelihood floor")
        for rank, h in enumerate(recognized.hypotheses, start=1):
            binding = ", ".join(f"{k} -> {v}" for k, v in sorted(h.binding.items()))
            click.echo(f"hypothesis {rank}: pi = {h.likelihood:.3f}  ({binding})")
            if verbose:
                scores = "  ".join(f"{k}={v:.3f}" for k, v in sorted(h.item_scores.items()))
                click.echo(f"  alternative {h.alternative_index + 1}  {scores}")
        if recognized.hypotheses:
            click.echo(f"non-ambiguity: {ambiguity:.3f}")
    sys.exit(0 if recognized.hypotheses else 1)


@main.command()
@_common_options
def redundancy(
    scene_path,
    desc_path,
    desc_text,
    min_likelihood,
    min_ambiguity,
    aggregator,
    ambiguity_scope,
    params_path,
    output_format,
    strict,
    verbose,
) -> None:
    """Reinforced match: best acceptable sub-description, kernel and scores."""
    threshold = _threshold(min_likelihood, min_ambiguity)
    description = _load_description(desc_path, desc_text)
    scene = _load_scene(scene_path)
    params = _load_params(params_path)
    notes: list[str] = []
    try:
        report = redundancy_report(
            description,
            scene,
            params,
            threshold,
            _SCOPES[ambiguity_scope],
            verbose=verbose > 0,
            strict=strict,
            diagnostics=notes,
        )
    except UnevaluableRelationError as exc:
        raise click.UsageError(str(exc))
    _emit_notes(notes)
    if output_format == "json":
        click.echo(json.dumps(report.to_doc(), indent=2, sort_keys=True))
    else:
        if not report.matched:
            click.echo("no acceptable sub-description")
            click.echo(
                "best rejected performance: likelihood = "
                f"{report.performance.likelihood:.3f}, "
                f"non-ambiguity = {report.performance.non_ambiguity:.3f}"
            )
        else:
            assert report.best_subi is not None and report.chosen_kernel is not None
            binding = ", ".join(f"{k} -> {v}" for k, v in sorted(report.best_subi.binding.items()))
            click.echo(f"match: alternative {report.alternative_index + 1}  ({binding})")
            click.echo(f"maximal sub-description drops: {_fmt_items(report.subd_dropped_items)}")
            click.echo(f"kernel keeps: {_fmt_items(report.chosen_kernel.kept_labels())}")
            click.echo(f"kernel drops: {_fmt_items(report.dropped_items)}")
            click.echo(f"redundancy: {report.redundancy}")
            click.echo(f"used redundancy: {report.used_redundancy}")
            click.echo(
                f"performance: likelihood = {report.performance.likelihood:.3f}, "
                f"non-ambiguity = {report.performance.non_ambiguity:.3f} "
                f"(scope: {report.ambiguity_scope.value})"
            )
            assert report.classic_performance is not None
            click.echo(
                "classic performance: likelihood = "
                f"{report.classic_performance.likelihood:.3f}, "
                f"non-ambiguity = {report.classic_performance.non_ambiguity:.3f}"
            )
        if verbose and report.lattice_trace is not None:
            click.echo("lattice:")
            for entry in report.lattice_trace:
                flag = "ok" if entry.acceptable else "--"
                click.echo(
                    f"  [{flag}] drop {_fmt_items(entry.dropped)}: "
                    f"likelihood = {entry.likelihood:.3f}, "
                    f"non-ambiguity = {entry.non_ambiguity:.3f}"
                )
    sys.exit(0 if report.matched else 1)


def _fmt_items(labels) -> str:
    return "{" + ", ".join(labels) + "}"


def _dump_node(node: Node, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(node, AttributeAtom):
        lines.append(f"{pad}attribute {node.predicate}")
    elif isinstance(node, RelationAtom):
        lines.append(f"{pad}relation {node.predicate}")
    elif isinstance(node, Not):
        lines.append(f"{pad}not")
        _dump_node(node.child, indent + 1, lines)
    elif isinstance(node, (And, Or)):
        lines.append(f"{pad}{'and' if isinstance(node, And) else 'or'}")
        for child in node.children:
            _dump_node(child, indent + 1, lines)


@main.command(name="parse")
@click.option("--desc", "desc_path", type=click.Path(), help="Description file.")
@click.option("--desc-text", help="Inline description text.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
def parse_cmd(desc_path, desc_text, output_format) -> None:
    """Parse a description and print its canonical form and structure."""
    description = _load_description(desc_path, desc_text)
    if output_format == "json":
        click.echo(json.dumps(_description_doc(description), indent=2, sort_keys=True))
        return
    click.echo(print_description(description))
    for index, alternative in enumerate(description.alternatives, start=1):
        click.echo(f"alternative {index}:")
        for obj in alternative.objects:
            hunt = "  [hunt]" if obj.is_hunt else ""
            click.echo(f"  object {obj.id}{hunt}")
            lines: list[str] = []
            _dump_node(obj.formula, 2, lines)
            for line in lines:
                click.echo(line)
        for edge in alternative.relations:
            click.echo(f"  relation {format_formula(edge.formula)}({', '.join(edge.args)})")


def _description_doc(description: Description) -> dict:
    def node_doc(node: Node) -> dict:
        if isinstance(node, AttributeAtom):
            return {"atom": node.predicate}
        if isinstance(node, RelationAtom):
            return {"relation": node.predicate}
        if isinstance(node, Not):
            return {"not": node_doc(node.child)}
        op = "and" if isinstance(node, And) else "or"
        return {op: [node_doc(c) for c in node.children]}

    return {
        "canonical": print_description(description),
        "alternatives": [
            {
                "objects": [
                    {"id": o.id, "hunt": o.is_hunt, "formula": node_doc(o.formula)}
                    for o in alt.objects
                ],
                "relations": [
                    {"formula": node_doc(e.formula), "args": list(e.args)} for e in alt.relations
                ],
            }
            for alt in description.alternatives
        ],
    }


@main.command()
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--clutter", default=4, show_default=True, type=int)
@click.option("--degrade", default=0.0, show_default=True, type=float)
@click.option("--false-rate", default=0.0, show_default=True, type=float)
@click.option("--hidden-rate", default=0.0, show_default=True, type=float)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json"]),
    default="json",
    show_default=True,
)
def gen(seed, clutter, degrade, false_rate, hidden_rate, output_format) -> None:
    """Generate a seeded synthetic scene with ground truth and descriptions."""
    try:
        spec = GenSpec(
            seed=seed,
            clutter=clutter,
            degrade=degrade,
            false_rate=false_rate,
            hidden_rate=hidden_rate,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    result = generate(spec)
    if output_format == "json":
        click.echo(result.to_json(), nl=False)
        return
    click.echo(f"seed {spec.seed}: {len(result.scene.objects)} objects, hunt = {result.hunt_id}")
    for text in result.descriptions:
        click.echo(f"description: {text}")
    for obj in result.scene.objects:
        click.echo(
            f"  {obj.id}: {obj.detected_type} conf={obj.detection_confidence:.2f} "
            f"bbox={obj.bbox.as_list()}"
        )


@main.command(name="params")
@click.option("--params", "params_path", type=click.Path(), help="Membership parameter overlay (JSON).")
def params_cmd(params_path) -> None:
    """Print the effective membership parameters as a reusable document."""
    click.echo(dump_params(_load_params(params_path)), nl=False)


if __name__ == "__main__":
    main()
