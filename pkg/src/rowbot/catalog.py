"""Catalog of demonstrated step-to-action mappings.

Each entry pairs a step description with the action template distilled from
its demonstration. At execution time the template is re-grounded on the
current page: the semantic target is searched with the *new* step's text, so
an entry taught as "a side of soup" can pick "Daily Soup" on a page it has
never seen.
"""

import json
from dataclasses import dataclass

from .actions import CLICK, ConcreteAction, apply_action, associated_control
from .dom import DomDocument, text_candidates
from .errors import (EmptyDemonstration, MultipleSemanticActs, NoControl,
                     NoSuchNode, StructuralDrift, TargetNotFound)
from .paths import PathExpr, PathSeg, node_path, resolve_path
from .semantics import (EmbeddingVector, HashedTokenEmbedder, Lexicon,
                        StepText, best_match, similarity)
from .synthesis import ActionEvent
from .templates import (ActionTemplate, BoundInput, FixedAction, Reveal,
                        SemanticTarget)


@dataclass(frozen=True)
class CatalogEntry:
    key: StepText
    embedding: EmbeddingVector
    template: ActionTemplate
    demonstrated_on: str
    order: int


@dataclass(frozen=True)
class MatchResult:
    entry: CatalogEntry | None
    score: float

    @property
    def hit(self) -> bool:
        return self.entry is not None


@dataclass(frozen=True)
class SemanticMatch:
    """Where the semantic search landed during an instantiation."""
    text: str
    text_path: PathExpr
    control_path: PathExpr
    score: float


def build_template(events: list[ActionEvent]) -> ActionTemplate:
    """Distill recorded events into a template.

    The event that acted on the highlighted text's control becomes the
    semantic target; menu clicks before it become reveals; everything else is
    replayed verbatim.
    """
    page_events = [e for e in events if e.is_page_action]
    if not page_events:
        raise EmptyDemonstration("no page actions were recorded for this step")
    semantic_indices = [
        i for i, e in enumerate(page_events)
        if e.highlight_control is not None and e.target == e.highlight_control
    ]
    if len(semantic_indices) > 1:
        raise MultipleSemanticActs(
            f"{len(semantic_indices)} events acted on highlighted content")
    semantic_at = semantic_indices[0] if semantic_indices else -1
    items = []
    for i, event in enumerate(page_events):
        if i == semantic_at:
            items.append(SemanticTarget(event.kind))
        elif event.target_tag == "menu" and event.kind == CLICK and \
                (semantic_at < 0 or i < semantic_at):
            items.append(Reveal(event.target))
        else:
            items.append(FixedAction(event.kind, event.target, event.payload))
    return ActionTemplate(tuple(items))


class Catalog:
    def __init__(self, lexicon: Lexicon, embedder: HashedTokenEmbedder):
        self.lexicon = lexicon
        self.embedder = embedder
        self.entries: list[CatalogEntry] = []

    def __len__(self):
        return len(self.entries)

    def record_mapping(self, step: StepText, events: list[ActionEvent],
                       page_id: str) -> CatalogEntry:
        template = build_template(events)
        entry = CatalogEntry(
            key=step,
            embedding=self.embedder.embed(step.normalized, self.lexicon),
            template=template,
            demonstrated_on=page_id,
            order=len(self.entries),
        )
        self.entries.append(entry)
        return entry

    def pop_last(self) -> CatalogEntry | None:
        """Drop the newest entry; only the carousel rewind may call this."""
        return self.entries.pop() if self.entries else None

    def lookup(self, step: StepText, tau_c: float) -> MatchResult:
        """Best entry at or above tau_c; earliest-recorded entry wins ties."""
        qv = self.embedder.embed(step.normalized, self.lexicon)
        best: CatalogEntry | None = None
        best_score = 0.0
        for entry in self.entries:
            score = similarity(qv, entry.embedding)
            if best is None or score > best_score:
                best, best_score = entry, score
        if best is None or best_score < tau_c:
            return MatchResult(None, best_score)
        return MatchResult(best, best_score)

    def export(self) -> str:
        payload = [_entry_to_dict(e) for e in self.entries]
        return json.dumps({"entries": payload}, indent=2, sort_keys=False) + "\n"

    @classmethod
    def import_(cls, text: str, lexicon: Lexicon,
                embedder: HashedTokenEmbedder) -> "Catalog":
        catalog = cls(lexicon, embedder)
        for record in json.loads(text)["entries"]:
            step = StepText(record["key"], record["normalized"])
            catalog.entries.append(CatalogEntry(
                key=step,
                embedding=embedder.embed(step.normalized, lexicon),
                template=_template_from_dict(record["template"]),
                demonstrated_on=record["page"],
                order=len(catalog.entries),
            ))
        return catalog


def _path_to_dict(path: PathExpr) -> dict:
    return {
        "segments": [
            {"tag": s.tag, "index": s.index} if s.var is None
            else {"tag": s.tag, "var": s.var}
            for s in path.segments
        ],
        "observed": {name: list(values) for name, values in path.observed},
    }


def _path_from_dict(data: dict) -> PathExpr:
    segments = tuple(
        PathSeg(s["tag"], s.get("index"), s.get("var"))
        for s in data["segments"]
    )
    observed = tuple((k, tuple(v)) for k, v in data.get("observed", {}).items())
    return PathExpr(segments, observed)


def _entry_to_dict(entry: CatalogEntry) -> dict:
    items = []
    for item in entry.template.items:
        if isinstance(item, FixedAction):
            items.append({"type": "fixed", "kind": item.kind,
                          "target": _path_to_dict(item.target),
                          "payload": item.payload})
        elif isinstance(item, Reveal):
            items.append({"type": "reveal", "target": _path_to_dict(item.target)})
        elif isinstance(item, SemanticTarget):
            items.append({"type": "semantic", "kind": item.kind})
        elif isinstance(item, BoundInput):
            items.append({"type": "bound-input",
                          "target": _path_to_dict(item.target),
                          "column": item.binding.column_index})
    return {"key": entry.key.raw, "normalized": entry.key.normalized,
            "page": entry.demonstrated_on, "template": {"items": items}}


def _template_from_dict(data: dict) -> ActionTemplate:
    from .templates import ColumnBinding

    items: list = []
    for item in data["items"]:
        if item["type"] == "fixed":
            items.append(FixedAction(item["kind"], _path_from_dict(item["target"]),
                                     item.get("payload")))
        elif item["type"] == "reveal":
            items.append(Reveal(_path_from_dict(item["target"])))
        elif item["type"] == "semantic":
            items.append(SemanticTarget(item["kind"]))
        elif item["type"] == "bound-input":
            items.append(BoundInput(_path_from_dict(item["target"]),
                                    ColumnBinding(item["column"])))
    return ActionTemplate(tuple(items))


def resolve_template_path(doc: DomDocument, path: PathExpr):
    """Resolve a possibly-generalized path, trying observed indices in order."""
    if not path.variables:
        return resolve_path(doc, path)
    var = path.variables[0]
    last_error: NoSuchNode | None = None
    for value in path.observed_values(var):
        try:
            return resolve_path(doc, path, {var: value})
        except NoSuchNode as exc:
            last_error = exc
    raise last_error or NoSuchNode(f"{path} has no observed bindings")


def instantiate(entry: CatalogEntry, step: StepText, doc: DomDocument,
                row: list[str], tau: float, lexicon: Lexicon,
                embedder: HashedTokenEmbedder,
                ) -> tuple[list[ConcreteAction], SemanticMatch | None]:
    """Ground a catalog template against the current page for a new step.

    Works on a scratch copy of the page so reveals take effect before the
    semantic search runs, without touching the live document. The returned
    actions resolve on the page as handed in.
    """
    working = doc.clone()
    actions: list[ConcreteAction] = []
    match: SemanticMatch | None = None

    def emit(action: ConcreteAction, is_last: bool):
        result = apply_action(working, action)
        if result.navigated_to and not is_last:
            raise StructuralDrift(
                f"template navigates to {result.navigated_to!r} mid-sequence")
        actions.append(action)

    items = entry.template.items
    for index, item in enumerate(items):
        is_last = index == len(items) - 1
        if isinstance(item, Reveal):
            try:
                node = resolve_template_path(working, item.target)
            except NoSuchNode as exc:
                raise StructuralDrift(str(exc)) from exc
            if node.is_menu and not node.expanded:
                emit(ConcreteAction(CLICK, node_path(working, node)), is_last)
        elif isinstance(item, FixedAction):
            try:
                node = resolve_template_path(working, item.target)
            except NoSuchNode as exc:
                raise StructuralDrift(str(exc)) from exc
            emit(ConcreteAction(item.kind, node_path(working, node), item.payload),
                 is_last)
        elif isinstance(item, BoundInput):
            if item.binding.column_index >= len(row):
                raise StructuralDrift(
                    f"row has no column {item.binding.column_index}")
            try:
                node = resolve_template_path(working, item.target)
            except NoSuchNode as exc:
                raise StructuralDrift(str(exc)) from exc
            emit(ConcreteAction("InputText", node_path(working, node),
                                row[item.binding.column_index].strip()), is_last)
        elif isinstance(item, SemanticTarget):
            found = best_match(step, text_candidates(working), tau,
                               lexicon, embedder)
            if found is None:
                raise TargetNotFound(
                    f"no page text matches step {step.raw!r} at tau={tau}")
            text_node, score = found
            try:
                control = associated_control(working, text_node)
            except NoControl as exc:
                raise TargetNotFound(str(exc)) from exc
            control_path = node_path(working, control)
            match = SemanticMatch(text_node.text, node_path(working, text_node),
                                  control_path, score)
            payload = control.attributes.get("value", control.text) \
                if item.kind == "SelectOption" else None
            emit(ConcreteAction(item.kind, control_path, payload), is_last)
    return actions, match
