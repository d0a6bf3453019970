"""Concrete page actions and their mutation semantics."""

import re
from dataclasses import dataclass

from .dom import DomDocument, DomNode
from .errors import NoControl, NoSuchNode, NotInteractive
from .paths import PathExpr, resolve_path

CLICK = "Click"
INPUT_TEXT = "InputText"
SELECT_OPTION = "SelectOption"

PAGE_ACTION_KINDS = (CLICK, INPUT_TEXT, SELECT_OPTION)

_HREF_SLOT = re.compile(r"\{([a-zA-Z0-9_-]+)\}")


@dataclass(frozen=True)
class ConcreteAction:
    kind: str
    target: PathExpr
    payload: str | None = None

    def render(self) -> str:
        extra = f" payload={self.payload!r}" if self.payload is not None else ""
        return f"{self.kind.lower()} target={self.target}{extra}"


@dataclass(frozen=True)
class MutationResult:
    changed: bool
    navigated_to: str | None = None
    revealed_nodes: int = 0


def _resolve_href(doc: DomDocument, href: str) -> str:
    """Substitute ``{input-id}`` slots with the current value of that input."""
    def fill(match: re.Match) -> str:
        node = doc.find_by_id(match.group(1))
        if node is None or node.tag != "input":
            raise NoSuchNode(f"href slot {{{match.group(1)}}} names no input")
        return node.attributes.get("value", "")
    return _HREF_SLOT.sub(fill, href)


def _set_radio(doc: DomDocument, node: DomNode) -> bool:
    group = node.attributes.get("name")
    changed = not node.checked
    node.attributes["checked"] = "true"
    if group:
        for other in doc.iter_nodes():
            if other is node or other.tag != "input":
                continue
            if other.input_type == "radio" and other.attributes.get("name") == group:
                if other.checked:
                    changed = True
                other.attributes["checked"] = "false"
    return changed


def _click(doc: DomDocument, node: DomNode) -> MutationResult:
    if node.is_menu:
        before = {id(n) for n in doc.visible_nodes()}
        node.attributes["expanded"] = "false" if node.expanded else "true"
        revealed = sum(1 for n in doc.visible_nodes() if id(n) not in before)
        return MutationResult(changed=True, revealed_nodes=revealed)
    if not node.interactive:
        raise NotInteractive(f"<{node.tag}> does not accept Click")
    if node.tag == "input" and node.input_type == "checkbox":
        node.attributes["checked"] = "false" if node.checked else "true"
        return MutationResult(changed=True)
    if node.tag == "input" and node.input_type == "radio":
        return MutationResult(changed=_set_radio(doc, node))
    href = node.attributes.get("href")
    if href:
        return MutationResult(changed=True, navigated_to=_resolve_href(doc, href))
    if node.tag == "option":
        return MutationResult(changed=_select(node))
    # Interactive but stateless (e.g. a plain button): accepted, no mutation.
    return MutationResult(changed=False)


def _select(option: DomNode) -> bool:
    parent = option.parent
    while parent is not None and parent.tag != "select":
        parent = parent.parent
    if parent is None:
        raise NotInteractive("option has no enclosing select")
    value = option.attributes.get("value", option.text)
    changed = parent.attributes.get("value") != value
    parent.attributes["value"] = value
    return changed


def apply_action(doc: DomDocument, action: ConcreteAction) -> MutationResult:
    """Apply one concrete action; bumps the document revision iff it changed."""
    node = resolve_path(doc, action.target)
    if action.kind == CLICK:
        result = _click(doc, node)
    elif action.kind == INPUT_TEXT:
        if node.tag != "input" or node.input_type in ("checkbox", "radio"):
            raise NotInteractive(f"<{node.tag}> does not accept InputText")
        changed = node.attributes.get("value") != action.payload
        node.attributes["value"] = action.payload or ""
        result = MutationResult(changed=changed)
    elif action.kind == SELECT_OPTION:
        if node.tag != "option":
            raise NotInteractive(f"<{node.tag}> does not accept SelectOption")
        result = MutationResult(changed=_select(node))
    else:
        raise NotInteractive(f"unknown action kind {action.kind!r}")
    if result.changed:
        doc.revision += 1
    return result


def associated_control(doc: DomDocument, text_node: DomNode) -> DomNode:
    """The control a click on a piece of highlighted text should act on.

    Resolution order: the node itself when interactive, then its ``for``
    reference, then the nearest interactive descendant, then the nearest
    interactive node inside the same li/td ancestor.
    """
    if text_node.interactive:
        return text_node
    ref = text_node.attributes.get("for")
    if ref:
        target = doc.find_by_id(ref)
        if target is not None and target.interactive:
            return target
    # Breadth-first so the shallowest descendant wins.
    queue = list(text_node.children)
    while queue:
        node = queue.pop(0)
        if node.interactive:
            return node
        queue.extend(node.children)
    ancestor = text_node.parent
    while ancestor is not None and ancestor.tag not in ("li", "td"):
        ancestor = ancestor.parent
    if ancestor is not None:
        for node in ancestor.iter_subtree():
            if node is text_node:
                continue
            if node.interactive:
                return node
    raise NoControl(f"no control associated with {text_node!r}")


def control_states(doc: DomDocument) -> dict[str, dict]:
    """Snapshot of every stateful control, keyed by id (path when missing)."""
    from .paths import node_path

    states: dict[str, dict] = {}
    for node in doc.iter_nodes():
        key = node.node_id or str(node_path(doc, node))
        if node.tag == "input":
            if node.input_type in ("checkbox", "radio"):
                states[key] = {"checked": node.checked}
            else:
                states[key] = {"value": node.attributes.get("value", "")}
        elif node.tag == "select":
            states[key] = {"value": node.attributes.get("value", "")}
    return states
