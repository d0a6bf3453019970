"""Simplified DOM over a closed markup subset.

Pages in the mock-site corpus are written in a small HTML-like language with
a fixed tag set and no CSS or scripting. A ``menu`` element doubles as a
header and a container: its own text stays visible, but while its
``expanded`` attribute is ``"false"`` every descendant is hidden.
"""

from dataclasses import dataclass, field

from .errors import MalformedMarkup

SUPPORTED_TAGS = {
    "body", "div", "ul", "li", "span", "p",
    "h1", "h2", "h3", "h4", "h5", "h6",
    "td", "tr", "table",
    "button", "a", "label", "input", "select", "option", "menu",
}

# Tags whose elements never take children and auto-close.
VOID_TAGS = {"input"}

INTERACTIVE_TAGS = {"button", "a", "input", "select", "option"}

# Tags whose direct text is eligible for semantic page search.
CANDIDATE_TAGS = {
    "button", "a", "label", "option", "li", "span",
    "h1", "h2", "h3", "h4", "h5", "h6", "td", "p",
}

_ENTITIES = {"&amp;": "&", "&lt;": "<", "&gt;": ">", "&quot;": '"', "&#39;": "'"}


@dataclass(eq=False)
class DomNode:
    tag: str
    attributes: dict[str, str] = field(default_factory=dict)
    text: str = ""
    children: list["DomNode"] = field(default_factory=list)
    parent: "DomNode | None" = None

    @property
    def interactive(self) -> bool:
        return self.tag in INTERACTIVE_TAGS

    @property
    def is_menu(self) -> bool:
        return self.tag == "menu"

    @property
    def expanded(self) -> bool:
        return self.attributes.get("expanded") != "false"

    @property
    def checked(self) -> bool:
        return self.attributes.get("checked") == "true"

    @property
    def input_type(self) -> str:
        return self.attributes.get("type", "text") if self.tag == "input" else ""

    @property
    def node_id(self) -> str | None:
        return self.attributes.get("id")

    def iter_subtree(self):
        """Pre-order traversal of this node and its descendants."""
        yield self
        for child in self.children:
            yield from child.iter_subtree()

    def copy_subtree(self, parent: "DomNode | None" = None) -> "DomNode":
        dup = DomNode(self.tag, dict(self.attributes), self.text, [], parent)
        dup.children = [c.copy_subtree(dup) for c in self.children]
        return dup

    def __repr__(self):
        ident = f"#{self.node_id}" if self.node_id else ""
        return f"<DomNode {self.tag}{ident} {self.text[:20]!r}>"


class DomDocument:
    """A parsed page: one root node, a url identifier and a mutation counter."""

    def __init__(self, root: DomNode, url: str = ""):
        self.root = root
        self.url = url
        self.revision = 0

    def iter_nodes(self):
        yield from self.root.iter_subtree()

    def contains(self, node: DomNode) -> bool:
        top = node
        while top.parent is not None:
            top = top.parent
        return top is self.root

    def visible(self, node: DomNode) -> bool:
        """False when any proper ancestor is a collapsed menu."""
        cur = node.parent
        while cur is not None:
            if cur.is_menu and not cur.expanded:
                return False
            cur = cur.parent
        return True

    def visible_nodes(self) -> list[DomNode]:
        return [n for n in self.iter_nodes() if self.visible(n)]

    def find_by_id(self, node_id: str) -> DomNode | None:
        for node in self.iter_nodes():
            if node.node_id == node_id:
                return node
        return None

    def clone(self) -> "DomDocument":
        dup = DomDocument(self.root.copy_subtree(), self.url)
        dup.revision = self.revision
        return dup


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def fail(self, message: str):
        raise MalformedMarkup(message, self.pos)

    def parse(self) -> DomNode:
        root = None
        stack: list[DomNode] = []
        n = len(self.source)
        while self.pos < n:
            if self.source[self.pos] == "<":
                if self.source.startswith("<!--", self.pos):
                    end = self.source.find("-->", self.pos)
                    if end < 0:
                        self.fail("unterminated comment")
                    self.pos = end + 3
                    continue
                if self.source.startswith("</", self.pos):
                    tag = self._read_close_tag()
                    if not stack:
                        self.fail(f"stray closing tag </{tag}>")
                    if stack[-1].tag != tag:
                        self.fail(f"closing </{tag}> does not match <{stack[-1].tag}>")
                    stack.pop()
                    continue
                node, self_closed = self._read_open_tag()
                if stack:
                    node.parent = stack[-1]
                    stack[-1].children.append(node)
                elif root is None:
                    root = node
                else:
                    self.fail("multiple root elements")
                if not self_closed and node.tag not in VOID_TAGS:
                    stack.append(node)
            else:
                chunk_start = self.pos
                next_lt = self.source.find("<", self.pos)
                if next_lt < 0:
                    next_lt = n
                chunk = self.source[chunk_start:next_lt].strip()
                self.pos = next_lt
                if chunk:
                    if not stack:
                        self.fail("text outside the root element")
                    chunk = _decode_entities(chunk)
                    chunk = " ".join(chunk.split())
                    top = stack[-1]
                    top.text = f"{top.text} {chunk}".strip() if top.text else chunk
        if stack:
            self.fail(f"unclosed <{stack[-1].tag}>")
        if root is None:
            self.fail("no root element")
        return root

    def _read_close_tag(self) -> str:
        end = self.source.find(">", self.pos)
        if end < 0:
            self.fail("unterminated closing tag")
        tag = self.source[self.pos + 2:end].strip().lower()
        self.pos = end + 1
        return tag

    def _read_open_tag(self) -> tuple[DomNode, bool]:
        end = self.source.find(">", self.pos)
        if end < 0:
            self.fail("unterminated tag")
        body = self.source[self.pos + 1:end].strip()
        self_closed = body.endswith("/")
        if self_closed:
            body = body[:-1].strip()
        parts = body.split(None, 1)
        if not parts:
            self.fail("empty tag")
        tag = parts[0].lower()
        if tag not in SUPPORTED_TAGS:
            self.fail(f"unsupported tag <{tag}>")
        attrs = self._read_attributes(parts[1]) if len(parts) > 1 else {}
        self.pos = end + 1
        return DomNode(tag, attrs), self_closed

    def _read_attributes(self, text: str) -> dict[str, str]:
        attrs: dict[str, str] = {}
        i, n = 0, len(text)
        while i < n:
            while i < n and text[i].isspace():
                i += 1
            if i >= n:
                break
            start = i
            while i < n and text[i] not in "=\t ":
                i += 1
            name = text[start:i].lower()
            if not name:
                self.fail("malformed attribute")
            if i < n and text[i] == "=":
                i += 1
                if i < n and text[i] in "\"'":
                    quote = text[i]
                    i += 1
                    vstart = i
                    while i < n and text[i] != quote:
                        i += 1
                    if i >= n:
                        self.fail("unterminated attribute value")
                    attrs[name] = _decode_entities(text[vstart:i])
                    i += 1
                else:
                    vstart = i
                    while i < n and not text[i].isspace():
                        i += 1
                    attrs[name] = text[vstart:i]
            else:
                attrs[name] = "true"
        return attrs


def _decode_entities(text: str) -> str:
    for entity, char in _ENTITIES.items():
        if entity in text:
            text = text.replace(entity, char)
    return text


def parse_document(source: str, url: str = "") -> DomDocument:
    """Parse markup in the supported subset into a fresh document.

    Node ids must be unique within a page so ``for`` references and id-based
    event targets are unambiguous.
    """
    doc = DomDocument(_Parser(source).parse(), url)
    seen: set[str] = set()
    for node in doc.iter_nodes():
        node_id = node.node_id
        if node_id is not None:
            if node_id in seen:
                raise MalformedMarkup(f"duplicate id {node_id!r}", 0)
            seen.add(node_id)
    return doc


def text_candidates(doc: DomDocument) -> list[tuple[DomNode, str]]:
    """Visible nodes whose tag may carry searchable text, in pre-order.

    Nodes under a collapsed menu are excluded until the menu is expanded.
    """
    out = []
    for node in doc.iter_nodes():
        if node.tag not in CANDIDATE_TAGS:
            continue
        text = node.text.strip()
        if not text:
            continue
        if not doc.visible(node):
            continue
        out.append((node, text))
    return out
