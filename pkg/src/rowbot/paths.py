"""Node paths: absolute selectors with optional variable indices.

A path addresses a node by walking tag-qualified sibling positions from the
root, XPath style: ``body[1]/ul[1]/li[2]``. Generalized paths replace one
index with a variable that carries the set of index values observed when the
variable was introduced, e.g. ``body[1]/ul[1]/li[i]`` with i in {1, 2}.
"""

from dataclasses import dataclass, field

from .dom import DomDocument, DomNode
from .errors import ForeignNode, MalformedMarkup, NoSuchNode, UnboundVariable


@dataclass(frozen=True)
class PathSeg:
    tag: str
    index: int | None = None   # 1-based among same-tag siblings
    var: str | None = None     # set instead of index on generalized paths

    def render(self) -> str:
        return f"{self.tag}[{self.index if self.var is None else self.var}]"


@dataclass(frozen=True)
class PathExpr:
    segments: tuple[PathSeg, ...]
    # observed index values per variable, in introduction order
    observed: tuple[tuple[str, tuple[int, ...]], ...] = field(default=())

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(seg.var for seg in self.segments if seg.var is not None)

    def observed_values(self, var: str) -> tuple[int, ...]:
        for name, values in self.observed:
            if name == var:
                return values
        return ()

    def render(self) -> str:
        base = "/".join(seg.render() for seg in self.segments)
        if not self.observed:
            return base
        spans = ", ".join(
            f"{name} in {{{','.join(str(v) for v in values)}}}"
            for name, values in self.observed
        )
        return f"{base} with {spans}"

    def __str__(self):
        return self.render()


def parse_path(text: str) -> PathExpr:
    """Parse a concrete path string like ``body[1]/div[2]/input[1]``."""
    segments = []
    for i, piece in enumerate(text.strip().split("/")):
        piece = piece.strip()
        if not piece.endswith("]") or "[" not in piece:
            raise MalformedMarkup(f"bad path segment {piece!r}", i)
        tag, _, idx = piece[:-1].partition("[")
        if not idx.isdigit() or int(idx) < 1:
            raise MalformedMarkup(f"bad path index {piece!r}", i)
        segments.append(PathSeg(tag, int(idx)))
    return PathExpr(tuple(segments))


def node_path(doc: DomDocument, node: DomNode) -> PathExpr:
    """Concrete path of a node; inverse of resolve_path on the same document."""
    if not doc.contains(node):
        raise ForeignNode(f"node {node!r} is not part of {doc.url or 'document'}")
    segments: list[PathSeg] = []
    cur = node
    while cur is not None:
        if cur.parent is None:
            segments.append(PathSeg(cur.tag, 1))
        else:
            same_tag = [c for c in cur.parent.children if c.tag == cur.tag]
            segments.append(PathSeg(cur.tag, same_tag.index(cur) + 1))
        cur = cur.parent
    return PathExpr(tuple(reversed(segments)))


def resolve_path(doc: DomDocument, path: PathExpr,
                 bindings: dict[str, int] | None = None) -> DomNode:
    """Walk a path down the document, substituting variable bindings."""
    bindings = bindings or {}
    if not path.segments:
        raise NoSuchNode("empty path")
    cur: DomNode | None = None
    for depth, seg in enumerate(path.segments):
        if seg.var is not None:
            if seg.var not in bindings:
                raise UnboundVariable(f"no binding for {seg.var!r} in {path}")
            index = bindings[seg.var]
        else:
            index = seg.index or 0
        if depth == 0:
            if doc.root.tag != seg.tag or index != 1:
                raise NoSuchNode(f"{path} does not match root <{doc.root.tag}>")
            cur = doc.root
            continue
        assert cur is not None
        same_tag = [c for c in cur.children if c.tag == seg.tag]
        if index < 1 or index > len(same_tag):
            raise NoSuchNode(f"{path} has no node at {seg.tag}[{index}] (depth {depth})")
        cur = same_tag[index - 1]
    assert cur is not None
    return cur
