"""Reusable action templates: the shared vocabulary of synthesized programs
and demonstrated step mappings."""

from dataclasses import dataclass

from .paths import PathExpr


@dataclass(frozen=True)
class ColumnBinding:
    column_index: int
    transform: str = "identity"


@dataclass(frozen=True)
class FixedAction:
    kind: str
    target: PathExpr
    payload: str | None = None

    def render(self) -> str:
        extra = f" payload={self.payload!r}" if self.payload is not None else ""
        return f"{self.kind.lower()} target={self.target}{extra}"


@dataclass(frozen=True)
class BoundInput:
    target: PathExpr
    binding: ColumnBinding

    def render(self) -> str:
        return f"input-text target={self.target} payload=column[{self.binding.column_index}]"


@dataclass(frozen=True)
class Reveal:
    target: PathExpr

    def render(self) -> str:
        return f"reveal target={self.target}"


@dataclass(frozen=True)
class SemanticTarget:
    kind: str  # Click or SelectOption

    def render(self) -> str:
        return f"semantic-{self.kind.lower()} on best match for current step"


TemplateItem = FixedAction | BoundInput | Reveal | SemanticTarget


@dataclass(frozen=True)
class ActionTemplate:
    items: tuple[TemplateItem, ...]

    def __post_init__(self):
        semantic = [i for i, item in enumerate(self.items)
                    if isinstance(item, SemanticTarget)]
        if len(semantic) > 1:
            raise ValueError("a template may hold at most one semantic target")
        if semantic:
            reveals = [i for i, item in enumerate(self.items)
                       if isinstance(item, Reveal)]
            if any(i > semantic[0] for i in reveals):
                raise ValueError("reveals must precede the semantic target")

    @property
    def semantic_kind(self) -> str | None:
        for item in self.items:
            if isinstance(item, SemanticTarget):
                return item.kind
        return None

    def render(self) -> str:
        return "; ".join(item.render() for item in self.items)
