"""Trace generalization: after two demonstrated rows, fold the repeated
per-row action pattern into a program of prologue and epilogue templates
around catalog-dispatched steps.

Path generalization is anti-unification: two concrete selectors merge when
they share a tag skeleton and differ in at most one sibling index, which
becomes a variable carrying both observed values. Input payloads that match
an input-table cell become column bindings so later rows pull their own data.
"""

from dataclasses import dataclass, field

from .actions import CLICK, INPUT_TEXT, PAGE_ACTION_KINDS, SELECT_OPTION
from .errors import DifferentShape, TooManyHoles
from .paths import PathExpr, PathSeg
from .templates import ActionTemplate, BoundInput, ColumnBinding, FixedAction

CANCEL_HIGHLIGHT = "CancelHighlight"
ADVANCE_STEP = "AdvanceStep"
NEXT_ROW = "NextRow"

EVENT_KINDS = (CLICK, INPUT_TEXT, SELECT_OPTION,
               CANCEL_HIGHLIGHT, ADVANCE_STEP, NEXT_ROW)


@dataclass(frozen=True)
class ActionEvent:
    kind: str
    target: PathExpr | None = None
    payload: str | None = None
    page_id: str = ""
    step_ref: tuple[int, int] | None = None
    seq: int = 0
    # Recording annotations: resolved at capture time so later analysis does
    # not depend on pages that have since mutated or navigated away.
    target_tag: str | None = None
    highlight_control: PathExpr | None = None

    @property
    def is_page_action(self) -> bool:
        return self.kind in PAGE_ACTION_KINDS

    def render(self) -> str:
        parts = [self.kind.lower()]
        if self.target is not None:
            parts.append(f"target={self.target}")
        if self.payload is not None:
            parts.append(f"payload={self.payload!r}")
        if self.page_id:
            parts.append(f"page={self.page_id}")
        return " ".join(parts)


@dataclass
class Trace:
    events: list[ActionEvent] = field(default_factory=list)

    def append(self, event: ActionEvent):
        if self.events and event.seq <= self.events[-1].seq:
            raise ValueError("trace sequence numbers must strictly increase")
        self.events.append(event)

    def row_segments(self) -> list[list[ActionEvent]]:
        """Complete row segments, split on NextRow markers."""
        segments: list[list[ActionEvent]] = []
        current: list[ActionEvent] = []
        for event in self.events:
            if event.kind == NEXT_ROW:
                segments.append(current)
                current = []
            else:
                current.append(event)
        return segments

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class AutomationProgram:
    prologue: tuple[ActionTemplate, ...]
    epilogue: tuple[ActionTemplate, ...]

    def render(self) -> str:
        lines = ["program:", "  prologue:"]
        lines += [f"    - {t.render()}" for t in self.prologue] or ["    (none)"]
        lines.append("  dispatch: each remaining step via catalog lookup")
        lines.append("  epilogue:")
        lines += [f"    - {t.render()}" for t in self.epilogue] or ["    (none)"]
        return "\n".join(lines)


_VAR_NAMES = "ijklmn"


def antiunify(p: PathExpr, q: PathExpr) -> PathExpr:
    """Least-general common pattern of two concrete paths.

    Identical paths come back unchanged. One differing index position becomes
    a fresh variable whose observed values are (p's index, q's index). More
    than one differing position means the demonstrations do not pin down a
    single axis of repetition yet.
    """
    if len(p.segments) != len(q.segments):
        raise DifferentShape(f"path lengths differ: {p} vs {q}")
    for a, b in zip(p.segments, q.segments):
        if a.tag != b.tag:
            raise DifferentShape(f"tag skeletons differ: {p} vs {q}")
    diffs = [i for i, (a, b) in enumerate(zip(p.segments, q.segments))
             if a.index != b.index]
    if not diffs:
        return p
    if len(diffs) > 1:
        raise TooManyHoles(f"{len(diffs)} differing positions between {p} and {q}")
    pos = diffs[0]
    var = _VAR_NAMES[0]
    segments = list(p.segments)
    segments[pos] = PathSeg(p.segments[pos].tag, None, var)
    observed = (var, (p.segments[pos].index, q.segments[pos].index))
    return PathExpr(tuple(segments), (observed,))


def detect_binding(event: ActionEvent, row: list[str]) -> ColumnBinding | None:
    """Lowest column whose trimmed cell equals the typed payload exactly."""
    if event.kind != INPUT_TEXT or event.payload is None:
        return None
    for index, cell in enumerate(row):
        if cell.strip() == event.payload:
            return ColumnBinding(index)
    return None


def _phase_split(segment: list[ActionEvent]):
    """(prologue, epilogue) page actions around the step-advance markers."""
    advance_positions = [i for i, e in enumerate(segment) if e.kind == ADVANCE_STEP]
    if not advance_positions:
        return None
    prologue = [e for e in segment[:advance_positions[0]] if e.is_page_action]
    epilogue = [e for e in segment[advance_positions[-1] + 1:] if e.is_page_action]
    return prologue, epilogue


def _align(events_a: list[ActionEvent], events_b: list[ActionEvent],
           row_a: list[str], row_b: list[str]) -> list[ActionTemplate] | None:
    if [e.kind for e in events_a] != [e.kind for e in events_b]:
        return None
    templates = []
    for ea, eb in zip(events_a, events_b):
        try:
            path = antiunify(ea.target, eb.target)
        except (DifferentShape, TooManyHoles):
            return None
        if ea.kind == INPUT_TEXT:
            ba = detect_binding(ea, row_a)
            bb = detect_binding(eb, row_b)
            if ba is not None and bb is not None and ba == bb:
                templates.append(ActionTemplate((BoundInput(path, ba),)))
                continue
            if ea.payload != eb.payload:
                return None
            templates.append(ActionTemplate((FixedAction(ea.kind, path, ea.payload),)))
        else:
            if ea.payload != eb.payload:
                return None
            templates.append(ActionTemplate((FixedAction(ea.kind, path, ea.payload),)))
    return templates


def synthesize(trace: Trace, rows: list[list[str]]) -> AutomationProgram | None:
    """Generalize the two most recent complete row segments into a program.

    Returns None whenever the evidence does not align, which the session
    treats as "keep demonstrating".
    """
    segments = trace.row_segments()
    if len(segments) < 2:
        return None
    if len(rows) < len(segments):
        return None
    idx_a, idx_b = len(segments) - 2, len(segments) - 1
    parts_a = _phase_split(segments[idx_a])
    parts_b = _phase_split(segments[idx_b])
    if parts_a is None or parts_b is None:
        return None
    prologue = _align(parts_a[0], parts_b[0], rows[idx_a], rows[idx_b])
    if prologue is None:
        return None
    epilogue = _align(parts_a[1], parts_b[1], rows[idx_a], rows[idx_b])
    if epilogue is None:
        return None
    return AutomationProgram(tuple(prologue), tuple(epilogue))
