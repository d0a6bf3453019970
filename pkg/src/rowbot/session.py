"""Session orchestration: the mode machine that turns demonstrations into
automation.

Lifecycle: two rows are demonstrated step by step, the trace is generalized
into a program, the third row runs in semi-automation (every unit confirmed),
and the rest runs full-auto. Novel steps drop the session back into
NeedsDemonstration; repairs (edits, rewinds, pause) are available throughout.

An execution unit is one prologue/epilogue template or one dispatched step.
Units are deterministic and atomic, so the headless driver and the HTTP
service share identical semantics; pacing is purely a service concern.
"""

import json
from dataclasses import dataclass, field

from .actions import (CLICK, ConcreteAction, apply_action, associated_control,
                      control_states)
from .catalog import Catalog, MatchResult, instantiate, \
    resolve_template_path
from .corpus import SiteCorpus
from .dom import DomDocument, text_candidates
from .errors import (AtEnd, AtStart, EmptyDemonstration, NoControl,
                     NoPendingPrediction, NoSuchNode, NothingToPredict,
                     SessionClosed, StructuralDrift, TargetNotFound, WrongMode)
from .paths import PathExpr, node_path, parse_path, resolve_path
from .semantics import HashedTokenEmbedder, Lexicon, StepText, best_match
from .synthesis import (ADVANCE_STEP, CANCEL_HIGHLIGHT, NEXT_ROW, ActionEvent,
                        AutomationProgram, Trace, synthesize)
from .table import CURRENT, DONE, PENDING, InputTable, load_input
from .templates import ActionTemplate, BoundInput, FixedAction, Reveal

IDLE = "Idle"
DEMONSTRATING = "Demonstrating"
SEMI_AUTO = "SemiAuto"
FULL_AUTO = "FullAuto"
PAUSED = "Paused"
NEEDS_DEMONSTRATION = "NeedsDemonstration"


@dataclass
class EngineConfig:
    tau: float = 0.5
    tau_catalog: float = 0.55
    dimension: int = 256


@dataclass(frozen=True)
class Highlight:
    page_id: str
    text: str
    text_path: PathExpr
    control_path: PathExpr | None
    score: float


@dataclass(frozen=True)
class Unit:
    kind: str                   # prologue | step | epilogue
    index: int                  # position within its phase
    template: ActionTemplate | None = None
    step_index: int | None = None


@dataclass(frozen=True)
class PredictedAction:
    unit: Unit
    description: str
    match: MatchResult | None = None


@dataclass
class _ClosedStep:
    step_index: int
    events: list[ActionEvent]
    advance_event: ActionEvent
    cataloged: bool


@dataclass
class RowResult:
    original_index: int
    presentation_index: int
    page: str
    controls: dict = field(default_factory=dict)


class SessionEngine:
    """Single-owner session state; callers serialize access themselves."""

    def __init__(self, corpus: SiteCorpus, lexicon: Lexicon,
                 config: EngineConfig | None = None,
                 embedder: HashedTokenEmbedder | None = None,
                 default_input: list[dict] | None = None,
                 catalog: Catalog | None = None):
        self.corpus = corpus
        self.lexicon = lexicon
        self.config = config or EngineConfig()
        self.embedder = embedder or HashedTokenEmbedder(dim=self.config.dimension)
        self.default_input = default_input

        self.mode = IDLE
        self.table: InputTable | None = None
        self.current_row = 0
        self.current_step: int | None = None
        self.doc: DomDocument | None = None
        self.page_cache: dict[str, DomDocument] = {}
        self.trace = Trace()
        # a catalog imported from an earlier session resumes its knowledge
        self.catalog = catalog if catalog is not None \
            else Catalog(lexicon, self.embedder)
        self.program: AutomationProgram | None = None
        self.highlight: Highlight | None = None
        self.pending: PredictedAction | None = None
        self.units: list[Unit] | None = None
        self.unit_idx = 0
        self.return_mode: str | None = None
        self.needs_demo_unit: Unit | None = None
        self.paused_diagnostic: str | None = None
        self.demonstrated_rows = 0
        self.completed = False
        self.closed = False
        self.tick_rate = 0.0
        self.row_results: list[RowResult] = []
        self.transcript: list[str] = []
        self.snapshot_seq = 0
        self._listeners: list = []
        self._seq = 0
        self._step_buffer: list[ActionEvent] = []
        self._epilogue_buffer: list[ActionEvent] = []
        self._closed_steps: list[_ClosedStep] = []

    # ------------------------------------------------------------------
    # plumbing

    def _log(self, line: str):
        self.transcript.append(line)

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _set_mode(self, new_mode: str):
        if new_mode != self.mode:
            self._log(f"MODE {self.mode} -> {new_mode}")
            self.mode = new_mode

    def add_listener(self, callback):
        self._listeners.append(callback)

    def _publish(self):
        self.snapshot_seq += 1
        snap = self.snapshot()
        for callback in self._listeners:
            callback(snap)

    def _check_open(self):
        if self.closed:
            raise SessionClosed("this session has been closed")

    def transcript_text(self) -> str:
        return "\n".join(self.transcript) + "\n"

    def _row(self):
        return self.table.rows[self.current_row]

    def _steps(self):
        return self._row().steps

    # ------------------------------------------------------------------
    # input and recording

    def load_input(self, records: list[dict] | None = None):
        self._check_open()
        if self.mode != IDLE:
            raise WrongMode("input can only be (re)loaded before recording starts")
        if records is None:
            records = self.default_input
        self.table = load_input(records)
        order = [row.original_index for row in self.table.rows]
        self._log(f"INPUT rows={len(self.table.rows)} order={order}")
        for row in self.table.rows:
            texts = [s.text.raw for s in row.steps]
            self._log(f"STEPS row={row.original_index} {json.dumps(texts)}")
        self._publish()

    def start_recording(self):
        self._check_open()
        if self.mode != IDLE:
            raise WrongMode(f"cannot start recording in mode {self.mode}")
        if self.table is None:
            raise WrongMode("no input table loaded")
        self._set_mode(DEMONSTRATING)
        self.current_row = 0
        self._begin_demo_row()
        self._publish()

    def _begin_demo_row(self):
        self.page_cache = {}
        self.doc = self._load_page(self.corpus.entry)
        self.current_step = 0 if self._steps() else None
        if self.current_step is not None:
            self._steps()[0].status = CURRENT
        self._step_buffer = []
        self._epilogue_buffer = []
        self._closed_steps = []
        self._refresh_highlight()

    def _load_page(self, page_id: str) -> DomDocument:
        if page_id not in self.page_cache:
            self.page_cache[page_id] = self.corpus.page(page_id)
        return self.page_cache[page_id]

    # ------------------------------------------------------------------
    # highlight

    def _refresh_highlight(self):
        if self.mode not in (DEMONSTRATING, NEEDS_DEMONSTRATION) or \
                self.current_step is None or self.doc is None:
            self._update_highlight(None)
            return
        step = self._steps()[self.current_step]
        found = best_match(step.text, text_candidates(self.doc),
                           self.config.tau, self.lexicon, self.embedder)
        if found is None:
            self._update_highlight(None)
            return
        node, score = found
        try:
            control = associated_control(self.doc, node)
            control_path = node_path(self.doc, control)
        except NoControl:
            control_path = None
        self._update_highlight(Highlight(self.doc.url, node.text,
                                         node_path(self.doc, node),
                                         control_path, score))

    def _update_highlight(self, new: Highlight | None):
        old = self.highlight
        self.highlight = new
        old_key = (old.page_id, str(old.text_path), round(old.score, 4)) if old else None
        new_key = (new.page_id, str(new.text_path), round(new.score, 4)) if new else None
        if old_key != new_key:
            if new is None:
                self._log("HIGHLIGHT none")
            else:
                self._log(f"HIGHLIGHT page={new.page_id} path={new.text_path} "
                          f"text={new.text!r} score={new.score:.4f}")

    # ------------------------------------------------------------------
    # demonstration events

    def resolve_event_target(self, target: str | None,
                             target_id: str | None) -> PathExpr:
        if target_id is not None:
            node = self.doc.find_by_id(target_id)
            if node is None:
                raise NoSuchNode(f"no node with id {target_id!r} on {self.doc.url}")
            return node_path(self.doc, node)
        if target is None:
            raise NoSuchNode("event carries neither a target path nor a target id")
        return parse_path(target)

    def record_user_event(self, kind: str, target: str | None = None,
                          target_id: str | None = None,
                          payload: str | None = None):
        """Command-layer entry point: mode guard first, then target resolution."""
        self._check_open()
        if self.mode not in (DEMONSTRATING, NEEDS_DEMONSTRATION):
            raise WrongMode(f"cannot record user events in mode {self.mode}")
        if kind == CANCEL_HIGHLIGHT:
            self.record_event(kind)
            return
        self.record_event(kind, self.resolve_event_target(target, target_id),
                          payload)

    def record_event(self, kind: str, target: PathExpr | None = None,
                     payload: str | None = None):
        self._check_open()
        if self.mode not in (DEMONSTRATING, NEEDS_DEMONSTRATION):
            raise WrongMode(f"cannot record user events in mode {self.mode}")
        step_ref = (self.current_row, self.current_step) \
            if self.current_step is not None else None
        if kind == CANCEL_HIGHLIGHT:
            event = ActionEvent(kind, None, None, self.doc.url, step_ref,
                                self._next_seq())
            self.trace.append(event)
            self._buffer().append(event)
            self._log(f"EVENT row={self.current_row} step={self._step_label()} "
                      f"{event.render()}")
            self._update_highlight(None)
            self._publish()
            return
        node = resolve_path(self.doc, target)
        highlight_control = None
        if self.highlight is not None and self.highlight.page_id == self.doc.url:
            highlight_control = self.highlight.control_path
        event = ActionEvent(kind, target, payload, self.doc.url, step_ref,
                            self._next_seq(), target_tag=node.tag,
                            highlight_control=highlight_control)
        result = apply_action(self.doc, ConcreteAction(kind, target, payload))
        self.trace.append(event)
        self._buffer().append(event)
        self._log(f"EVENT row={self.current_row} step={self._step_label()} "
                  f"{event.render()}")
        if result.navigated_to:
            self.doc = self._load_page(result.navigated_to)
            self._log(f"NAV page={self.doc.url}")
        self._refresh_highlight()
        self._publish()

    def _buffer(self) -> list[ActionEvent]:
        return self._step_buffer if self.current_step is not None \
            else self._epilogue_buffer

    def _step_label(self) -> str:
        return "-" if self.current_step is None else str(self.current_step)

    # ------------------------------------------------------------------
    # carousel

    def advance_carousel(self):
        self._check_open()
        if self.mode == DEMONSTRATING:
            self._advance_demo()
        elif self.mode == NEEDS_DEMONSTRATION:
            self._resolve_needs_demo()
        else:
            raise WrongMode(f"cannot advance the carousel in mode {self.mode}")
        self._publish()

    def _advance_demo(self):
        if self.current_step is None:
            raise AtEnd("the carousel is already past the last step")
        steps = self._steps()
        step = steps[self.current_step]
        step.status = DONE
        advance = ActionEvent(ADVANCE_STEP, None, None, self.doc.url,
                              (self.current_row, self.current_step),
                              self._next_seq())
        self.trace.append(advance)
        cataloged = False
        page_actions = [e for e in self._step_buffer if e.is_page_action]
        if self.current_step >= 1 and page_actions:
            entry = self.catalog.record_mapping(step.text, self._step_buffer,
                                                page_actions[0].page_id)
            self._log(f"RECORD key={entry.key.raw!r} page={entry.demonstrated_on} "
                      f"template=[{entry.template.render()}]")
            cataloged = True
        self._closed_steps.append(_ClosedStep(self.current_step,
                                              list(self._step_buffer),
                                              advance, cataloged))
        self._step_buffer = []
        self._log(f"ADVANCE row={self.current_row} step={self.current_step}")
        if self.current_step + 1 < len(steps):
            self.current_step += 1
            steps[self.current_step].status = CURRENT
        else:
            self.current_step = None
        self._refresh_highlight()

    def _resolve_needs_demo(self):
        unit = self.needs_demo_unit
        if unit is None:
            raise WrongMode("nothing awaits a demonstration")
        if unit.kind == "step":
            page_actions = [e for e in self._step_buffer if e.is_page_action]
            if not page_actions:
                raise EmptyDemonstration(
                    "demonstrate at least one page action before advancing")
            step = self._steps()[unit.step_index]
            entry = self.catalog.record_mapping(step.text, self._step_buffer,
                                                page_actions[0].page_id)
            self._log(f"RECORD key={entry.key.raw!r} page={entry.demonstrated_on} "
                      f"template=[{entry.template.render()}]")
            step.status = DONE
            advance = ActionEvent(ADVANCE_STEP, None, None, self.doc.url,
                                  (self.current_row, unit.step_index),
                                  self._next_seq())
            self.trace.append(advance)
            self._step_buffer = []
            self._log(f"ADVANCE row={self.current_row} step={unit.step_index}")
        self.needs_demo_unit = None
        self._update_highlight(None)
        self._set_mode(self.return_mode)
        self.return_mode = None
        if unit.kind != "step":
            # Template unit performed by hand; count it as executed.
            self._after_unit(unit)
        if self.mode == SEMI_AUTO:
            self.pending = self._compute_prediction()

    def rewind_carousel(self):
        self._check_open()
        if self.mode != DEMONSTRATING:
            raise WrongMode(f"cannot rewind in mode {self.mode}")
        buffer = self._buffer()
        if buffer:
            self._discard_tail(buffer)
            removed = len(buffer)
            buffer.clear()
            self._log(f"REWIND row={self.current_row} discarded={removed}")
            self._refresh_highlight()
            self._publish()
            return
        if not self._closed_steps:
            raise AtStart("the carousel is at the start of the row")
        closed = self._closed_steps.pop()
        self._discard_tail(closed.events + [closed.advance_event])
        if closed.cataloged:
            self.catalog.pop_last()
        steps = self._steps()
        if self.current_step is not None:
            steps[self.current_step].status = PENDING
        self.current_step = closed.step_index
        steps[closed.step_index].status = CURRENT
        self._log(f"REWIND row={self.current_row} reopened step={closed.step_index} "
                  f"discarded={len(closed.events)}")
        self._refresh_highlight()
        self._publish()

    def _discard_tail(self, events: list[ActionEvent]):
        if events:
            tail = self.trace.events[-len(events):]
            assert tail == events, "trace tail diverged from the step buffer"
            del self.trace.events[-len(events):]

    # ------------------------------------------------------------------
    # row lifecycle

    def finish_row(self):
        self._check_open()
        if self.mode != DEMONSTRATING:
            raise WrongMode(f"cannot finish the row in mode {self.mode}")
        if self.current_step is not None:
            raise WrongMode("steps remain; advance through them first")
        marker = ActionEvent(NEXT_ROW, None, None, self.doc.url, None,
                             self._next_seq())
        self.trace.append(marker)
        self._snapshot_row()
        self.demonstrated_rows += 1
        if self.demonstrated_rows >= 2:
            rows = [row.values for row in self.table.rows]
            self.program = synthesize(self.trace, rows)
            if self.program is not None:
                self._log(f"SYNTH prologue={len(self.program.prologue)} "
                          f"epilogue={len(self.program.epilogue)}")
        if self.current_row + 1 >= len(self.table.rows):
            self.completed = True
            self._log("COMPLETE")
            self._publish()
            return
        self.current_row += 1
        if self.program is not None:
            self._set_mode(SEMI_AUTO)
            self._begin_auto_row()
            self.pending = self._compute_prediction()
        else:
            self._begin_demo_row()
        self._publish()

    def _snapshot_row(self):
        controls = control_states(self.doc)
        result = RowResult(self._row().original_index, self.current_row,
                           self.doc.url, controls)
        self.row_results.append(result)
        self._log(f"ROW row={result.original_index} page={result.page} "
                  f"controls={json.dumps(controls, sort_keys=True)}")

    # ------------------------------------------------------------------
    # automation

    def _build_units(self) -> list[Unit]:
        units = [Unit("prologue", i, template=t)
                 for i, t in enumerate(self.program.prologue)]
        units += [Unit("step", i, step_index=i)
                  for i in range(1, len(self._steps()))]
        units += [Unit("epilogue", i, template=t)
                  for i, t in enumerate(self.program.epilogue)]
        return units

    def _begin_auto_row(self):
        self.page_cache = {}
        self.doc = self._load_page(self.corpus.entry)
        self.units = self._build_units()
        self.unit_idx = 0
        self._step_buffer = []
        steps = self._steps()
        self.current_step = 0 if steps else None
        if steps:
            steps[0].status = CURRENT
            if not self.program.prologue:
                steps[0].status = DONE
                self.current_step = 1 if len(steps) > 1 else None
        self._update_highlight(None)

    def _after_unit(self, unit: Unit):
        if unit.kind == "prologue" and unit.index == len(self.program.prologue) - 1:
            steps = self._steps()
            if steps:
                steps[0].status = DONE
            self.current_step = 1 if len(steps) > 1 else None
            if self.current_step is not None:
                steps[self.current_step].status = CURRENT
        if unit.kind == "step":
            nxt = unit.step_index + 1
            if nxt < len(self._steps()):
                self.current_step = nxt
                self._steps()[nxt].status = CURRENT
            else:
                self.current_step = None
        self.unit_idx += 1
        if self.unit_idx >= len(self.units):
            self._close_auto_row()

    def _close_auto_row(self):
        self._snapshot_row()
        was_semi = self.mode == SEMI_AUTO
        self.units = None
        self.unit_idx = 0
        self.pending = None
        self.page_cache = {}
        if was_semi:
            self._set_mode(FULL_AUTO)
        if self.current_row + 1 >= len(self.table.rows):
            self.completed = True
            self._log("COMPLETE")
            return
        self.current_row += 1

    def _apply_concrete(self, action: ConcreteAction):
        result = apply_action(self.doc, action)
        self._log(f"APPLY {action.render()}")
        if result.navigated_to:
            self.doc = self._load_page(result.navigated_to)
            self._log(f"NAV page={self.doc.url}")

    def _execute_template(self, unit: Unit) -> str:
        row_values = self._row().values
        try:
            for item in unit.template.items:
                if isinstance(item, BoundInput):
                    node = resolve_template_path(self.doc, item.target)
                    payload = row_values[item.binding.column_index].strip()
                    self._apply_concrete(ConcreteAction(
                        "InputText", node_path(self.doc, node), payload))
                elif isinstance(item, FixedAction):
                    node = resolve_template_path(self.doc, item.target)
                    self._apply_concrete(ConcreteAction(
                        item.kind, node_path(self.doc, node), item.payload))
                elif isinstance(item, Reveal):
                    node = resolve_template_path(self.doc, item.target)
                    if node.is_menu and not node.expanded:
                        self._apply_concrete(ConcreteAction(
                            CLICK, node_path(self.doc, node)))
        except (NoSuchNode, StructuralDrift) as exc:
            self._enter_paused_diagnostic(f"{unit.kind}[{unit.index}]: {exc}")
            return "Paused"
        self._after_unit(unit)
        return "AppliedTemplate"

    def _execute_step(self, unit: Unit, match: MatchResult | None) -> str:
        steps = self._steps()
        step = steps[unit.step_index]
        self.current_step = unit.step_index
        if step.status == DONE:
            self._log(f"SKIP row={self.current_row} step={unit.step_index} done")
            self._after_unit(unit)
            return "StepAlreadyDone"
        step.status = CURRENT
        if match is None:
            match = self.catalog.lookup(step.text, self.config.tau_catalog)
            self._log_lookup(step.text, match)
        if not match.hit:
            self._enter_needs_demo(unit, f"no catalog entry matches {step.text.raw!r}")
            return "NeedsDemonstration"
        try:
            actions, semantic = instantiate(
                match.entry, step.text, self.doc, self._row().values,
                self.config.tau, self.lexicon, self.embedder)
        except TargetNotFound as exc:
            self._log(f"MISS step={step.text.raw!r} {exc}")
            self._enter_needs_demo(unit, str(exc))
            return "NeedsDemonstration"
        except StructuralDrift as exc:
            self._enter_paused_diagnostic(f"step[{unit.step_index}]: {exc}")
            return "Paused"
        if semantic is not None:
            self._log(f"MATCH step={step.text.raw!r} text={semantic.text!r} "
                      f"path={semantic.text_path} score={semantic.score:.4f}")
            self._update_highlight(Highlight(self.doc.url, semantic.text,
                                             semantic.text_path,
                                             semantic.control_path,
                                             semantic.score))
        for action in actions:
            self._apply_concrete(action)
        step.status = DONE
        self._after_unit(unit)
        return "StepDone"

    def _log_lookup(self, step_text: StepText, match: MatchResult):
        entry_key = match.entry.key.raw if match.entry else None
        self._log(f"LOOKUP step={step_text.raw!r} entry={entry_key!r} "
                  f"score={match.score:.4f} hit={match.hit}")

    def _execute_unit(self, unit: Unit, match: MatchResult | None = None) -> str:
        if unit.kind == "step":
            return self._execute_step(unit, match)
        return self._execute_template(unit)

    def _enter_needs_demo(self, unit: Unit, reason: str):
        self.return_mode = self.mode
        self.needs_demo_unit = unit
        self.pending = None
        self._set_mode(NEEDS_DEMONSTRATION)
        self._log(f"WAIT demonstration for "
                  f"{'step ' + str(unit.step_index) if unit.kind == 'step' else unit.kind} "
                  f"({reason})")
        if unit.kind == "step":
            self.current_step = unit.step_index
            self._steps()[unit.step_index].status = CURRENT
            self._step_buffer = []
        self._refresh_highlight()

    def _enter_paused_diagnostic(self, diagnostic: str):
        self.return_mode = self.mode
        self.paused_diagnostic = diagnostic
        self.pending = None
        self._set_mode(PAUSED)
        self._log(f"PAUSED diagnostic={diagnostic!r}")

    # ------------------------------------------------------------------
    # semi-automation

    def _describe_unit(self, unit: Unit, match: MatchResult | None) -> str:
        if unit.kind == "step":
            step = self._steps()[unit.step_index]
            return (f"step[{unit.step_index}] {step.text.raw!r}: apply "
                    f"{match.entry.key.raw!r} (score={match.score:.4f})")
        parts = []
        for item in unit.template.items:
            if isinstance(item, BoundInput):
                value = self._row().values[item.binding.column_index].strip()
                parts.append(f"input-text target={item.target} payload={value!r}")
            else:
                parts.append(item.render())
        return f"{unit.kind}[{unit.index}]: " + "; ".join(parts)

    def _compute_prediction(self) -> PredictedAction | None:
        while self.mode == SEMI_AUTO and self.units is not None \
                and self.unit_idx < len(self.units):
            unit = self.units[self.unit_idx]
            if unit.kind == "step":
                step = self._steps()[unit.step_index]
                if step.status == DONE:
                    self._log(f"SKIP row={self.current_row} "
                              f"step={unit.step_index} done")
                    self._after_unit(unit)
                    continue
                match = self.catalog.lookup(step.text, self.config.tau_catalog)
                self._log_lookup(step.text, match)
                if not match.hit:
                    self._enter_needs_demo(
                        unit, f"no catalog entry matches {step.text.raw!r}")
                    return None
                prediction = PredictedAction(unit, self._describe_unit(unit, match),
                                             match)
            else:
                prediction = PredictedAction(unit, self._describe_unit(unit, None))
            self._log(f"PREDICT {prediction.description}")
            return prediction
        return None

    def predict_next(self) -> PredictedAction:
        self._check_open()
        if self.mode != SEMI_AUTO or self.pending is None:
            raise NothingToPredict("no predicted action is available")
        return self.pending

    def confirm_prediction(self):
        self._check_open()
        if self.mode != SEMI_AUTO:
            raise WrongMode(f"cannot confirm predictions in mode {self.mode}")
        if self.pending is None:
            raise NoPendingPrediction("no prediction awaits confirmation")
        prediction = self.pending
        self.pending = None
        self._log(f"CONFIRM {prediction.description}")
        self._execute_unit(prediction.unit, prediction.match)
        if self.mode == SEMI_AUTO:
            self.pending = self._compute_prediction()
        self._publish()

    def cancel_prediction(self):
        self._check_open()
        if self.mode != SEMI_AUTO:
            raise WrongMode(f"cannot cancel predictions in mode {self.mode}")
        if self.pending is None:
            raise NoPendingPrediction("no prediction awaits cancellation")
        prediction = self.pending
        self.pending = None
        self._log(f"CANCEL {prediction.description}")
        self._enter_needs_demo(prediction.unit, "prediction cancelled")
        self._publish()

    # ------------------------------------------------------------------
    # full automation

    def automation_tick(self) -> str:
        self._check_open()
        if self.mode != FULL_AUTO:
            raise WrongMode(f"cannot tick in mode {self.mode}")
        if self.completed:
            return "Completed"
        if self.units is None:
            self._begin_auto_row()
        outcome = self._execute_unit(self.units[self.unit_idx])
        self._publish()
        if self.completed:
            return "Completed"
        return outcome

    # ------------------------------------------------------------------
    # repair surface

    def pause(self):
        self._check_open()
        if self.mode not in (SEMI_AUTO, FULL_AUTO):
            raise WrongMode(f"cannot pause in mode {self.mode}")
        self.return_mode = self.mode
        self._set_mode(PAUSED)
        self._log("PAUSE")
        self._publish()

    def resume(self):
        self._check_open()
        if self.mode != PAUSED:
            raise WrongMode(f"cannot resume in mode {self.mode}")
        self.paused_diagnostic = None
        self._set_mode(self.return_mode)
        self.return_mode = None
        self._log("RESUME")
        if self.mode == SEMI_AUTO and self.pending is None:
            self.pending = self._compute_prediction()
        self._publish()

    def edit_step(self, row: int, step: int, text: str):
        self._check_open()
        if self.mode not in (DEMONSTRATING, PAUSED, NEEDS_DEMONSTRATION):
            raise WrongMode(f"cannot edit steps in mode {self.mode}")
        old = self.table.step_at(row, step).text.raw
        self.table.replace_step(row, step, text)
        self._log(f"EDIT row={row} step={step} {old!r} -> {text!r}")
        if row == self.current_row and step == self.current_step:
            self._refresh_highlight()
        self._publish()

    def set_tick_rate(self, per_second: float):
        self._check_open()
        if per_second < 0:
            raise WrongMode("tick rate must be non-negative")
        self.tick_rate = per_second
        self._log(f"TICK-RATE {per_second:g}")
        self._publish()

    def close(self):
        if not self.closed:
            self.closed = True
            for callback in self._listeners:
                callback(None)

    # ------------------------------------------------------------------
    # snapshots

    def _carousel_window(self) -> dict:
        if self.table is None or self.current_row >= len(self.table.rows):
            return {"prev": None, "current": None, "next": None}
        steps = self._steps()
        if self.current_step is None:
            prev = steps[-1].text.raw if steps else None
            return {"prev": prev, "current": "(finish row)", "next": None}
        idx = self.current_step
        return {
            "prev": steps[idx - 1].text.raw if idx > 0 else None,
            "current": steps[idx].text.raw,
            "next": steps[idx + 1].text.raw if idx + 1 < len(steps) else None,
        }

    def _serialize_node(self, node, doc) -> dict:
        return {
            "tag": node.tag,
            "path": str(node_path(doc, node)),
            "text": node.text,
            "attributes": dict(node.attributes),
            "interactive": node.interactive or node.is_menu,
            "visible": doc.visible(node),
            "children": [self._serialize_node(c, doc) for c in node.children],
        }

    def serialize_page(self, doc: DomDocument) -> dict:
        return {"id": doc.url, "revision": doc.revision,
                "tree": self._serialize_node(doc.root, doc)}

    def snapshot(self) -> dict:
        table = None
        if self.table is not None:
            table = {
                "columns": list(self.table.columns),
                "rows": [
                    {
                        "original_index": row.original_index,
                        "cells": [
                            {"raw": cell.raw,
                             "steps": [{"text": s.text.raw, "status": s.status,
                                        "edited": s.edited}
                                       for s in cell.steps]}
                            for cell in row.cells
                        ],
                    }
                    for row in self.table.rows
                ],
            }
        highlight = None
        if self.highlight is not None:
            highlight = {
                "page": self.highlight.page_id,
                "path": str(self.highlight.text_path),
                "control": str(self.highlight.control_path)
                if self.highlight.control_path else None,
                "text": self.highlight.text,
                "score": round(self.highlight.score, 4),
            }
        return {
            "seq": self.snapshot_seq,
            "mode": self.mode,
            "completed": self.completed,
            "closed": self.closed,
            "current_row": self.current_row,
            "current_step": self.current_step,
            "carousel": self._carousel_window(),
            "page": self.serialize_page(self.doc) if self.doc else None,
            "highlight": highlight,
            "prediction": self.pending.description if self.pending else None,
            "paused_diagnostic": self.paused_diagnostic,
            "catalog_size": len(self.catalog),
            "tick_rate": self.tick_rate,
            "table": table,
        }
