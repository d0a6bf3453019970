import pytest

from rowbot.commands import apply_command
from rowbot.errors import (AtEnd, AtStart, BadIndex, EmptyDemonstration,
                           EmptyInput, NonRectangular, NoPendingPrediction,
                           NothingToPredict, UnknownCommand, WrongMode)
from rowbot.session import (DEMONSTRATING, FULL_AUTO, NEEDS_DEMONSTRATION,
                            PAUSED, SEMI_AUTO)
from rowbot.table import load_input

from conftest import build_engine, script_commands


def drain(engine):
    while engine.mode == FULL_AUTO and not engine.completed:
        engine.automation_tick()


def run_commands(engine, commands, drain_between=False):
    for command in commands:
        if drain_between:
            drain(engine)
        ack = apply_command(engine, command)
        assert ack["ok"], f"{command} failed: {ack.get('error')}"
    return engine


def demo_engine(upto: int | None = None):
    """Food engine with the first `upto` script commands replayed.

    With no limit, the whole script runs with automation drained between
    commands, mirroring the scenario driver.
    """
    engine = build_engine("food")
    commands = script_commands("food")
    if upto is None:
        return run_commands(engine, commands, drain_between=True)
    return run_commands(engine, commands[:upto])


# ---------------------------------------------------------------------------
# input table

def test_load_input_busiest_row_first():
    records = [
        {"a": "one, two, three"},          # 3 steps
        {"a": "one, two, three, four, five"},  # 5 steps
        {"a": "one, two"},                 # 2 steps
    ]
    table = load_input(records)
    assert [row.original_index for row in table.rows] == [1, 0, 2]


def test_load_input_empty():
    with pytest.raises(EmptyInput):
        load_input([])


def test_load_input_non_rectangular():
    with pytest.raises(NonRectangular):
        load_input([{"a": "x"}, {"b": "y"}])
    with pytest.raises(NonRectangular):
        load_input([{"a": "x"}, {"a": 3}])


def test_food_table_snapshot():
    engine = demo_engine(1)
    rows = engine.table.rows
    assert len(rows) == 10
    assert [r.original_index for r in rows] == [1, 0, 2, 3, 4, 5, 6, 7, 8, 9]
    assert [s.text.raw for s in rows[0].steps] == [
        "Thai Palace", "Pad Thai", "a side of soup", "no onions",
        "extra peanuts"]
    assert [s.text.raw for s in rows[1].steps] == [
        "Burger Barn", "Chicken Sandwich", "no pickles", "lactose intolerant"]
    distinct = {s.text.raw for r in rows for s in r.steps}
    assert len(distinct) >= 5


# ---------------------------------------------------------------------------
# demonstration and highlight

def test_expand_moves_highlight_onto_soup():
    # replay through "a side of soup" becoming current (command 7 = advance)
    engine = demo_engine(7)
    assert engine.highlight is None
    apply_command(engine, {"command": "user-event",
                           "event": {"kind": "Click", "target_id": "sides-menu"}})
    assert engine.highlight is not None
    assert engine.highlight.text == "Soup"


def test_cancel_highlight_clears_without_page_change():
    engine = demo_engine(7)
    apply_command(engine, {"command": "user-event",
                           "event": {"kind": "Click", "target_id": "sides-menu"}})
    revision = engine.doc.revision
    trace_len = len(engine.trace)
    apply_command(engine, {"command": "user-event",
                           "event": {"kind": "CancelHighlight"}})
    assert engine.highlight is None
    assert engine.doc.revision == revision
    assert len(engine.trace) == trace_len + 1  # recorded, but no page mutation


def test_event_in_full_auto_is_wrong_mode():
    engine = demo_engine()
    assert engine.mode == FULL_AUTO
    ack = apply_command(engine, {"command": "user-event",
                                 "event": {"kind": "Click", "target_id": "go"}})
    assert not ack["ok"] and ack["error"]["type"] == "WrongMode"


# ---------------------------------------------------------------------------
# carousel

def test_advance_past_last_step_enters_epilogue_then_next_row():
    engine = demo_engine(14)  # all five steps of row 0 advanced
    assert engine.current_step is None  # epilogue phase
    with pytest.raises(AtEnd):
        engine.advance_carousel()
    apply_command(engine, {"command": "user-event",
                           "event": {"kind": "Click", "target_id": "add-to-order"}})
    engine.finish_row()
    assert engine.current_row == 1
    assert engine.mode == DEMONSTRATING


def test_rewind_discards_current_step_events():
    engine = demo_engine(7)
    before = len(engine.trace)
    # two misclicks on the wrong checkbox
    for _ in range(2):
        apply_command(engine, {"command": "user-event",
                               "event": {"kind": "Click",
                                         "target_id": "no-peanuts"}})
    assert len(engine.trace) == before + 2
    engine.rewind_carousel()
    assert len(engine.trace) == before


def test_rewind_reopens_previous_step_and_pops_catalog():
    engine = demo_engine(10)  # just advanced past "a side of soup"
    assert engine.current_step == 3
    catalog_before = len(engine.catalog)
    trace_before = len(engine.trace)
    engine.rewind_carousel()
    assert engine.current_step == 2
    assert engine.table.rows[0].steps[2].status == "Current"
    assert engine.table.rows[0].steps[3].status == "Pending"
    assert len(engine.catalog) == catalog_before - 1
    assert len(engine.trace) < trace_before


def test_rewind_at_row_start():
    engine = demo_engine(2)
    with pytest.raises(AtStart):
        engine.rewind_carousel()


def test_finish_row_with_steps_remaining_rejected():
    engine = demo_engine(5)
    with pytest.raises(WrongMode):
        engine.finish_row()


# ---------------------------------------------------------------------------
# synthesis trigger

def test_one_row_stays_demonstrating():
    engine = demo_engine(16)  # through first next-row
    assert engine.mode == DEMONSTRATING
    assert engine.program is None


def test_two_rows_enter_semi_auto():
    engine = demo_engine(28)  # through second next-row
    assert engine.mode == SEMI_AUTO
    assert engine.program is not None
    assert len(engine.program.prologue) == 2
    assert len(engine.program.epilogue) == 1
    assert engine.current_row == 2


def test_misaligned_rows_keep_demonstrating():
    engine = demo_engine(16)
    # row 1 demonstrated with a deviant epilogue kind: InputText, not Click
    run_commands(engine, [
        {"command": "user-event",
         "event": {"kind": "InputText", "target_id": "search",
                   "payload": "Burger Barn"}},
        {"command": "user-event", "event": {"kind": "Click", "target_id": "go"}},
        {"command": "advance"},
        {"command": "user-event",
         "event": {"kind": "Click", "target_id": "dish-chicken-sandwich"}},
        {"command": "advance"},
        {"command": "user-event",
         "event": {"kind": "Click", "target_id": "no-pickles"}},
        {"command": "advance"},
        {"command": "edit-step", "row": 1, "step": 3,
         "text": "remove dairy products"},
        {"command": "user-event",
         "event": {"kind": "Click", "target_id": "no-cheese"}},
        {"command": "advance"},
    ])
    # epilogue: type into nothing relevant instead of clicking Add to Order
    assert engine.doc.find_by_id("add-to-order") is not None
    ack = apply_command(engine, {"command": "user-event",
                                 "event": {"kind": "InputText",
                                           "target_id": "search",
                                           "payload": "oops"}})
    assert not ack["ok"]  # no such input on the dish page
    engine.finish_row()
    assert engine.mode == DEMONSTRATING
    assert engine.program is None


# ---------------------------------------------------------------------------
# semi-automation

def test_predictions_follow_program_order():
    engine = demo_engine(28)
    first = engine.predict_next()
    assert "prologue[0]" in first.description
    assert "'Ramen House'" in first.description
    engine.confirm_prediction()
    second = engine.predict_next()
    assert "prologue[1]" in second.description
    engine.confirm_prediction()
    third = engine.predict_next()
    assert "Tonkotsu Ramen" in third.description
    engine.confirm_prediction()
    engine.confirm_prediction()  # the "no onions" step
    last = engine.predict_next()
    assert "epilogue[0]" in last.description
    assert "click" in last.description


def test_confirm_all_row_three_enters_full_auto():
    engine = demo_engine(33)
    assert engine.mode == FULL_AUTO
    assert engine.current_row == 3


def test_confirm_without_pending():
    engine = demo_engine(16)
    with pytest.raises(WrongMode):
        engine.confirm_prediction()
    semi = demo_engine(28)
    semi.pending = None  # force the empty-prediction edge
    with pytest.raises(NoPendingPrediction):
        semi.confirm_prediction()
    with pytest.raises(NoPendingPrediction):
        semi.cancel_prediction()


def test_nothing_to_predict_after_row_closes():
    engine = demo_engine(33)
    with pytest.raises(NothingToPredict):
        engine.predict_next()


def test_cancel_drops_to_needs_demonstration_then_resumes():
    engine = demo_engine(30)  # prologue confirmed; dish step pending
    pending = engine.predict_next()
    assert pending.unit.kind == "step"
    engine.cancel_prediction()
    assert engine.mode == NEEDS_DEMONSTRATION
    catalog_before = len(engine.catalog)
    run_commands(engine, [
        {"command": "user-event",
         "event": {"kind": "Click", "target_id": "dish-tonkotsu-ramen"}},
        {"command": "advance"},
    ])
    assert engine.mode == SEMI_AUTO
    assert len(engine.catalog) == catalog_before + 1
    assert engine.predict_next() is not None


def test_advance_without_events_in_needs_demo_rejected():
    engine = demo_engine(30)
    engine.cancel_prediction()
    with pytest.raises(EmptyDemonstration):
        engine.advance_carousel()


# ---------------------------------------------------------------------------
# full automation

def test_tick_completes_and_is_idempotent():
    engine = demo_engine(33)
    drain(engine)
    assert engine.mode == NEEDS_DEMONSTRATION  # the barbeque sauce row
    run_commands(engine, [
        {"command": "user-event",
         "event": {"kind": "SelectOption", "target_id": "sauce-barbeque"}},
        {"command": "advance"},
    ])
    drain(engine)
    assert engine.completed
    assert engine.automation_tick() == "Completed"
    assert engine.automation_tick() == "Completed"


def test_needs_demo_grows_catalog_by_one_then_similar_step_auto_runs():
    engine = demo_engine(33)
    drain(engine)
    failing = engine.table.rows[engine.current_row]
    assert failing.original_index == 6
    size = len(engine.catalog)
    run_commands(engine, [
        {"command": "user-event",
         "event": {"kind": "SelectOption", "target_id": "sauce-barbeque"}},
        {"command": "advance"},
    ])
    assert len(engine.catalog) == size + 1
    drain(engine)
    assert engine.completed
    # the later similar step executed without another demonstration
    hits = [line for line in engine.transcript
            if line.startswith("LOOKUP step='barbeque sauce please'")]
    assert hits and "hit=True" in hits[0]
    row7 = next(r for r in engine.row_results if r.original_index == 7)
    assert row7.controls["sauce"] == {"value": "barbeque"}


def test_wrong_mode_guards():
    engine = demo_engine(5)
    with pytest.raises(WrongMode):
        engine.automation_tick()
    with pytest.raises(WrongMode):
        engine.pause()
    with pytest.raises(WrongMode):
        engine.resume()


# ---------------------------------------------------------------------------
# pause / resume / edit

def test_pause_edit_resume_uses_new_text():
    engine = demo_engine(33)
    assert engine.mode == FULL_AUTO
    engine.pause()
    assert engine.mode == PAUSED
    with pytest.raises(WrongMode):
        engine.pause()
    # row index 3 is original row 3; rewrite its "add a daily soup" step
    engine.edit_step(3, 2, "a side of garlic bread")
    engine.resume()
    assert engine.mode == FULL_AUTO
    drain(engine)
    row3 = next(r for r in engine.row_results if r.original_index == 3)
    assert row3.controls["side-bread"] == {"checked": True}
    assert row3.controls["side-daily-soup"] == {"checked": False}


def test_resume_while_running_wrong_mode():
    engine = demo_engine(33)
    with pytest.raises(WrongMode):
        engine.resume()


def test_edit_step_validation():
    engine = demo_engine(5)
    with pytest.raises(BadIndex):
        engine.edit_step(0, 99, "x")
    with pytest.raises(BadIndex):
        engine.edit_step(0, 1, "   ")
    auto = demo_engine(33)
    with pytest.raises(WrongMode):
        auto.edit_step(0, 1, "different text")


def test_edit_current_step_rematches():
    engine = demo_engine(23)  # "lactose intolerant" is current, no highlight
    assert engine.highlight is None
    engine.edit_step(1, 3, "remove dairy products")
    assert engine.highlight is not None
    assert engine.highlight.text == "No cheese"


# ---------------------------------------------------------------------------
# mode machine and status monotonicity

ALLOWED_TRANSITIONS = {
    ("Idle", "Demonstrating"),
    ("Demonstrating", "SemiAuto"),
    ("SemiAuto", "FullAuto"),
    ("SemiAuto", "Paused"), ("Paused", "SemiAuto"),
    ("FullAuto", "Paused"), ("Paused", "FullAuto"),
    ("SemiAuto", "NeedsDemonstration"), ("NeedsDemonstration", "SemiAuto"),
    ("FullAuto", "NeedsDemonstration"), ("NeedsDemonstration", "FullAuto"),
}


def test_mode_transitions_stay_in_machine():
    engine = demo_engine()
    drain(engine)
    assert engine.completed
    transitions = [tuple(line.split()[1::2]) for line in engine.transcript
                   if line.startswith("MODE ")]
    for old, new in transitions:
        assert (old, new) in ALLOWED_TRANSITIONS, f"illegal {old} -> {new}"


def test_statuses_monotone_outside_rewind():
    engine = demo_engine()
    drain(engine)
    seen = {}
    order = {"Pending": 0, "Current": 1, "Done": 2}
    for row_index, row in enumerate(engine.table.rows[:engine.current_row]):
        for step_index, step in enumerate(row.steps):
            key = (row_index, step_index)
            rank = order[step.status]
            assert rank >= seen.get(key, 0)
            seen[key] = rank


def test_input_text_requires_payload():
    engine = demo_engine(2)
    with pytest.raises(UnknownCommand):
        apply_command(engine, {"command": "user-event",
                               "event": {"kind": "InputText",
                                         "target_id": "search"}})


def test_unknown_command():
    engine = demo_engine(2)
    with pytest.raises(UnknownCommand):
        apply_command(engine, {"command": "reboot"})
    with pytest.raises(UnknownCommand):
        apply_command(engine, {"no-command": True})
    with pytest.raises(UnknownCommand):
        apply_command(engine, {"command": "user-event",
                               "event": {"kind": "Hover"}})
