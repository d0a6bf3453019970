"""Shared command vocabulary: one dispatcher behind both the HTTP service and
the headless scenario driver, so the two transports cannot drift apart."""

from .errors import EngineError, UnknownCommand
from .session import SessionEngine

COMMANDS = (
    "upload-input", "start-recording", "user-event", "advance", "rewind",
    "next-row", "confirm", "cancel", "pause", "resume", "edit-step",
    "tick-rate",
)

USER_EVENT_KINDS = ("Click", "InputText", "SelectOption", "CancelHighlight")


def apply_command(engine: SessionEngine, command: dict) -> dict:
    """Run one command against the engine.

    Returns an acknowledgement carrying the post-command snapshot sequence
    number. Engine failures are relayed verbatim as ``error`` payloads;
    malformed or unknown commands raise UnknownCommand.
    """
    if not isinstance(command, dict) or "command" not in command:
        raise UnknownCommand("a command must be an object with a 'command' field")
    name = command["command"]
    if name not in COMMANDS:
        raise UnknownCommand(f"unknown command {name!r}")
    try:
        _dispatch(engine, name, command)
    except UnknownCommand:
        raise
    except EngineError as exc:
        return {"ok": False, "seq": engine.snapshot_seq, "mode": engine.mode,
                "error": {"type": exc.code, "message": str(exc)}}
    return {"ok": True, "seq": engine.snapshot_seq, "mode": engine.mode}


def _require(command: dict, *fields: str):
    for name in fields:
        if name not in command:
            raise UnknownCommand(f"command {command.get('command')!r} "
                                 f"requires field {name!r}")


def _dispatch(engine: SessionEngine, name: str, command: dict):
    if name == "upload-input":
        engine.load_input(command.get("rows"))
    elif name == "start-recording":
        engine.start_recording()
    elif name == "user-event":
        _require(command, "event")
        event = command["event"]
        if not isinstance(event, dict) or "kind" not in event:
            raise UnknownCommand("user-event requires an event with a kind")
        kind = event["kind"]
        if kind not in USER_EVENT_KINDS:
            raise UnknownCommand(f"unknown event kind {kind!r}")
        if kind == "InputText" and not event.get("payload"):
            raise UnknownCommand("InputText events require a nonempty payload")
        engine.record_user_event(kind, event.get("target"),
                                 event.get("target_id"), event.get("payload"))
    elif name == "advance":
        engine.advance_carousel()
    elif name == "rewind":
        engine.rewind_carousel()
    elif name == "next-row":
        engine.finish_row()
    elif name == "confirm":
        engine.confirm_prediction()
    elif name == "cancel":
        engine.cancel_prediction()
    elif name == "pause":
        engine.pause()
    elif name == "resume":
        engine.resume()
    elif name == "edit-step":
        _require(command, "row", "step", "text")
        engine.edit_step(int(command["row"]), int(command["step"]),
                         str(command["text"]))
    elif name == "tick-rate":
        _require(command, "per_second")
        engine.set_tick_rate(float(command["per_second"]))
