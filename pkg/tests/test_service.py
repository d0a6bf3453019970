import json
import socket
import threading
import time

import httpx
import pytest
import uvicorn
from fastapi.testclient import TestClient

from rowbot.scenario import Scenario, run_scenario
from rowbot.service.app import create_app

from conftest import build_engine, fixture_paths, script_commands


@pytest.fixture
def client_engine():
    engine = build_engine("food")
    app = create_app(engine)
    with TestClient(app) as client:
        yield client, engine


@pytest.fixture
def live_server():
    """A real uvicorn server; required because the test client cannot
    consume unbounded event streams."""
    engine = build_engine("food")
    app = create_app(engine)
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    deadline = time.time() + 10
    while time.time() < deadline:
        try:
            httpx.get(base + "/session/snapshot", timeout=1)
            break
        except httpx.TransportError:
            time.sleep(0.02)
    else:
        raise RuntimeError("server did not come up")
    yield base, engine
    server.should_exit = True
    thread.join(timeout=5)


def _sse_events(lines, count):
    events = []
    for line in lines:
        if line.startswith("data: "):
            events.append(json.loads(line[len("data: "):]))
            if len(events) == count:
                break
    return events


# ---------------------------------------------------------------------------
# request/response surface

def test_upload_input_snapshot_matches_load_input(client_engine):
    client, engine = client_engine
    rows = json.loads(fixture_paths("food")["input"].read_text())
    ack = client.post("/session/input", json=rows).json()
    assert ack["ok"]
    snap = client.get("/session/snapshot").json()
    assert snap["seq"] >= ack["seq"]
    table = snap["table"]
    assert [r["original_index"] for r in table["rows"]] == \
        [1, 0, 2, 3, 4, 5, 6, 7, 8, 9]
    first_row_steps = [s["text"] for c in table["rows"][0]["cells"]
                       for s in c["steps"]]
    assert first_row_steps == ["Thai Palace", "Pad Thai", "a side of soup",
                               "no onions", "extra peanuts"]
    assert all(s["status"] == "Pending"
               for r in table["rows"] for c in r["cells"] for s in c["steps"])


def test_confirm_without_prediction_relayed(client_engine):
    client, _ = client_engine
    ack = client.post("/session/command", json={"command": "confirm"}).json()
    assert not ack["ok"]
    assert ack["error"]["type"] == "WrongMode"


def test_malformed_command_is_400(client_engine):
    client, _ = client_engine
    assert client.post("/session/command",
                       json={"command": "reboot"}).status_code == 400
    assert client.post("/session/command",
                       json={"command": "user-event"}).status_code == 400


def test_corpus_page_endpoint(client_engine):
    client, _ = client_engine
    page = client.get("/corpus/page/thai_palace/pad_thai").json()
    assert page["id"] == "thai_palace/pad_thai"
    assert page["tree"]["tag"] == "body"
    assert client.get("/corpus/page/nope").status_code == 404


def test_closed_session_rejected(client_engine):
    client, engine = client_engine
    client.post("/session/close")
    assert client.get("/session/stream").status_code == 409
    assert client.get("/session/snapshot").status_code == 409
    ack = client.post("/session/command", json={"command": "pause"}).json()
    assert not ack["ok"] and ack["error"]["type"] == "SessionClosed"
    assert engine.closed


def test_command_snapshot_causality(client_engine):
    client, _ = client_engine
    rows = json.loads(fixture_paths("food")["input"].read_text())
    ack = client.post("/session/input", json=rows).json()
    snap = client.get("/session/snapshot").json()
    assert snap["seq"] >= ack["seq"]
    assert snap["table"] is not None


# ---------------------------------------------------------------------------
# event stream over a live server

def test_stream_emits_highlight_move_on_expand(live_server):
    base, _ = live_server
    rows = json.loads(fixture_paths("food")["input"].read_text())
    httpx.post(base + "/session/input", json=rows, timeout=5)
    for command in script_commands("food")[1:7]:
        assert httpx.post(base + "/session/command", json=command,
                          timeout=5).json()["ok"]
    with httpx.stream("GET", base + "/session/stream", timeout=10) as stream:
        lines = stream.iter_lines()
        first = _sse_events(lines, 1)[0]
        assert first["highlight"] is None  # sides menu still collapsed
        ack = httpx.post(base + "/session/command", json={
            "command": "user-event",
            "event": {"kind": "Click", "target_id": "sides-menu"}},
            timeout=5).json()
        later = _sse_events(lines, 1)[0]
        assert later["seq"] >= ack["seq"]
        assert later["highlight"]["text"] == "Soup"

        def paths(tree):
            yield tree["path"]
            for child in tree["children"]:
                yield from paths(child)
        assert later["highlight"]["path"] in set(paths(later["page"]["tree"]))


def test_stream_seqs_strictly_increase_and_start_current(live_server):
    base, engine = live_server
    rows = json.loads(fixture_paths("food")["input"].read_text())
    with httpx.stream("GET", base + "/session/stream", timeout=10) as stream:
        lines = stream.iter_lines()
        first = _sse_events(lines, 1)[0]
        assert first["seq"] == engine.snapshot_seq  # current state first
        httpx.post(base + "/session/input", json=rows, timeout=5)
        httpx.post(base + "/session/command",
                   json={"command": "start-recording"}, timeout=5)
        seqs = [first["seq"]] + [e["seq"] for e in _sse_events(lines, 2)]
    assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)


def test_service_replay_matches_cli_transcript(live_server):
    """Shared-semantics law: one command log, two transports, one transcript."""
    commands = [{"command": "tick-rate", "per_second": 500.0}] + \
        script_commands("food")

    paths = fixture_paths("food")
    scenario = Scenario.load(paths["corpus"], paths["input"], paths["lexicon"],
                             paths["script"])
    scenario.commands = commands
    report = run_scenario(scenario)

    base, engine = live_server

    def wait_until(predicate, what):
        deadline = time.time() + 30
        while time.time() < deadline:
            snap = httpx.get(base + "/session/snapshot", timeout=5).json()
            if predicate(snap):
                return snap
            time.sleep(0.005)
        raise AssertionError(f"never reached: {what}")

    for command in commands:
        wait_until(lambda s: s["mode"] != "FullAuto" or s["completed"],
                   "automation quiescent")
        ack = httpx.post(base + "/session/command", json=command,
                         timeout=5).json()
        assert ack["ok"], ack
    wait_until(lambda s: s["completed"], "completion")

    assert engine.transcript_text() == report.transcript

    # a late subscriber to the finished session receives one terminal snapshot
    with httpx.stream("GET", base + "/session/stream", timeout=10) as stream:
        terminal = _sse_events(stream.iter_lines(), 1)[0]
    assert terminal["completed"] is True
    assert terminal["seq"] == engine.snapshot_seq


def test_ui_command_log_replay_equivalence():
    """[SECONDARY] a UI-recorded command log (target paths instead of element
    ids) replays through the CLI to the canonical transcript."""
    paths = fixture_paths("food")
    canonical = run_scenario(Scenario.load(
        paths["corpus"], paths["input"], paths["lexicon"], paths["script"]))
    ui_script = paths["script"].parent / "ui_log.json"
    replayed = run_scenario(Scenario.load(
        paths["corpus"], paths["input"], paths["lexicon"], ui_script))
    assert replayed.transcript == canonical.transcript
    assert replayed.completed
