"""Headless scenario driver: replay a scripted demonstration, run automation
to completion, and grade the final page states against a per-row oracle."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import SiteCorpus
from .errors import ScenarioError
from .commands import apply_command
from .semantics import Lexicon
from .session import FULL_AUTO, EngineConfig, SessionEngine

# Hard ceiling on automation ticks per run; a healthy scenario needs far fewer.
MAX_TICKS = 10_000


@dataclass
class Scenario:
    corpus_dir: Path
    input_path: Path
    lexicon_path: Path
    commands: list[dict]
    oracle_rows: list[dict]
    tau: float = 0.5
    tau_catalog: float = 0.55

    @classmethod
    def load(cls, corpus: str | Path, input_path: str | Path,
             lexicon: str | Path, script: str | Path,
             tau: float | None = None,
             tau_catalog: float | None = None) -> "Scenario":
        for label, path in (("corpus", corpus), ("input", input_path),
                            ("lexicon", lexicon), ("script", script)):
            if not Path(path).exists():
                raise ScenarioError(f"{label} path {path} does not exist")
        data = json.loads(Path(script).read_text())
        if "commands" not in data:
            raise ScenarioError(f"script {script} has no 'commands' list")
        oracle = data.get("oracle", {}).get("rows", [])
        return cls(
            corpus_dir=Path(corpus),
            input_path=Path(input_path),
            lexicon_path=Path(lexicon),
            commands=data["commands"],
            oracle_rows=oracle,
            tau=data.get("tau", 0.5) if tau is None else tau,
            tau_catalog=(data.get("tau_catalog", 0.55)
                         if tau_catalog is None else tau_catalog),
        )


@dataclass
class RowVerdict:
    original_index: int
    passed: bool
    page: str | None = None
    expected_page: str | None = None
    mismatches: list[str] = field(default_factory=list)


@dataclass
class Report:
    rows: list[RowVerdict]
    accuracy: float
    catalog_size: int
    completed: bool
    stopped: dict | None
    transcript: str
    catalog_export: str
    program_export: str

    @property
    def passed_rows(self) -> int:
        return sum(1 for r in self.rows if r.passed)


def _drain_automation(engine: SessionEngine):
    ticks = 0
    while engine.mode == FULL_AUTO and not engine.completed:
        engine.automation_tick()
        ticks += 1
        if ticks > MAX_TICKS:
            raise ScenarioError("automation did not converge "
                                f"within {MAX_TICKS} ticks")


def run_scenario(scenario: Scenario) -> Report:
    """Replay the script, tick automation between commands, grade the rows."""
    corpus = SiteCorpus.load(scenario.corpus_dir)
    lexicon = Lexicon.load(scenario.lexicon_path)
    records = json.loads(scenario.input_path.read_text())
    config = EngineConfig(tau=scenario.tau, tau_catalog=scenario.tau_catalog)
    engine = SessionEngine(corpus, lexicon, config, default_input=records)

    for index, command in enumerate(scenario.commands):
        _drain_automation(engine)
        ack = apply_command(engine, command)
        if not ack["ok"]:
            raise ScenarioError(
                f"command {index} ({command.get('command')}) failed: "
                f"{ack['error']['type']}: {ack['error']['message']}")
    _drain_automation(engine)

    stopped = None
    if not engine.completed:
        stopped = {"mode": engine.mode, "row": engine.current_row,
                   "step": engine.current_step,
                   "diagnostic": engine.paused_diagnostic}

    verdicts = _grade(engine, scenario.oracle_rows)
    graded = len(verdicts)
    accuracy = (sum(1 for v in verdicts if v.passed) / graded) if graded else 0.0
    return Report(
        rows=verdicts,
        accuracy=accuracy,
        catalog_size=len(engine.catalog),
        completed=engine.completed,
        stopped=stopped,
        transcript=engine.transcript_text(),
        catalog_export=engine.catalog.export(),
        program_export=(engine.program.render() + "\n") if engine.program else "",
    )


def _grade(engine: SessionEngine, oracle_rows: list[dict]) -> list[RowVerdict]:
    observed = {r.original_index: r for r in engine.row_results}
    verdicts = []
    for spec in oracle_rows:
        index = spec["row"]
        verdict = RowVerdict(index, passed=False,
                             expected_page=spec.get("page"))
        actual = observed.get(index)
        if actual is None:
            verdict.mismatches.append("row never completed")
            verdicts.append(verdict)
            continue
        verdict.page = actual.page
        if spec.get("page") and actual.page != spec["page"]:
            verdict.mismatches.append(
                f"final page {actual.page!r} != expected {spec['page']!r}")
        expected_controls = spec.get("controls", {})
        for key in sorted(expected_controls):
            want = expected_controls[key]
            got = actual.controls.get(key)
            if got != want:
                verdict.mismatches.append(f"control {key!r}: {got} != {want}")
        extra = sorted(set(actual.controls) - set(expected_controls))
        if extra:
            verdict.mismatches.append(f"controls not covered by oracle: {extra}")
        verdict.passed = not verdict.mismatches
        verdicts.append(verdict)
    return verdicts


def export_artifacts(report: Report, out_dir: str | Path) -> dict[str, Path]:
    """Write transcript/catalog/program/report files; deterministic bytes."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "transcript": out / "transcript.txt",
        "catalog": out / "catalog.json",
        "program": out / "program.txt",
        "report": out / "report.json",
    }
    files["transcript"].write_text(report.transcript)
    files["catalog"].write_text(report.catalog_export)
    files["program"].write_text(report.program_export)
    files["report"].write_text(json.dumps({
        "accuracy": report.accuracy,
        "passed_rows": report.passed_rows,
        "graded_rows": len(report.rows),
        "catalog_size": report.catalog_size,
        "completed": report.completed,
        "stopped": report.stopped,
        "rows": [
            {"row": v.original_index, "passed": v.passed, "page": v.page,
             "mismatches": v.mismatches}
            for v in report.rows
        ],
    }, indent=2, sort_keys=True) + "\n")
    return files
