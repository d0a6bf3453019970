"""Command line front end.

``rowbot run`` replays a scripted scenario headlessly and grades it;
``rowbot properties`` runs the randomized law suites;
``rowbot serve`` starts the HTTP service for the companion UI.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import ScenarioError
from .properties import ALL_SUITES
from .scenario import Scenario, export_artifacts, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rowbot")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run = sub.add_parser("run", help="replay a scenario and grade the result")
    run.add_argument("--corpus", required=True, help="mock-site corpus directory")
    run.add_argument("--input", required=True, help="input table JSON file")
    run.add_argument("--lexicon", required=True, help="lexicon file")
    run.add_argument("--script", required=True,
                     help="scenario script JSON (commands + oracle)")
    run.add_argument("--out", help="directory for transcript/catalog/program exports")
    run.add_argument("--tau", type=float, default=None,
                     help="page-search similarity threshold")
    run.add_argument("--tau-catalog", type=float, default=None,
                     help="catalog match threshold")
    run.add_argument("--seed", type=int, default=0,
                     help="reserved for property generators; scenario runs are "
                          "deterministic")

    props = sub.add_parser("properties", help="run the randomized law suites")
    props.add_argument("--seed", type=int, default=0)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--corpus", required=True)
    serve.add_argument("--lexicon", required=True)
    serve.add_argument("--input", help="preload this input table file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--tau", type=float, default=0.5)
    serve.add_argument("--tau-catalog", type=float, default=0.55)
    serve.add_argument("--ui", help="frontend directory to mount at /ui "
                                    "(default: ./frontend when present)")
    return parser


def _cmd_run(args) -> int:
    try:
        scenario = Scenario.load(args.corpus, args.input, args.lexicon,
                                 args.script, tau=args.tau,
                                 tau_catalog=args.tau_catalog)
        report = run_scenario(scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    for verdict in report.rows:
        status = "pass" if verdict.passed else "FAIL"
        line = f"row {verdict.original_index}: {status}"
        if verdict.mismatches:
            line += "  (" + "; ".join(verdict.mismatches) + ")"
        print(line)
    print(f"accuracy: {report.passed_rows}/{len(report.rows)} "
          f"({report.accuracy:.1%})")
    print(f"catalog size: {report.catalog_size}")
    if report.stopped:
        print(f"stopped before completion: {json.dumps(report.stopped)}")
    if args.out:
        files = export_artifacts(report, args.out)
        for name, path in files.items():
            print(f"wrote {name}: {path}")
    return 0 if (report.accuracy == 1.0 and report.rows) else 1


def _cmd_properties(args) -> int:
    failed = 0
    for name, suite in ALL_SUITES.items():
        failures = suite(args.seed)
        if failures:
            failed += 1
            print(f"{name}: FAIL ({len(failures)} failures)")
            for line in failures[:5]:
                print(f"  - {line}")
        else:
            print(f"{name}: PASS")
    return 0 if failed == 0 else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .corpus import SiteCorpus
    from .semantics import Lexicon
    from .service.app import create_app
    from .session import EngineConfig, SessionEngine

    corpus = SiteCorpus.load(args.corpus)
    lexicon = Lexicon.load(args.lexicon)
    default_input = None
    if args.input:
        default_input = json.loads(Path(args.input).read_text())
    engine = SessionEngine(corpus, lexicon,
                           EngineConfig(tau=args.tau, tau_catalog=args.tau_catalog),
                           default_input=default_input)
    ui_dir = args.ui
    if ui_dir is None and Path("frontend/index.html").is_file():
        ui_dir = "frontend"
    app = create_app(engine, ui_dir=ui_dir)
    if ui_dir:
        print(f"ui mounted at http://{args.host}:{args.port}/ui/")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.subcommand == "run":
        return _cmd_run(args)
    if args.subcommand == "properties":
        return _cmd_properties(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
