import json
from pathlib import Path

import pytest

from rowbot.corpus import SiteCorpus
from rowbot.semantics import HashedTokenEmbedder, Lexicon
from rowbot.session import EngineConfig, SessionEngine

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

CORPORA = ("food", "shopping", "pharmacy", "ticketing")


def fixture_paths(name: str) -> dict:
    root = FIXTURES / name
    return {
        "corpus": root / "site",
        "input": root / "input.json",
        "lexicon": root / "lexicon.txt",
        "script": root / "scenario.json",
    }


def build_engine(name: str = "food", **config) -> SessionEngine:
    paths = fixture_paths(name)
    corpus = SiteCorpus.load(paths["corpus"])
    lexicon = Lexicon.load(paths["lexicon"])
    records = json.loads(paths["input"].read_text())
    return SessionEngine(corpus, lexicon, EngineConfig(**config),
                         default_input=records)


def script_commands(name: str) -> list[dict]:
    return json.loads(fixture_paths(name)["script"].read_text())["commands"]


@pytest.fixture
def food_engine() -> SessionEngine:
    return build_engine("food")


@pytest.fixture
def food_lexicon() -> Lexicon:
    return Lexicon.load(fixture_paths("food")["lexicon"])


@pytest.fixture
def embedder() -> HashedTokenEmbedder:
    return HashedTokenEmbedder()
