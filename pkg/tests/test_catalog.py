import pytest

from rowbot.catalog import (Catalog, CatalogEntry, build_template,
                            instantiate)
from rowbot.corpus import SiteCorpus
from rowbot.errors import (EmptyDemonstration, MultipleSemanticActs,
                           StructuralDrift, TargetNotFound)
from rowbot.dom import parse_document
from rowbot.paths import parse_path
from rowbot.semantics import StepText
from rowbot.synthesis import ActionEvent
from rowbot.templates import (ActionTemplate, BoundInput, ColumnBinding,
                              FixedAction, Reveal, SemanticTarget)

from conftest import fixture_paths


def _event(kind, path, seq, payload=None, tag=None, highlight=None):
    return ActionEvent(kind, parse_path(path), payload, "page", (0, 1), seq,
                       target_tag=tag, highlight_control=highlight)


def test_build_template_reveal_then_semantic():
    radio = parse_path("body[1]/menu[1]/ul[1]/li[1]/input[1]")
    events = [
        _event("Click", "body[1]/menu[1]", 1, tag="menu"),
        ActionEvent("Click", radio, None, "page", (0, 1), 2,
                    target_tag="input", highlight_control=radio),
    ]
    template = build_template(events)
    assert isinstance(template.items[0], Reveal)
    assert isinstance(template.items[1], SemanticTarget)
    assert template.items[1].kind == "Click"


def test_build_template_single_semantic_click():
    target = parse_path("body[1]/ul[1]/li[1]/input[1]")
    events = [ActionEvent("Click", target, None, "page", (0, 1), 1,
                          target_tag="input", highlight_control=target)]
    template = build_template(events)
    assert len(template.items) == 1
    assert isinstance(template.items[0], SemanticTarget)


def test_build_template_empty_demonstration():
    with pytest.raises(EmptyDemonstration):
        build_template([])
    with pytest.raises(EmptyDemonstration):
        build_template([ActionEvent("CancelHighlight", None, None, "page",
                                    (0, 1), 1)])


def test_build_template_multiple_semantic_acts():
    target = parse_path("body[1]/input[1]")
    events = [
        ActionEvent("Click", target, None, "page", (0, 1), 1,
                    target_tag="input", highlight_control=target),
        ActionEvent("Click", target, None, "page", (0, 1), 2,
                    target_tag="input", highlight_control=target),
    ]
    with pytest.raises(MultipleSemanticActs):
        build_template(events)


def test_build_template_non_highlight_clicks_are_fixed():
    events = [
        _event("Click", "body[1]/button[1]", 1, tag="button"),
        _event("InputText", "body[1]/input[1]", 2, payload="x", tag="input"),
    ]
    template = build_template(events)
    assert all(isinstance(item, FixedAction) for item in template.items)


@pytest.fixture
def food_catalog(food_lexicon, embedder):
    catalog = Catalog(food_lexicon, embedder)
    radio = parse_path("body[1]/menu[1]/ul[1]/li[1]/input[1]")
    catalog.record_mapping(
        StepText.from_raw("a side of soup"),
        [_event("Click", "body[1]/menu[1]", 1, tag="menu"),
         ActionEvent("Click", radio, None, "thai_palace/pad_thai", (0, 2), 2,
                     target_tag="input", highlight_control=radio)],
        "thai_palace/pad_thai")
    checkbox = parse_path("body[1]/div[1]/ul[1]/li[1]/input[1]")
    catalog.record_mapping(
        StepText.from_raw("no onions"),
        [ActionEvent("Click", checkbox, None, "thai_palace/pad_thai", (0, 3), 3,
                     target_tag="input", highlight_control=checkbox)],
        "thai_palace/pad_thai")
    return catalog


def test_lookup_semantic_hit(food_catalog):
    match = food_catalog.lookup(StepText.from_raw("add a daily soup"), 0.55)
    assert match.hit and match.entry.key.raw == "a side of soup"


def test_lookup_exact_key_scores_one(food_catalog):
    match = food_catalog.lookup(StepText.from_raw("a side of soup"), 0.55)
    assert match.hit and match.score == pytest.approx(1.0)


def test_lookup_novel_step_misses(food_catalog):
    match = food_catalog.lookup(StepText.from_raw("select barbeque sauce"), 0.55)
    assert not match.hit and match.score < 0.55


def test_lookup_empty_catalog(food_lexicon, embedder):
    match = Catalog(food_lexicon, embedder).lookup(StepText.from_raw("x"), 0.5)
    assert not match.hit and match.score == 0.0


def test_lookup_superset_never_lowers_score(food_catalog, food_lexicon, embedder):
    query = StepText.from_raw("add a daily soup")
    before = food_catalog.lookup(query, 0.0).score
    target = parse_path("body[1]/div[2]/ul[1]/li[1]/input[1]")
    food_catalog.record_mapping(
        StepText.from_raw("extra peanuts"),
        [ActionEvent("Click", target, None, "p", (0, 4), 9,
                     target_tag="input", highlight_control=target)], "p")
    assert food_catalog.lookup(query, 0.0).score >= before


def _food_page(page_id):
    corpus = SiteCorpus.load(fixture_paths("food")["corpus"])
    return corpus.page(page_id)


def test_instantiate_daily_soup_generalizes(food_catalog, food_lexicon, embedder):
    entry = food_catalog.entries[0]
    doc = _food_page("pizza_corner/margherita_pizza")
    actions, match = instantiate(entry, StepText.from_raw("add a daily soup"),
                                 doc, ["Pizza Corner"], 0.5, food_lexicon,
                                 embedder)
    assert [a.kind for a in actions] == ["Click", "Click"]
    assert str(actions[0].target) == "body[1]/menu[1]"
    # the radio next to the "Daily Soup" label, resolved per page
    assert str(actions[1].target) == "body[1]/menu[1]/ul[1]/li[3]/input[1]"
    assert match is not None and match.text == "Daily Soup"


def test_instantiate_self_replay(food_catalog, food_lexicon, embedder):
    entry = food_catalog.entries[0]
    doc = _food_page(entry.demonstrated_on)
    actions, _ = instantiate(entry, entry.key, doc, ["Thai Palace"], 0.5,
                             food_lexicon, embedder)
    assert [(a.kind, str(a.target)) for a in actions] == [
        ("Click", "body[1]/menu[1]"),
        ("Click", "body[1]/menu[1]/ul[1]/li[1]/input[1]"),
    ]


def test_instantiate_missing_section_drifts(food_catalog, food_lexicon, embedder):
    entry = food_catalog.entries[0]
    doc = parse_document("<body><p>nothing here</p></body>")
    with pytest.raises((StructuralDrift, TargetNotFound)):
        instantiate(entry, StepText.from_raw("add a daily soup"), doc,
                    [], 0.5, food_lexicon, embedder)


def test_instantiate_semantic_miss_is_target_not_found(food_catalog,
                                                       food_lexicon, embedder):
    entry = food_catalog.entries[1]  # plain semantic click, no reveal
    doc = _food_page("ramen_house/miso_ramen")
    with pytest.raises(TargetNotFound):
        instantiate(entry, StepText.from_raw("unrelated gibberish"), doc,
                    [], 0.5, food_lexicon, embedder)


def test_instantiate_bound_input(food_lexicon, embedder):
    from rowbot.catalog import CatalogEntry

    template = ActionTemplate((BoundInput(parse_path("body[1]/input[1]"),
                                          ColumnBinding(0)),))
    doc = parse_document('<body><input id="q" type="text" value="" /></body>')
    entry = CatalogEntry(StepText.from_raw("enter item"),
                         embedder.embed("enter item", food_lexicon),
                         template, "page", 0)
    actions, match = instantiate(entry, entry.key, doc, ["GoodRx item"], 0.5,
                                 food_lexicon, embedder)
    assert actions[0].kind == "InputText"
    assert actions[0].payload == "GoodRx item"
    assert match is None


def test_catalog_export_import_roundtrip(food_catalog, food_lexicon, embedder):
    text = food_catalog.export()
    clone = Catalog.import_(text, food_lexicon, embedder)
    assert len(clone) == len(food_catalog)
    assert clone.export() == text
    match = clone.lookup(StepText.from_raw("add a daily soup"), 0.55)
    assert match.hit and match.entry.key.raw == "a side of soup"


def test_instantiate_toggles_checkbox_for_short_label(food_catalog,
                                                      food_lexicon, embedder):
    # entry taught as "no onions" drives the checkbox next to a bare
    # "Pickles" label when asked for "no pickles"
    entry = food_catalog.entries[1]
    doc = parse_document(
        '<body><ul>'
        '<li><label for="p">Pickles</label><input type="checkbox" id="p" /></li>'
        '<li><label for="m">Mustard</label><input type="checkbox" id="m" /></li>'
        '</ul></body>')
    actions, match = instantiate(entry, StepText.from_raw("no pickles"), doc,
                                 [], 0.5, food_lexicon, embedder)
    assert match.text == "Pickles"
    assert len(actions) == 1 and actions[0].kind == "Click"
    from rowbot.actions import apply_action
    apply_action(doc, actions[0])
    assert doc.find_by_id("p").checked
    assert not doc.find_by_id("m").checked


def test_catalog_roundtrip_all_item_kinds(food_lexicon, embedder):
    catalog = Catalog(food_lexicon, embedder)
    target = parse_path("body[1]/div[1]/input[1]")
    catalog.entries.append(CatalogEntry(
        StepText.from_raw("mixed template"),
        embedder.embed("mixed template", food_lexicon),
        ActionTemplate((
            Reveal(parse_path("body[1]/menu[1]")),
            FixedAction("Click", parse_path("body[1]/button[1]")),
            BoundInput(target, ColumnBinding(2)),
            SemanticTarget("SelectOption"),
        )),
        "somewhere", 0))
    text = catalog.export()
    clone = Catalog.import_(text, food_lexicon, embedder)
    assert clone.export() == text
    items = clone.entries[0].template.items
    assert [type(i).__name__ for i in items] == \
        ["Reveal", "FixedAction", "BoundInput", "SemanticTarget"]
    assert items[2].binding.column_index == 2
