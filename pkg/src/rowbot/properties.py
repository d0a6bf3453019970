"""Seeded randomized property suites.

Each suite returns a list of failure descriptions (empty means the law held on
every generated case). The CLI exposes them under ``rowbot properties`` and
the acceptance tests run them with fixed seeds.
"""

import random

import numpy as np

from .dom import DomDocument, DomNode
from .errors import DifferentShape, TooManyHoles
from .paths import PathExpr, PathSeg, node_path, resolve_path
from .semantics import EmbeddingVector, best_vector_index, similarity
from .synthesis import (ADVANCE_STEP, NEXT_ROW, ActionEvent, Trace, antiunify,
                        synthesize)
from .templates import ActionTemplate, BoundInput, FixedAction
from .catalog import resolve_template_path

_TAGS = ("div", "ul", "li", "span", "p", "button", "td", "tr")


# ---------------------------------------------------------------------------
# generators

def _random_tree(rng: random.Random, parent: DomNode, depth: int):
    width = rng.randint(0, max(0, 4 - depth))
    for _ in range(width):
        child = DomNode(rng.choice(_TAGS), parent=parent)
        parent.children.append(child)
        _random_tree(rng, child, depth + 1)


def random_document(rng: random.Random) -> DomDocument:
    root = DomNode("body")
    _random_tree(rng, root, 0)
    while len(list(root.iter_subtree())) < 3:
        extra = DomNode(rng.choice(_TAGS), parent=root)
        root.children.append(extra)
    return DomDocument(root, url="generated")


def _random_concrete_path(rng: random.Random) -> PathExpr:
    length = rng.randint(2, 5)
    segs = [PathSeg("body", 1)]
    for _ in range(length - 1):
        segs.append(PathSeg(rng.choice(_TAGS), rng.randint(1, 4)))
    return PathExpr(tuple(segs))


# ---------------------------------------------------------------------------
# similarity laws

def similarity_suite(seed: int = 0, pairs: int = 1000, scalings: int = 50,
                     candidate_sets: int = 100) -> list[str]:
    failures = []
    rng = np.random.default_rng(seed)
    dim = 64

    def vec(raw) -> EmbeddingVector:
        return EmbeddingVector(np.asarray(raw, dtype=float))

    for i in range(pairs):
        a = vec(rng.normal(size=dim))
        b = vec(np.zeros(dim)) if i % 50 == 0 else vec(rng.normal(size=dim))
        s_ab, s_ba = similarity(a, b), similarity(b, a)
        if not (-1.0 - 1e-9 <= s_ab <= 1.0 + 1e-9):
            failures.append(f"pair {i}: similarity {s_ab} outside [-1, 1]")
        if abs(s_ab - s_ba) > 1e-9:
            failures.append(f"pair {i}: asymmetric similarity {s_ab} vs {s_ba}")
        if b.is_zero and s_ab != 0.0:
            failures.append(f"pair {i}: zero vector similarity {s_ab} != 0")
        if not a.is_zero and abs(similarity(a, a) - 1.0) > 1e-9:
            failures.append(f"pair {i}: self-similarity != 1")

    for i in range(scalings):
        query = vec(rng.normal(size=dim))
        cands = [vec(rng.normal(size=dim)) for _ in range(rng.integers(2, 8))]
        base = best_vector_index(query, cands, tau=-1.0)
        scale = float(rng.uniform(0.01, 100.0))
        scaled = vec(query.components * scale)
        after = best_vector_index(scaled, cands, tau=-1.0)
        if base is None or after is None or base[0] != after[0]:
            failures.append(f"scaling {i}: argmax moved under x{scale:.3f}")

    for i in range(candidate_sets):
        query = vec(rng.normal(size=dim))
        cands = [vec(np.abs(rng.normal(size=dim))) for _ in range(rng.integers(1, 8))]
        hit = best_vector_index(query, cands, tau=-1.0)
        assert hit is not None
        index, score = hit
        for tau in np.linspace(-1.0, score, 5):
            again = best_vector_index(query, cands, float(tau))
            if again is None or again[0] != index:
                failures.append(f"set {i}: hit lost at tau={tau:.3f} <= {score:.3f}")
                break
        above = best_vector_index(query, cands, score + 1e-6)
        if above is not None:
            failures.append(f"set {i}: hit returned above the best score")
    return failures


# ---------------------------------------------------------------------------
# anti-unification laws

def _index_diffs(p: PathExpr, q: PathExpr) -> int | None:
    if len(p.segments) != len(q.segments):
        return None
    if any(a.tag != b.tag for a, b in zip(p.segments, q.segments)):
        return None
    return sum(1 for a, b in zip(p.segments, q.segments) if a.index != b.index)


def _check_pair(label: str, doc: DomDocument | None, p: PathExpr, q: PathExpr,
                na: DomNode | None, nb: DomNode | None,
                failures: list[str]):
    diffs = _index_diffs(p, q)
    outcomes = []
    for left, right in ((p, q), (q, p)):
        try:
            outcomes.append(("ok", antiunify(left, right)))
        except DifferentShape:
            outcomes.append(("different-shape", None))
        except TooManyHoles:
            outcomes.append(("too-many-holes", None))
    if outcomes[0][0] != outcomes[1][0]:
        failures.append(f"{label}: verdict not commutative "
                        f"({outcomes[0][0]} vs {outcomes[1][0]})")
        return
    verdict, merged = outcomes[0]
    expected = ("different-shape" if diffs is None
                else "ok" if diffs <= 1 else "too-many-holes")
    if verdict != expected:
        failures.append(f"{label}: expected {expected}, got {verdict}")
        return
    if verdict != "ok":
        return
    reverse = outcomes[1][1]
    if [s.tag for s in merged.segments] != [s.tag for s in reverse.segments]:
        failures.append(f"{label}: tag skeleton not commutative")
    if diffs == 0:
        if merged != p:
            failures.append(f"{label}: identical paths were not preserved")
        return
    var = merged.variables[0]
    observed = merged.observed_values(var)
    if len(observed) != 2:
        failures.append(f"{label}: observed set {observed} should hold 2 values")
        return
    if doc is not None:
        back_a = resolve_path(doc, merged, {var: observed[0]})
        back_b = resolve_path(doc, merged, {var: observed[1]})
        if back_a is not na or back_b is not nb:
            failures.append(f"{label}: observed bindings do not resolve "
                            "to the original nodes")


def antiunify_suite(seed: int = 0, pairs: int = 500) -> list[str]:
    failures: list[str] = []
    rng = random.Random(seed)
    sampled = pairs // 2
    for i in range(sampled):
        doc = random_document(rng)
        nodes = list(doc.iter_nodes())
        na, nb = rng.choice(nodes), rng.choice(nodes)
        _check_pair(f"doc-pair {i}", doc, node_path(doc, na), node_path(doc, nb),
                    na, nb, failures)
    for i in range(pairs - sampled):
        p = _random_concrete_path(rng)
        if rng.random() < 0.3:
            q = _random_concrete_path(rng)
        else:
            # Same skeleton, 0-3 index changes.
            segs = list(p.segments)
            for pos in rng.sample(range(1, len(segs)),
                                  k=rng.randint(0, min(3, len(segs) - 1))):
                segs[pos] = PathSeg(segs[pos].tag, segs[pos].index + rng.randint(1, 3))
            q = PathExpr(tuple(segs))
        _check_pair(f"synthetic-pair {i}", None, p, q, None, None, failures)
    return failures


# ---------------------------------------------------------------------------
# reproduce + extend law

def _form_page(rng: random.Random) -> DomDocument:
    root = DomNode("body")
    for _ in range(rng.randint(2, 4)):
        box = DomNode("div", parent=root)
        root.children.append(box)
        box.children.append(DomNode("input", {"type": "text"}, parent=box))
        box.children.append(DomNode("button", parent=box))
        if rng.random() < 0.5:
            box.children.append(DomNode("span", text="note", parent=box))
    return DomDocument(root, url="form")


def instantiate_template(template: ActionTemplate, doc: DomDocument,
                         row: list[str]) -> list[tuple[str, str, str | None]]:
    """Pure template grounding used to compare program output to the oracle."""
    out = []
    for item in template.items:
        if isinstance(item, BoundInput):
            node = resolve_template_path(doc, item.target)
            out.append(("InputText", str(node_path(doc, node)),
                        row[item.binding.column_index].strip()))
        elif isinstance(item, FixedAction):
            node = resolve_template_path(doc, item.target)
            out.append((item.kind, str(node_path(doc, node)), item.payload))
    return out


def reproduce_extend_suite(seed: int = 0, cases: int = 100) -> list[str]:
    failures: list[str] = []
    rng = random.Random(seed)
    for case in range(cases):
        doc = _form_page(rng)
        inputs = [n for n in doc.iter_nodes()
                  if n.tag == "input"]
        buttons = [n for n in doc.iter_nodes() if n.tag == "button"]
        columns = rng.randint(2, 4)
        k = rng.randint(2, 4)
        rows = [[f"r{r}c{c}x{rng.randint(100, 999)}" for c in range(columns)]
                for r in range(k + 1)]

        ground: list[tuple] = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                ground.append(("InputText",
                               node_path(doc, rng.choice(inputs)),
                               rng.randrange(columns)))
            else:
                ground.append(("Click", node_path(doc, rng.choice(buttons)), None))
        ground_epilogue: list[tuple] = []
        for _ in range(rng.randint(0, 2)):
            ground_epilogue.append(("Click", node_path(doc, rng.choice(buttons)),
                                    None))

        def oracle(items: list[tuple], row: list[str]):
            return [(kind, str(path), row[col] if kind == "InputText" else None)
                    for kind, path, col in items]

        trace = Trace()
        seq = 0
        for r in range(k):
            for kind, path, col in ground:
                seq += 1
                payload = rows[r][col] if kind == "InputText" else None
                trace.append(ActionEvent(kind, path, payload, "form",
                                         (r, 0), seq))
            for _ in range(rng.randint(1, 2)):
                seq += 1
                trace.append(ActionEvent(ADVANCE_STEP, None, None, "form",
                                         (r, 0), seq))
            for kind, path, col in ground_epilogue:
                seq += 1
                trace.append(ActionEvent(kind, path, None, "form", None, seq))
            seq += 1
            trace.append(ActionEvent(NEXT_ROW, None, None, "form", None, seq))

        program = synthesize(trace, rows)
        if program is None:
            failures.append(f"case {case}: synthesis failed on an alignable trace")
            continue
        if len(program.prologue) != len(ground) or \
                len(program.epilogue) != len(ground_epilogue):
            failures.append(f"case {case}: template counts diverge from ground")
            continue

        segments = trace.row_segments()
        ok = True
        for r in range(k):
            replayed = []
            for template in program.prologue + program.epilogue:
                replayed += instantiate_template(template, doc, rows[r])
            recorded = [(e.kind, str(e.target), e.payload)
                        for e in segments[r] if e.is_page_action]
            if replayed != recorded:
                failures.append(f"case {case}: row {r} replay diverged")
                ok = False
                break
        if not ok:
            continue
        extended = []
        for template in program.prologue + program.epilogue:
            extended += instantiate_template(template, doc, rows[k])
        expected = oracle(ground, rows[k]) + oracle(ground_epilogue, rows[k])
        if extended != expected:
            failures.append(f"case {case}: row {k} extension diverged from oracle")
    return failures


# ---------------------------------------------------------------------------
# dom path round trip

def dom_roundtrip_suite(seed: int = 0, cases: int = 100) -> list[str]:
    failures = []
    rng = random.Random(seed)
    for i in range(cases):
        doc = random_document(rng)
        node = rng.choice(list(doc.iter_nodes()))
        back = resolve_path(doc, node_path(doc, node))
        if back is not node:
            failures.append(f"case {i}: path round trip lost the node")
    return failures


ALL_SUITES = {
    "similarity": similarity_suite,
    "antiunify": antiunify_suite,
    "reproduce-extend": reproduce_extend_suite,
    "dom-roundtrip": dom_roundtrip_suite,
}


def run_all(seed: int = 0) -> dict[str, list[str]]:
    return {name: suite(seed) for name, suite in ALL_SUITES.items()}
