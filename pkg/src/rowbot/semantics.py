"""Step segmentation and deterministic text similarity.

The embedder is a hashed bag of tokens and character trigrams. It is fully
deterministic so fixtures and transcripts are reproducible; a learned encoder
can be swapped in by passing any object with the same ``embed`` surface.
World knowledge (e.g. that dairy covers cheese and milk) comes from a
per-corpus lexicon file instead of a pretrained model.
"""

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dom import DomNode

_DATA_DIR = Path(__file__).parent / "data"
_WORD = re.compile(r"[a-z0-9]+")

# Conjunctions that split a fragment when both sides carry content.
CONJUNCTIONS = {"and", "with", "plus"}

DEFAULT_DIMENSION = 256
TOKEN_WEIGHT = 1.0
TRIGRAM_WEIGHT = 0.3


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    source = Path(path) if path else _DATA_DIR / "stopwords.txt"
    return frozenset(
        line.strip() for line in source.read_text().splitlines() if line.strip()
    )

STOPWORDS = load_stopwords()


def normalize(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace. Idempotent."""
    return " ".join(_WORD.findall(text.lower()))


def tokenize(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    return [t for t in tokenize(text) if t not in STOPWORDS]


@dataclass(frozen=True)
class StepText:
    raw: str
    normalized: str

    @classmethod
    def from_raw(cls, raw: str) -> "StepText":
        return cls(raw=raw.strip(), normalized=normalize(raw))


def _split_conjunctions(fragment: str) -> list[str]:
    """Recursively split on a conjunction word when both sides have content."""
    words = fragment.split()
    for i, word in enumerate(words):
        if normalize(word) in CONJUNCTIONS:
            left = " ".join(words[:i])
            right = " ".join(words[i + 1:])
            if content_tokens(left) and content_tokens(right):
                return _split_conjunctions(left) + _split_conjunctions(right)
    return [fragment]


def segment_steps(cell: str) -> list[StepText]:
    """Split one request cell into ordered semantic steps.

    Boundaries are sentence punctuation, semicolons and commas, plus
    coordinating conjunctions where both sides carry a content token.
    Fragments with no content token are dropped.
    """
    steps: list[StepText] = []
    for fragment in re.split(r"[.!?;,]+", cell):
        for piece in _split_conjunctions(fragment):
            piece = piece.strip()
            if piece and content_tokens(piece):
                steps.append(StepText.from_raw(piece))
    return steps


class Lexicon:
    """One-level token expansions, e.g. dairy -> {cheese, milk}."""

    def __init__(self, entries: dict[str, tuple[str, ...]] | None = None):
        self.entries = entries or {}

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        entries: dict[str, tuple[str, ...]] = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            token, _, expansion = line.partition(":")
            words = tuple(w for w in (normalize(p) for p in expansion.split(",")) if w)
            if token.strip() and words:
                entries[normalize(token)] = words
        return cls(entries)

    @classmethod
    def empty(cls) -> "Lexicon":
        return cls({})

    def expand(self, token: str) -> list[str]:
        """The token itself plus its expansions; one level deep only."""
        out = [token]
        for extra in self.entries.get(token, ()):
            if extra not in out:
                out.append(extra)
        return out


class EmbeddingVector:
    __slots__ = ("components", "norm")

    def __init__(self, components: np.ndarray):
        self.components = components
        self.norm = float(np.linalg.norm(components))

    @property
    def is_zero(self) -> bool:
        return self.norm == 0.0


def _bucket(token: str, dim: int) -> int:
    digest = hashlib.md5(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % dim


class HashedTokenEmbedder:
    """Deterministic embedding: hashed tokens plus weighted char trigrams."""

    def __init__(self, dim: int = DEFAULT_DIMENSION,
                 token_weight: float = TOKEN_WEIGHT,
                 trigram_weight: float = TRIGRAM_WEIGHT,
                 stopwords: frozenset[str] = STOPWORDS):
        self.dim = dim
        self.token_weight = token_weight
        self.trigram_weight = trigram_weight
        self.stopwords = stopwords

    def embed(self, text: str, lexicon: Lexicon) -> EmbeddingVector:
        vec = np.zeros(self.dim)
        for token in tokenize(text):
            if token in self.stopwords:
                continue
            for expanded in lexicon.expand(token):
                vec[_bucket(expanded, self.dim)] += self.token_weight
                for i in range(len(expanded) - 2):
                    vec[_bucket(expanded[i:i + 3], self.dim)] += self.trigram_weight
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec = vec / norm
        return EmbeddingVector(vec)


def similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity; zero when either vector is zero."""
    if a.is_zero or b.is_zero:
        return 0.0
    return float(np.dot(a.components, b.components) / (a.norm * b.norm))


def best_vector_index(query: EmbeddingVector,
                      candidates: list[EmbeddingVector],
                      tau: float) -> tuple[int, float] | None:
    """Index of the best-scoring candidate at or above tau; first wins ties."""
    best_i, best_s = -1, -1.0
    for i, cand in enumerate(candidates):
        score = similarity(query, cand)
        if score > best_s:
            best_i, best_s = i, score
    if best_i < 0 or best_s < tau:
        return None
    return best_i, best_s


def best_match(query: StepText,
               candidates: list[tuple[DomNode, str]],
               tau: float,
               lexicon: Lexicon,
               embedder: HashedTokenEmbedder) -> tuple[DomNode, float] | None:
    """The most similar candidate text node, or None below the threshold.

    Candidates arrive in document pre-order, which doubles as the tie-break.
    """
    if not candidates:
        return None
    qv = embedder.embed(query.normalized, lexicon)
    vectors = [embedder.embed(text, lexicon) for _, text in candidates]
    hit = best_vector_index(qv, vectors, tau)
    if hit is None:
        return None
    index, score = hit
    return candidates[index][0], score
