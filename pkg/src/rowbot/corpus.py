"""Mock-site corpus: a manifest of page files plus the entry page.

The manifest maps page identifiers (plain strings, often URL-shaped like
``search/Thai Palace``) to markup files. Navigation anywhere outside the
manifest is an error; a fresh parse is returned on every load so callers own
their mutations.
"""

import json
from pathlib import Path

from .dom import DomDocument, parse_document
from .errors import ScenarioError, UnknownPage


class SiteCorpus:
    def __init__(self, root: Path, entry: str, pages: dict[str, str]):
        self.root = root
        self.entry = entry
        self.pages = pages

    @classmethod
    def load(cls, directory: str | Path) -> "SiteCorpus":
        root = Path(directory)
        manifest_path = root / "manifest.json"
        if not manifest_path.is_file():
            raise ScenarioError(f"no corpus manifest at {manifest_path}")
        manifest = json.loads(manifest_path.read_text())
        entry = manifest.get("entry")
        pages = manifest.get("pages")
        if not entry or not isinstance(pages, dict) or entry not in pages:
            raise ScenarioError(f"corpus manifest {manifest_path} is incomplete")
        return cls(root, entry, pages)

    def page_ids(self) -> list[str]:
        return list(self.pages)

    def page(self, page_id: str) -> DomDocument:
        """Parse and return a pristine copy of the page."""
        if page_id not in self.pages:
            raise UnknownPage(f"page {page_id!r} is not in the corpus")
        source = (self.root / self.pages[page_id]).read_text()
        return parse_document(source, url=page_id)
