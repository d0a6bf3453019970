"""rowbot: teach-by-demonstration web data-entry automation."""

__version__ = "0.1.0"
