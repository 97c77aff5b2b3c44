"""Organize RDF knowledge graphs into semantic units."""

from ._core import Graph, SemunitsError, align, mint_upri, process, stable_models

__all__ = ["Graph", "SemunitsError", "align", "mint_upri", "process", "stable_models"]
