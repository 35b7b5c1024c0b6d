"""Commutativity checker for diagrams in free monoidal categories.

The package decides whether formal diagrams commute in the free plain,
symmetric, or braided strict monoidal category on a set of generators,
and checks coherence data for strong monoidal functors between them.
"""

from __future__ import annotations

__version__ = "0.1.0"
