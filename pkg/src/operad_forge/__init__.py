"""operad-forge: exact operads for string-link infection at the symbolic level.

Little cubes and overlapping intervals with exact rational coordinates, the
trivial-core cylinder model of infection diagrams with its continuity
constraint and order bookkeeping, the normal-form monoid of 1- and 2-string
links, the word-level action, and a CLI with a small text DSL, deterministic
SVG rendering, and a seeded law-fuzzing harness.
"""

from . import action, cubes, diagrams, diskforest, linkmonoid, overlap, perm

__all__ = [
    "action",
    "cubes",
    "diagrams",
    "diskforest",
    "linkmonoid",
    "overlap",
    "perm",
]

__version__ = "0.1.0"
