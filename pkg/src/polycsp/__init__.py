"""polycsp: polymorphism-condition testing for finite digraphs.

Subpackages cover the digraph core, arc-consistency search, minor
conditions and indicator structures, pp-formula gadgets, the calculus of
disjoint unions of directed cycles, and direct generation of core trees.
"""

from .digraph import Digraph, LevelMap, RootedTree

__all__ = ["Digraph", "LevelMap", "RootedTree"]
__version__ = "0.1.0"
