"""Arc consistency and homomorphism search between finite digraphs.

The candidate lists L(x) of target vertices live as bitmasks inside a
kernel instance (compiled when available). Public functions accept and
return plain sets so callers never touch masks.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ._kernel import KERNEL_NAME, make_instance
from .digraph import Digraph, NotATree, RootedTree, is_tree

__all__ = [
    "KERNEL_NAME",
    "HomInstance",
    "arc_consistency",
    "find_homomorphism",
    "exists_homomorphism",
    "count_homomorphisms",
    "is_core_tree",
    "is_rooted_core",
    "is_core",
    "hom_equivalent",
]


def _adj_masks(nh: int, edges) -> tuple[list[int], list[int]]:
    out_adj = [0] * nh
    in_adj = [0] * nh
    for u, v in edges:
        out_adj[u] |= 1 << v
        in_adj[v] |= 1 << u
    return out_adj, in_adj


class HomInstance:
    """Reusable solver for homomorphisms from one fixed digraph into another.

    Used directly by the tree generator and the indicator module, which
    run many searches against the same target.
    """

    __slots__ = ("n", "nh", "_inst", "_full")

    def __init__(self, n: int, edges, nh: int, hedges):
        out_adj, in_adj = _adj_masks(nh, hedges)
        esrc = [e[0] for e in edges]
        edst = [e[1] for e in edges]
        self.n = n
        self.nh = nh
        self._inst = make_instance(n, esrc, edst, out_adj, in_adj)
        self._full = (1 << nh) - 1

    def full_lists(self) -> list[int]:
        return [self._full] * self.n

    def masks(self, lists: Sequence[Iterable[int]]) -> list[int]:
        return [_to_mask(s) for s in lists]

    def run_ac(self, masks: list[int]) -> bool:
        return self._inst.run_ac(masks)

    def search(self, masks: list[int]) -> Optional[list[int]]:
        return self._inst.search(masks)

    def count(self, masks: list[int]) -> int:
        return self._inst.count(masks)


def _to_mask(values) -> int:
    m = 0
    for v in values:
        m |= 1 << v
    return m


def _from_mask(m: int) -> frozenset[int]:
    out = []
    while m:
        b = m & -m
        m ^= b
        out.append(b.bit_length() - 1)
    return frozenset(out)


def _lists_to_masks(g: Digraph, h: Digraph, lists) -> list[int]:
    if lists is None:
        return [(1 << h.n) - 1] * g.n
    if len(lists) != g.n:
        raise ValueError("need one candidate list per instance vertex")
    return [_to_mask(s) for s in lists]


def full_lists(g: Digraph, h: Digraph) -> list[frozenset[int]]:
    return [frozenset(range(h.n))] * g.n


def arc_consistency(g: Digraph, h: Digraph, lists=None) -> Optional[list[frozenset[int]]]:
    """Greatest arc-consistent refinement of the candidate lists, or None if
    some list empties. The result does not depend on processing order."""
    inst = HomInstance(g.n, g.sorted_edges(), h.n, h.edges)
    masks = _lists_to_masks(g, h, lists)
    if any(m == 0 for m in masks):
        return None
    if not inst.run_ac(masks):
        return None
    return [_from_mask(m) for m in masks]


def find_homomorphism(g: Digraph, h: Digraph, lists=None) -> Optional[tuple[int, ...]]:
    """A list-respecting homomorphism g -> h, or None. MAC search: AC prune,
    branch on a smallest non-singleton list, restore on backtrack."""
    inst = HomInstance(g.n, g.sorted_edges(), h.n, h.edges)
    masks = _lists_to_masks(g, h, lists)
    if any(m == 0 for m in masks):
        return None
    sol = inst.search(masks)
    return None if sol is None else tuple(sol)


def exists_homomorphism(g: Digraph, h: Digraph, lists=None) -> bool:
    return find_homomorphism(g, h, lists) is not None


def count_homomorphisms(g: Digraph, h: Digraph) -> int:
    """Exact number of homomorphisms g -> h by exhaustive backtracking."""
    inst = HomInstance(g.n, g.sorted_edges(), h.n, h.edges)
    return inst.count(inst.full_lists())


def is_valid_homomorphism(g: Digraph, h: Digraph, hom: Sequence[int]) -> bool:
    return all((hom[u], hom[v]) in h.edges for u, v in g.edges)


def is_core_tree(t: Digraph) -> bool:
    """A tree is a core iff running AC of the tree against itself leaves
    every list a singleton."""
    if not is_tree(t):
        raise NotATree("is_core_tree expects an orientation of a tree")
    inst = HomInstance(t.n, t.sorted_edges(), t.n, t.edges)
    masks = inst.full_lists()
    if not inst.run_ac(masks):
        return False
    return all(m & (m - 1) == 0 for m in masks)


def is_rooted_core(t: RootedTree) -> bool:
    """Rooted core test: pin the root to itself, run AC, check all lists
    are singletons."""
    g, root = t
    if not is_tree(g):
        raise NotATree("is_rooted_core expects an orientation of a tree")
    inst = HomInstance(g.n, g.sorted_edges(), g.n, g.edges)
    masks = inst.full_lists()
    masks[root] = 1 << root
    if not inst.run_ac(masks):
        return False
    return all(m & (m - 1) == 0 for m in masks)


def is_core(g: Digraph) -> bool:
    """General core test: g is a core iff no endomorphism identifies two
    vertices, checked by merging each vertex pair and searching for a
    homomorphism of the quotient back into g."""
    if g.n <= 1:
        return True
    if is_tree(g):
        return is_core_tree(g)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            quotient = [(u if u != b else a, v if v != b else a) for u, v in g.edges]
            if exists_homomorphism(Digraph(g.n, quotient), g):
                return False
    return True


def hom_equivalent(a: Digraph, b: Digraph) -> bool:
    return exists_homomorphism(a, b) and exists_homomorphism(b, a)
