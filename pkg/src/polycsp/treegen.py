"""Direct generation of unlabeled core trees, rooted cores, triads, core
paths, and balanced cycles, without post-hoc isomorphism filtering.

Rooted trees are kept in pools keyed by (size, depth), each entry packed
as bytes: a depth byte, a size byte, then a canonical child encoding
(direction bit + parenthesized child code, children sorted). Composing
pool entries in non-increasing order with canonically constrained
orientation bits yields every tree exactly once; arc consistency filters
non-cores along the way.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .digraph import Digraph, RootedTree, is_triad
from .homsearch import HomInstance

__all__ = [
    "RootedPools",
    "generate_rooted_cores",
    "generate_core_trees",
    "generate_trees",
    "filter_triads",
    "generate_balanced_cycles",
    "count_balanced_cycles",
    "core_paths",
]

_LEAF = bytes([0, 1])  # depth 0, size 1, empty code


def _entry_code(entry: bytes) -> bytes:
    return entry[2:]


def _decode_edges(code: bytes) -> list[tuple[int, int]]:
    """Rebuild the edge list of a packed rooted tree; the root is vertex 0
    and children get consecutive indices in code order."""
    edges = []
    nxt = 1  # next free vertex id
    stack = [0]  # current root path
    i = 0
    while i < len(code):
        ch = code[i]
        if ch in (48, 49):  # '0' / '1': edge bit, followed by '('
            child = nxt
            nxt += 1
            parent = stack[-1]
            if ch == 49:
                edges.append((child, parent))
            else:
                edges.append((parent, child))
            stack.append(child)
            i += 2  # skip the '('
        else:  # ')'
            stack.pop()
            i += 1
    return edges


def _compose(children: list[tuple[bytes, int]]) -> tuple[bytes, list[tuple[int, int]]]:
    """Assemble a rooted tree from (packed child, orientation bit) parts;
    returns the packed entry and its edge list (root 0). bit 1 points the
    joining edge from the child's root up to the new root."""
    parts = sorted(children, key=lambda cb: cb[1])
    parts.sort(key=lambda cb: cb[0], reverse=True)
    code = bytearray()
    edges = []
    nxt = 1
    depth = 0
    for entry, bit in parts:
        csize = entry[1]
        depth = max(depth, entry[0] + 1)
        code.append(48 + bit)
        code.append(40)
        code.extend(_entry_code(entry))
        code.append(41)
        off = nxt
        nxt += csize
        edges.append((off, 0) if bit else (0, off))
        edges.extend((u + off, v + off) for (u, v) in _decode_edges(_entry_code(entry)))
    return bytes([depth, nxt]) + bytes(code), edges


def _ac_all_singleton(n: int, edges, root: int | None = None) -> bool:
    inst = HomInstance(n, edges, n, edges)
    masks = inst.full_lists()
    if root is not None:
        masks[root] = 1 << root
    if not inst.run_ac(masks):
        return False
    return all(m & (m - 1) == 0 for m in masks)


class RootedPools:
    """Pools of packed rooted trees keyed (size, depth), grown on demand.

    With cores_only the pools hold exactly the rooted cores; composing from
    them stays complete because subtrees of (rooted) cores are rooted cores.
    """

    def __init__(self, cores_only: bool = True):
        self.cores_only = cores_only
        self.pools: dict[tuple[int, int], list[bytes]] = {(1, 0): [_LEAF]}
        self.built = 1
        self.ac_calls = 0

    def ensure(self, size: int) -> None:
        while self.built < size:
            self._grow(self.built + 1)
            self.built += 1

    def _grow(self, n: int) -> None:
        for d in range(1, n):
            out = []
            for children in self._child_multisets(n - 1, first_depth=d - 1):
                for parts in _bit_splits(children):
                    entry, edges = _compose(parts)
                    if self.cores_only:
                        self.ac_calls += 1
                        if not _ac_all_singleton(n, edges, root=0):
                            continue
                    out.append(entry)
            if out:
                out.sort(reverse=True)
                self.pools[(n, d)] = out

    def groups_desc(self, max_size: int, max_depth: int) -> list[tuple[int, int]]:
        keys = [
            (s, d)
            for (s, d) in self.pools
            if s <= max_size and d <= max_depth
        ]
        keys.sort(key=lambda sd: (sd[1], sd[0]), reverse=True)
        return keys

    def _child_multisets(self, total: int, first_depth: int | None, need_two_equal: bool = False):
        """Non-increasing sequences of pool entries with sizes summing to
        total. first_depth pins the first (deepest) child's depth;
        need_two_equal instead demands the two deepest children share a
        depth (the center case)."""
        self.ensure(total)
        max_depth = first_depth if first_depth is not None else total
        groups = self.groups_desc(total, max_depth)
        chosen: list[bytes] = []

        def rec(gi: int, ei: int, remaining: int):
            if remaining == 0:
                if need_two_equal and (len(chosen) < 2 or chosen[0][0] != chosen[1][0]):
                    return
                yield list(chosen)
                return
            for g in range(gi, len(groups)):
                s, d = groups[g]
                if s > remaining:
                    continue
                if not chosen and first_depth is not None and d != first_depth:
                    if d < first_depth:
                        break
                    continue
                if need_two_equal and len(chosen) == 1 and d != chosen[0][0]:
                    if d < chosen[0][0]:
                        break
                    continue
                pool = self.pools[(s, d)]
                start = ei if g == gi else 0
                for idx in range(start, len(pool)):
                    chosen.append(pool[idx])
                    yield from rec(g, idx, remaining - s)
                    chosen.pop()

        return rec(0, 0, total)


def _bit_splits(children: list[bytes]) -> Iterator[list[tuple[bytes, int]]]:
    """All orientation-bit assignments with bits non-decreasing along runs
    of equal subtrees (the canonical-form constraint)."""
    runs: list[tuple[bytes, int]] = []
    for e in children:
        if runs and runs[-1][0] == e:
            runs[-1] = (e, runs[-1][1] + 1)
        else:
            runs.append((e, 1))
    splits = [range(k + 1) for _, k in runs]
    for ones in itertools.product(*splits):
        parts = []
        for (e, k), o in zip(runs, ones):
            parts.extend([(e, 0)] * (k - o))
            parts.extend([(e, 1)] * o)
        yield parts


def generate_rooted_cores(n: int, d: int, pools: RootedPools | None = None) -> list[RootedTree]:
    """Every rooted core with n vertices and depth d, exactly once."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    pools = pools or RootedPools(cores_only=True)
    pools.ensure(n)
    out = []
    for entry in pools.pools.get((n, d), []):
        g = Digraph(n, _decode_edges(_entry_code(entry)))
        out.append(RootedTree(g, 0))
    return out


def _tree_candidates(pools: RootedPools, n: int):
    """Edge lists of all candidate trees with n vertices, each isomorphism
    class exactly once (bicenter pairs plus center multisets)."""
    if n == 1:
        yield 1, []
        return
    pools.ensure(n - 1)
    # bicenter: ordered pairs of equal depth, joined by an edge r1 -> r2
    keys = sorted(pools.pools)
    for s1, d1 in keys:
        for e1 in pools.pools[(s1, d1)]:
            s2 = n - s1
            if s2 < 1 or (s2, d1) not in pools.pools:
                continue
            edges1 = _decode_edges(_entry_code(e1))
            for e2 in pools.pools[(s2, d1)]:
                edges = [(0, s1)]
                edges.extend(edges1)
                edges.extend((u + s1, v + s1) for (u, v) in _decode_edges(_entry_code(e2)))
                yield n, edges
    # center: two deepest children of the new root share their depth
    for children in pools._child_multisets(n - 1, first_depth=None, need_two_equal=True):
        for parts in _bit_splits(children):
            _, edges = _compose(parts)
            yield n, edges


def generate_trees(
    n: int, cores_only: bool = False, pools: RootedPools | None = None
) -> Iterator[Digraph]:
    """All unlabeled trees with n vertices (every isomorphism class exactly
    once); with cores_only, exactly the core trees."""
    if n < 1:
        raise ValueError("need n >= 1")
    if pools is None:
        pools = RootedPools(cores_only=cores_only)
    elif pools.cores_only != cores_only:
        raise ValueError("pool kind does not match cores_only")
    for nn, edges in _tree_candidates(pools, n):
        if cores_only:
            pools.ac_calls += 1
            if not _ac_all_singleton(nn, edges):
                continue
        yield Digraph(nn, edges)


def generate_core_trees(n: int, pools: RootedPools | None = None) -> Iterator[Digraph]:
    return generate_trees(n, cores_only=True, pools=pools)


def filter_triads(trees: Iterable[Digraph]) -> Iterator[Digraph]:
    for t in trees:
        if is_triad(t):
            yield t


def core_paths(n: int, pools: RootedPools | None = None) -> list[Digraph]:
    """Core orientations of a path with n vertices, via direct enumeration
    of direction strings up to the flip symmetry."""
    if n == 1:
        return [Digraph(1, [])]
    out = []
    for bits in itertools.product((0, 1), repeat=n - 1):
        flipped = tuple(1 - b for b in reversed(bits))
        if flipped < bits:
            continue
        edges = [(i, i + 1) if b else (i + 1, i) for i, b in enumerate(bits)]
        if _ac_all_singleton(n, edges):
            out.append(Digraph(n, edges))
    return out


def generate_triads(n: int, cores_only: bool = True) -> Iterator[Digraph]:
    """Triads with n vertices directly: three oriented arms glued at the
    degree-three vertex, one representative per isomorphism class.

    An arm is the direction string read from the center outwards; the
    multiset of arm strings determines the triad since the degree-three
    vertex is unique.
    """
    if n < 4:
        return
    for a in range((n - 1 + 2) // 3, n - 2):
        for b in range(1, min(a, n - 1 - a) + 1):
            c = n - 1 - a - b
            if c < 1 or c > b:
                continue
            arms_a = [bits for bits in itertools.product((0, 1), repeat=a)]
            arms_b = arms_a if b == a else list(itertools.product((0, 1), repeat=b))
            arms_c = (
                arms_a if c == a else arms_b if c == b else list(itertools.product((0, 1), repeat=c))
            )
            for s1 in arms_a:
                for s2 in arms_b:
                    if b == a and s2 > s1:
                        continue
                    for s3 in arms_c:
                        if c == b and s3 > s2:
                            continue
                        edges = []
                        pos = 0
                        for arm in (s1, s2, s3):
                            prev = 0  # center
                            for bit in arm:
                                pos += 1
                                edges.append((prev, pos) if bit else (pos, prev))
                                prev = pos
                        if cores_only and not _ac_all_singleton(n, edges):
                            continue
                        yield Digraph(n, edges)


class OddLength(ValueError):
    pass


def _necklace_canonical(mask: int, n: int) -> int:
    """Least representative under rotation and the traversal-reversal
    symmetry (reverse the bit string and complement it)."""
    full = (1 << n) - 1
    best = mask
    rev = 0
    m = mask
    for i in range(n):
        rev = (rev << 1) | ((m >> i) & 1)
    rev = (~rev) & full
    for start in (mask, rev):
        cur = start
        for _ in range(n):
            cur = ((cur << 1) | (cur >> (n - 1))) & full
            if cur < best:
                best = cur
    return best


def generate_balanced_cycles(n: int) -> Iterator[Digraph]:
    """All orientations of an n-cycle with equally many forward and backward
    edges, one per isomorphism class."""
    if n % 2 != 0 or n < 4:
        raise OddLength("balanced cycles need an even length >= 4")
    half = n // 2
    for ones in itertools.combinations(range(n), half):
        mask = 0
        for i in ones:
            mask |= 1 << i
        if _necklace_canonical(mask, n) != mask:
            continue
        edges = [
            (i, (i + 1) % n) if (mask >> i) & 1 else ((i + 1) % n, i) for i in range(n)
        ]
        yield Digraph(n, edges)


def count_balanced_cycles(n: int) -> int:
    return sum(1 for _ in generate_balanced_cycles(n))


def cycle_code_mod_reversal(g: Digraph) -> int:
    """Canonical direction-string (as an integer) of an orientation of a
    cycle, up to rotation, traversal flip, and edge reversal."""
    succ = {}
    for v in range(g.n):
        nbrs = sorted(set(g.successors(v)) | set(g.predecessors(v)))
        if len(nbrs) != 2:
            raise ValueError("not an orientation of a cycle")
        succ[v] = nbrs
    walk = [0, succ[0][0]]
    while len(walk) < g.n:
        a, b = walk[-2], walk[-1]
        nxt = succ[b][0] if succ[b][1] == a else succ[b][1]
        walk.append(nxt)
    mask = 0
    for i in range(g.n):
        if (walk[i], walk[(i + 1) % g.n]) in g.edges:
            mask |= 1 << i
    comp = ~mask & ((1 << g.n) - 1)
    return min(_necklace_canonical(mask, g.n), _necklace_canonical(comp, g.n))
