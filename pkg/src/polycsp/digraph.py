"""Finite digraphs and the structural operations everything else builds on.

Vertices are dense integers 0..n-1; the edge relation is a set of ordered
pairs. All values are immutable after construction, so they can be shared
freely between parallel workers.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Iterator, NamedTuple


class NotBalanced(ValueError):
    """The digraph admits no homomorphism to a directed path."""


class NotATree(ValueError):
    """The digraph is not an orientation of a tree."""


class EmptyEdgeSet(ValueError):
    """The operation needs at least one edge."""


class Digraph:
    """A digraph on vertices 0..n-1 with a duplicate-free edge set."""

    __slots__ = ("n", "edges", "_succ", "_pred")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        es = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in es:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        self.n = n
        self.edges = es
        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        for u, v in es:
            succ[u].append(v)
            pred[v].append(u)
        self._succ = tuple(tuple(sorted(s)) for s in succ)
        self._pred = tuple(tuple(sorted(p)) for p in pred)

    def successors(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def predecessors(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, Digraph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Digraph({self.n}, {self.sorted_edges()})"

    # -- text format: first line n, then one "u v" line per edge --

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend(f"{u} {v}" for u, v in self.sorted_edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Digraph":
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
        if not lines:
            raise ValueError("empty edge-list text")
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
        return cls(n, edges)


class LevelMap(NamedTuple):
    """The unique minimal level assignment of a balanced digraph."""

    levels: tuple[int, ...]
    height: int


class RootedTree(NamedTuple):
    tree: Digraph
    root: int


# ---------------------------------------------------------------------------
# constructors for the standard families
# ---------------------------------------------------------------------------

def path(k: int) -> Digraph:
    """Directed path with k edges (so k+1 vertices)."""
    return Digraph(k + 1, [(i, i + 1) for i in range(k)])


def cycle(a: int) -> Digraph:
    """Directed cycle with a vertices."""
    return Digraph(a, [(i, (i + 1) % a) for i in range(a)])


def disjoint_cycles(lengths: Iterable[int]) -> Digraph:
    """Disjoint union of directed cycles, one per length, on fresh vertices."""
    ls = sorted(set(lengths))
    edges = []
    off = 0
    for a in ls:
        edges.extend((off + i, off + (i + 1) % a) for i in range(a))
        off += a
    return Digraph(off, edges)


def oriented_path(runs: Iterable[int]) -> Digraph:
    """Orientation of a path: runs of forward/backward edges, alternating,
    starting forward. The runs (2,1,2) give a zigzag on 6 vertices."""
    runs = list(runs)
    n = sum(runs)
    edges = []
    pos = 0
    forward = True
    for r in runs:
        for _ in range(r):
            edges.append((pos, pos + 1) if forward else (pos + 1, pos))
            pos += 1
        forward = not forward
    return Digraph(n + 1, edges)


def oriented_cycle(runs: Iterable[int]) -> Digraph:
    """Orientation of a cycle, same run encoding as oriented_path."""
    runs = list(runs)
    n = sum(runs)
    edges = []
    pos = 0
    forward = True
    for r in runs:
        for _ in range(r):
            nxt = (pos + 1) % n
            edges.append((pos, nxt) if forward else (nxt, pos))
            pos += 1
        forward = not forward
    return Digraph(n, edges)


def transitive_tournament(n: int) -> Digraph:
    return Digraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete(n: int) -> Digraph:
    """Loopless complete digraph (each pair joined both ways)."""
    return Digraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def single_loop() -> Digraph:
    return Digraph(1, [(0, 0)])


def disjoint_union(a: Digraph, b: Digraph) -> Digraph:
    edges = list(a.edges) + [(u + a.n, v + a.n) for u, v in b.edges]
    return Digraph(a.n + b.n, edges)


# ---------------------------------------------------------------------------
# structural operations
# ---------------------------------------------------------------------------

def reverse(g: Digraph) -> Digraph:
    """Flip every edge. Involutive."""
    return Digraph(g.n, [(v, u) for u, v in g.edges])


def product(a: Digraph, b: Digraph) -> Digraph:
    """Direct product: vertex (x,y) is x*b.n + y (row-major); an edge goes
    between pairs whose components are edges in both factors."""
    edges = [
        (x * b.n + y, x2 * b.n + y2)
        for (x, x2) in a.edges
        for (y, y2) in b.edges
    ]
    return Digraph(a.n * b.n, edges)


def power(g: Digraph, k: int) -> Digraph:
    p = Digraph(1, [(0, 0)])
    for _ in range(k):
        p = product(p, g)
    return p


def _undirected_components(g: Digraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y in itertools.chain(g.successors(x), g.predecessors(x)):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    dq.append(y)
        comps.append(comp)
    return comps


def levels(g: Digraph) -> LevelMap:
    """Level assignment by +-1-weighted BFS over the underlying undirected
    graph, shifted so the minimum per weakly connected component is 0.

    Raises NotBalanced when some undirected walk has nonzero net length
    around a cycle (equivalently: no homomorphism to any directed path).
    """
    lev = [0] * g.n
    seen = [False] * g.n
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        lev[s] = 0
        comp = [s]
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y in g.successors(x):
                if not seen[y]:
                    seen[y] = True
                    lev[y] = lev[x] + 1
                    comp.append(y)
                    dq.append(y)
                elif lev[y] != lev[x] + 1:
                    raise NotBalanced("digraph is not balanced")
            for y in g.predecessors(x):
                if not seen[y]:
                    seen[y] = True
                    lev[y] = lev[x] - 1
                    comp.append(y)
                    dq.append(y)
                elif lev[y] != lev[x] - 1:
                    raise NotBalanced("digraph is not balanced")
        lo = min(lev[v] for v in comp)
        for v in comp:
            lev[v] -= lo
    return LevelMap(tuple(lev), max(lev, default=0))


def is_balanced(g: Digraph) -> bool:
    try:
        levels(g)
        return True
    except NotBalanced:
        return False


def is_tree(g: Digraph) -> bool:
    """True iff g is an orientation of a tree (connected, acyclic
    underlying undirected graph)."""
    if g.n == 0:
        return False
    if len(g.edges) != g.n - 1:
        return False
    return len(_undirected_components(g)) == 1


def is_path_graph(g: Digraph) -> bool:
    """True iff g is an orientation of a path."""
    if not is_tree(g):
        return False
    return all(len(g.successors(v)) + len(g.predecessors(v)) <= 2 for v in range(g.n))


def is_triad(g: Digraph) -> bool:
    """A triad is a tree with exactly one vertex of total degree three and
    all other vertices of degree one or two."""
    if not is_tree(g):
        return False
    degs = sorted(len(g.successors(v)) + len(g.predecessors(v)) for v in range(g.n))
    return degs[-1] == 3 and (g.n < 2 or degs[-2] <= 2)


def line_graph_star(g: Digraph) -> Digraph:
    """L(g*): add a global source below all sources and a global sink above
    all sinks, then take the line graph. Hom-equivalent to g itself."""
    if not g.edges:
        raise EmptyEdgeSet("line_graph_star needs at least one edge")
    bot, top = g.n, g.n + 1
    star_edges = list(g.edges)
    for v in range(g.n):
        if not g.predecessors(v):
            star_edges.append((bot, v))
        if not g.successors(v):
            star_edges.append((v, top))
    star_edges.sort()
    idx = {e: i for i, e in enumerate(star_edges)}
    lg_edges = [
        (idx[(u, v)], idx[(v, w)])
        for (u, v) in star_edges
        for (v2, w) in star_edges
        if v2 == v
    ]
    return Digraph(len(star_edges), lg_edges)


# ---------------------------------------------------------------------------
# canonical codes for orientations of trees
# ---------------------------------------------------------------------------

def _rooted_code(g: Digraph, root: int, parent: int) -> bytes:
    """AHU-style encoding: children sorted by code, each prefixed with a
    direction bit for the edge joining it to this vertex."""
    parts = []
    for c in g.successors(root):
        if c != parent:
            parts.append(b"0(" + _rooted_code(g, c, root) + b")")
    for c in g.predecessors(root):
        if c != parent:
            parts.append(b"1(" + _rooted_code(g, c, root) + b")")
    parts.sort()
    return b"".join(parts)


def rooted_tree_code(t: RootedTree) -> bytes:
    if not is_tree(t.tree):
        raise NotATree("rooted_tree_code expects an orientation of a tree")
    return _rooted_code(t.tree, t.root, -1)


def _center_or_bicenter(g: Digraph):
    """Jordan: iteratively strip leaves of the underlying tree; the last one
    or two surviving vertices are the center / bicenter."""
    deg = [len(g.successors(v)) + len(g.predecessors(v)) for v in range(g.n)]
    alive = g.n
    removed = [False] * g.n
    layer = [v for v in range(g.n) if deg[v] <= 1]
    while alive > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            alive -= 1
            for w in itertools.chain(g.successors(v), g.predecessors(v)):
                if not removed[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    rest = [v for v in range(g.n) if not removed[v]]
    return rest  # one vertex (center) or two (bicenter)


def tree_canonical_code(t: Digraph) -> bytes:
    """Deterministic code with: equal codes iff isomorphic tree orientations.

    Anchored at the Jordan center, or for a bicenter at the directed edge
    between the two central vertices (source side first).
    """
    if not is_tree(t):
        raise NotATree("tree_canonical_code expects an orientation of a tree")
    mid = _center_or_bicenter(t)
    if len(mid) == 1:
        return b"C" + _rooted_code(t, mid[0], -1)
    u, v = mid
    if (u, v) in t.edges:
        src, dst = u, v
    else:
        src, dst = v, u
    return b"B(" + _rooted_code(t, src, dst) + b")(" + _rooted_code(t, dst, src) + b")"


def tree_code_mod_reversal(t: Digraph) -> bytes:
    """Canonical code of the pair {t, reverse(t)}; used to deduplicate
    reports 'up to edge reversal'."""
    return min(tree_canonical_code(t), tree_canonical_code(reverse(t)))


# ---------------------------------------------------------------------------
# exact isomorphism for small digraphs
# ---------------------------------------------------------------------------

_ISO_CAP = 12


def is_isomorphic(a: Digraph, b: Digraph) -> bool:
    """Brute-force isomorphism with invariant pruning; intended for census-
    size inputs (the cap covers the largest fixture pairs). Larger inputs
    are rejected."""
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    if a.n > _ISO_CAP:
        raise ValueError(f"is_isomorphic is capped at n <= {_ISO_CAP}")

    def profile(g, v):
        return (len(g.successors(v)), len(g.predecessors(v)), (v, v) in g.edges)

    pa = sorted(profile(a, v) for v in range(a.n))
    pb = sorted(profile(b, v) for v in range(b.n))
    if pa != pb:
        return False

    bya = {}
    for v in range(b.n):
        bya.setdefault(profile(b, v), []).append(v)

    mapping = [-1] * a.n
    used = [False] * b.n

    def extend(v):
        if v == a.n:
            return True
        for w in bya.get(profile(a, v), ()):
            if used[w]:
                continue
            ok = True
            for u in range(v):
                if ((u, v) in a.edges) != ((mapping[u], w) in b.edges):
                    ok = False
                    break
                if ((v, u) in a.edges) != ((w, mapping[u]) in b.edges):
                    ok = False
                    break
            if ok and (((v, v) in a.edges) == ((w, w) in b.edges)):
                mapping[v] = w
                used[w] = True
                if extend(v + 1):
                    return True
                used[w] = False
                mapping[v] = -1
        return False

    return extend(0)


def all_digraphs_up_to_iso(max_n: int) -> Iterator[Digraph]:
    """Every digraph (loops allowed) with 0..max_n vertices, one per
    isomorphism class. Only sensible for max_n <= 4."""
    yield Digraph(0, [])
    for n in range(1, max_n + 1):
        pairs = [(i, j) for i in range(n) for j in range(n)]
        pos = {p: k for k, p in enumerate(pairs)}
        perms = list(itertools.permutations(range(n)))
        # bit-permutation tables, one per vertex permutation
        tables = []
        for perm in perms:
            tables.append([pos[(perm[i], perm[j])] for (i, j) in pairs])
        seen = set()
        nbits = n * n
        for mask in range(1 << nbits):
            canon = mask
            for tb in tables:
                m2 = 0
                rem = mask
                while rem:
                    b = rem & -rem
                    rem ^= b
                    m2 |= 1 << tb[b.bit_length() - 1]
                if m2 < canon:
                    canon = m2
            if canon in seen:
                continue
            seen.add(canon)
            edges = [pairs[k] for k in range(nbits) if canon >> k & 1]
            yield Digraph(n, edges)
