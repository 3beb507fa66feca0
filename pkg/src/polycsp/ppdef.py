"""Primitive-positive formulas as gadget graphs: evaluation over a digraph,
pp-powers, and verification of pp-construction claims.

A formula is a digraph whose vertices are tagged free(k) / existential /
constant(v), with ordinary E-edges plus unordered equality edges. Its
value over a target is the set of free-slot tuples extendable to a
homomorphism of the gadget that respects the constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .digraph import Digraph
from .homsearch import HomInstance, hom_equivalent, is_core

FREE = "F"
EXISTENTIAL = "X"
CONSTANT = "C"

_PP_POWER_CAP = 100_000


class ConstantClash(ValueError):
    """An equality class contains two distinct constants."""


class SizeLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class PPFormula:
    """Gadget graph with tagged vertices.

    tags[i] is ("F", k) for the k-th free slot, ("X",) for an existential
    vertex, or ("C", v) for a constant pinned to target vertex v. A formula
    with is_bottom set evaluates to the empty relation regardless of the
    target (used for constructions that need an always-empty edge set).
    """

    nverts: int
    tags: tuple[tuple, ...]
    eedges: tuple[tuple[int, int], ...]
    eqs: tuple[tuple[int, int], ...]
    is_bottom: bool = False

    @property
    def arity(self) -> int:
        return sum(1 for t in self.tags if t[0] == FREE)

    def __post_init__(self):
        frees = sorted(t[1] for t in self.tags if t[0] == FREE)
        if frees != list(range(len(frees))):
            raise ValueError("free slots must be exactly 0..d-1, once each")
        for u, v in itertools.chain(self.eedges, self.eqs):
            if not (0 <= u < self.nverts and 0 <= v < self.nverts):
                raise ValueError("edge endpoint out of range")


def bottom_formula(arity: int) -> PPFormula:
    """The always-false formula of the given arity."""
    tags = tuple((FREE, k) for k in range(arity))
    return PPFormula(arity, tags, (), (), is_bottom=True)


def formula_from_text(text: str) -> PPFormula:
    """Gadget text format: first line the vertex count, then one tag line
    per vertex ("F k" / "X" / "C v"), then edge lines "u v" and equality
    lines "= u v". '#' starts a comment."""
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    n = int(lines[0])
    tags = []
    for ln in lines[1 : 1 + n]:
        parts = ln.split()
        if parts[0] == "F":
            tags.append((FREE, int(parts[1])))
        elif parts[0] == "X":
            tags.append((EXISTENTIAL,))
        elif parts[0] == "C":
            tags.append((CONSTANT, int(parts[1])))
        else:
            raise ValueError(f"bad tag line {ln!r}")
    eedges, eqs = [], []
    for ln in lines[1 + n :]:
        parts = ln.split()
        if parts[0] == "=":
            eqs.append((int(parts[1]), int(parts[2])))
        else:
            eedges.append((int(parts[0]), int(parts[1])))
    return PPFormula(n, tuple(tags), tuple(eedges), tuple(eqs))


def formula_to_text(phi: PPFormula) -> str:
    lines = [str(phi.nverts)]
    for t in phi.tags:
        lines.append(" ".join(str(x) for x in t))
    lines.extend(f"{u} {v}" for u, v in phi.eedges)
    lines.extend(f"= {u} {v}" for u, v in phi.eqs)
    return "\n".join(lines) + "\n"


def _contract(phi: PPFormula, a: Digraph):
    """Identify equality classes; returns (class count, class of each
    vertex, edge list on classes, preset masks per class, free slot -> class).
    Raises ConstantClash when a class holds two distinct constants."""
    parent = list(range(phi.nverts))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in phi.eqs:
        parent[find(u)] = find(v)
    classes: dict[int, int] = {}
    cls = []
    for v in range(phi.nverts):
        r = find(v)
        if r not in classes:
            classes[r] = len(classes)
        cls.append(classes[r])
    ncls = len(classes)
    full = (1 << a.n) - 1
    masks = [full] * ncls
    const: dict[int, int] = {}
    for v in range(phi.nverts):
        tag = phi.tags[v]
        if tag[0] == CONSTANT:
            c = tag[1]
            if not (0 <= c < a.n):
                raise ValueError(f"constant {c} not a vertex of the target")
            k = cls[v]
            if k in const and const[k] != c:
                raise ConstantClash(f"class of vertex {v} pinned to both {const[k]} and {c}")
            const[k] = c
            masks[k] = 1 << c
    edges = sorted({(cls[u], cls[v]) for u, v in phi.eedges})
    free_cls = {}
    for v in range(phi.nverts):
        if phi.tags[v][0] == FREE:
            free_cls[phi.tags[v][1]] = cls[v]
    return ncls, edges, masks, free_cls


def evaluate(phi: PPFormula, a: Digraph) -> set[tuple[int, ...]]:
    """The defined relation: all free-slot tuples admitting a homomorphism
    of the contracted gadget into the target."""
    if phi.is_bottom:
        return set()
    ncls, edges, masks, free_cls = _contract(phi, a)
    inst = HomInstance(ncls, edges, a.n, a.edges)
    d = phi.arity
    slots = [free_cls[k] for k in range(d)]
    out = set()
    for tup in itertools.product(range(a.n), repeat=d):
        work = list(masks)
        ok = True
        for s, value in zip(slots, tup):
            work[s] &= 1 << value
            if work[s] == 0:
                ok = False
                break
        if ok and inst.search(work) is not None:
            out.add(tup)
    return out


def pp_power(a: Digraph, phi: PPFormula) -> Digraph:
    """The k-th pp-power of a (k = arity/2): vertices are k-tuples in
    row-major order; (s, t) is an edge iff the formula holds on s followed
    by t."""
    d = phi.arity
    if d % 2 != 0:
        raise ValueError("pp_power needs an even number of free slots")
    k = d // 2
    if a.n**k > _PP_POWER_CAP:
        raise SizeLimit(f"pp-power would have {a.n ** k} vertices")
    rel = evaluate(phi, a)

    def index(tup):
        x = 0
        for t in tup:
            x = x * a.n + t
        return x

    edges = [(index(t[:k]), index(t[k:])) for t in rel]
    return Digraph(a.n**k, edges)


def verify_pp_construction(
    b: Digraph, phi: PPFormula, a: Digraph, allow_non_core: bool = False
) -> bool:
    """Check that b pp-constructs a via the given formula: the pp-power of b
    must be homomorphically equivalent to a.

    Constants in gadgets presuppose a core source (cores pp-define their
    singletons); pass allow_non_core to skip that check.
    """
    if not allow_non_core and any(t[0] == CONSTANT for t in phi.tags):
        if not is_core(b):
            raise ValueError("gadget uses constants but the source digraph is not a core")
    return hom_equivalent(pp_power(b, phi), a)


# -- convenience builders ---------------------------------------------------

def arrow_power_formula(c: int) -> PPFormula:
    """x -c-> y : a directed path of length c from the first free vertex to
    the second, inner vertices existential."""
    tags = [(FREE, 0)] + [(EXISTENTIAL,)] * (c - 1) + [(FREE, 1)]
    edges = [(i, i + 1) for i in range(c)]
    return PPFormula(c + 1, tuple(tags), tuple(edges), ())
