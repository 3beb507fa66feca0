"""Indicator structures: deciding whether a digraph's polymorphisms satisfy
a minor condition, via homomorphism search on the indicator digraph.

The indicator has one vertex per term f(b) over target tuples b, merged by
the closure of the instantiated identities; edges join componentwise-adjacent
terms. A preset-respecting homomorphism back into the target is exactly a
family of polymorphisms satisfying the condition.

Full-mode construction is vectorized (the term space can run into millions);
the level-wise construction restricts to same-level tuples of a balanced
target and stays small. Totally symmetric conditions get a dedicated
builder whose classes are supports (sets) rather than tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import NamedTuple, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .conditions import MinorCondition
from .digraph import Digraph, levels
from .homsearch import HomInstance, is_core

DEFAULT_SIZE_LIMIT = 5_000_000
_TAG_CAP = 300_000  # above this many classes, tags/witnesses are skipped

YES = "Yes"
NO = "No"
INCONCLUSIVE = "Inconclusive"


class SizeLimit(RuntimeError):
    """The indicator would exceed the configured term-class budget."""


@dataclass
class IndicatorStructure:
    nclasses: int
    esrc: np.ndarray
    edst: np.ndarray
    vertex_tags: Optional[tuple]  # per class: tuple of (symbol, args) terms
    preset_lists: dict[int, int]  # class -> bitmask over target vertices
    target: Digraph
    levelwise: bool

    @property
    def graph(self) -> Digraph:
        """The indicator digraph itself (materialized on demand; can be
        large in full mode)."""
        return Digraph(self.nclasses, zip(self.esrc.tolist(), self.edst.tolist()))


class SatResult(NamedTuple):
    verdict: str  # YES / NO / INCONCLUSIVE
    witness: Optional[dict]  # symbol -> {args: value}
    mode: str  # "full" or "levelwise"

    def __bool__(self):
        return self.verdict == YES


# ---------------------------------------------------------------------------
# generic construction, full mode (vectorized)
# ---------------------------------------------------------------------------

def _build_generic_full(cond: MinorCondition, h: Digraph, size_limit: int):
    nh = h.n
    syms = sorted(cond.symbols)
    off = {}
    total = 0
    for f in syms:
        off[f] = total
        total += nh ** cond.symbols[f]
    if total > size_limit:
        raise SizeLimit(f"{total} term vertices exceed the limit {size_limit}")

    def radices(f):
        k = cond.symbols[f]
        return [nh ** (k - 1 - j) for j in range(k)]

    def decode_digits(count, base, width):
        digits = []
        q = np.arange(count, dtype=np.int32)
        for _ in range(width):
            digits.append(q % base)
            q //= base
        digits.reverse()
        return digits

    def combine(digits, args, rads, offset):
        acc = digits[args[0]] * np.int32(rads[0])
        for j, rad in zip(args[1:], rads[1:]):
            acc = acc + digits[j] * np.int32(rad)
        return acc + np.int32(offset)

    pair_l, pair_r = [], []
    for ident in cond.iter_identities():
        r = ident.nvars
        count = nh ** r
        if count > size_limit:
            raise SizeLimit(f"identity instantiation of size {count} exceeds {size_limit}")
        digits = decode_digits(count, nh, r)
        pair_l.append(combine(digits, ident.left_args, radices(ident.left_symbol), off[ident.left_symbol]))
        pair_r.append(combine(digits, ident.right_args, radices(ident.right_symbol), off[ident.right_symbol]))

    if pair_l:
        ls = np.concatenate(pair_l)
        rs = np.concatenate(pair_r)
        g = coo_matrix((np.ones(len(ls), dtype=np.int8), (ls, rs)), shape=(total, total))
        ncls, labels = connected_components(g, directed=False)
    else:
        ncls, labels = total, np.arange(total, dtype=np.int64)
    labels = labels.astype(np.int64, copy=False)

    hedges = h.sorted_edges()
    ne = len(hedges)
    eu = np.array([e[0] for e in hedges], dtype=np.int32)
    ev = np.array([e[1] for e in hedges], dtype=np.int32)
    srcs, dsts = [], []
    for f in syms:
        k = cond.symbols[f]
        m = ne ** k
        if m > size_limit:
            raise SizeLimit(f"edge instantiation of size {m} exceeds {size_limit}")
        if m == 0:
            continue
        digits = decode_digits(m, ne, k)
        rads = radices(f)
        src = eu[digits[0]] * np.int32(rads[0])
        dst = ev[digits[0]] * np.int32(rads[0])
        for p in range(1, k):
            src = src + eu[digits[p]] * np.int32(rads[p])
            dst = dst + ev[digits[p]] * np.int32(rads[p])
        srcs.append(labels[src + np.int32(off[f])])
        dsts.append(labels[dst + np.int32(off[f])])
    if srcs:
        key = np.concatenate(srcs) * ncls + np.concatenate(dsts)
        key = np.unique(key)
        esrc = key // ncls
        edst = key % ncls
    else:
        esrc = edst = np.zeros(0, dtype=np.int64)

    presets: dict[int, int] = {}

    def pin(cls, u):
        presets[cls] = presets.get(cls, (1 << nh) - 1) & (1 << u)

    diag = {f: sum(radices(f)) for f in syms}

    tags = None
    if ncls <= _TAG_CAP and total <= _TAG_CAP:
        tag_lists = [[] for _ in range(ncls)]
        for f in syms:
            k = cond.symbols[f]
            for i, b in enumerate(itertools.product(range(nh), repeat=k)):
                tag_lists[labels[off[f] + i]].append((f, b))
        tags = tuple(tuple(t) for t in tag_lists)

    return total, off, labels, ncls, esrc, edst, tags, diag, pin, presets


def _idempotent_pins_full(cond, h, off, labels, diag, pin):
    for f in sorted(cond.symbols):
        for u in range(h.n):
            pin(int(labels[off[f] + u * diag[f]]), u)


# ---------------------------------------------------------------------------
# generic construction, level-wise (small by design)
# ---------------------------------------------------------------------------

class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _build_generic_levelwise(cond: MinorCondition, h: Digraph, size_limit: int):
    lv = levels(h)  # NotBalanced propagates
    by_level: dict[int, list[int]] = {}
    for v in range(h.n):
        by_level.setdefault(lv.levels[v], []).append(v)

    est = sum(
        len(vs) ** cond.symbols[f] for f in cond.symbols for vs in by_level.values()
    )
    if est > size_limit:
        raise SizeLimit(f"{est} level-wise term vertices exceed the limit {size_limit}")

    term_idx: dict[tuple, int] = {}
    terms: list[tuple] = []
    for f in sorted(cond.symbols):
        k = cond.symbols[f]
        for vs in by_level.values():
            for b in itertools.product(vs, repeat=k):
                t = (f, b)
                if t not in term_idx:
                    term_idx[t] = len(terms)
                    terms.append(t)

    dsu = _DSU(len(terms))
    for ident in cond.iter_identities():
        lvars = sorted(set(ident.left_args))
        rvars = sorted(set(ident.right_args))
        shared = set(lvars) & set(rvars)
        combos = []
        if shared:
            allv = sorted(set(lvars) | set(rvars))
            for vs in by_level.values():
                combos.extend(
                    dict(zip(allv, a)) for a in itertools.product(vs, repeat=len(allv))
                )
        else:
            for vs1 in by_level.values():
                for vs2 in by_level.values():
                    for a1 in itertools.product(vs1, repeat=len(lvars)):
                        for a2 in itertools.product(vs2, repeat=len(rvars)):
                            d = dict(zip(lvars, a1))
                            d.update(zip(rvars, a2))
                            combos.append(d)
        for assign in combos:
            bl = tuple(assign[j] for j in ident.left_args)
            br = tuple(assign[j] for j in ident.right_args)
            dsu.union(term_idx[(ident.left_symbol, bl)], term_idx[(ident.right_symbol, br)])

    root_to_cls: dict[int, int] = {}
    labels = np.empty(len(terms), dtype=np.int64)
    for i in range(len(terms)):
        r = dsu.find(i)
        if r not in root_to_cls:
            root_to_cls[r] = len(root_to_cls)
        labels[i] = root_to_cls[r]
    ncls = len(root_to_cls)

    edges_by_srclevel: dict[int, list] = {}
    for u, v in h.sorted_edges():
        edges_by_srclevel.setdefault(lv.levels[u], []).append((u, v))
    eset = set()
    for f in sorted(cond.symbols):
        k = cond.symbols[f]
        for es in edges_by_srclevel.values():
            for et in itertools.product(es, repeat=k):
                b = tuple(e[0] for e in et)
                b2 = tuple(e[1] for e in et)
                eset.add((int(labels[term_idx[(f, b)]]), int(labels[term_idx[(f, b2)]])))
    esrc = np.array([e[0] for e in sorted(eset)], dtype=np.int64)
    edst = np.array([e[1] for e in sorted(eset)], dtype=np.int64)

    tags = None
    if ncls <= _TAG_CAP:
        tag_lists = [[] for _ in range(ncls)]
        for i, t in enumerate(terms):
            tag_lists[labels[i]].append(t)
        tags = tuple(tuple(t) for t in tag_lists)

    presets: dict[int, int] = {}

    def pin(cls, u):
        presets[cls] = presets.get(cls, (1 << h.n) - 1) & (1 << u)

    def idem_pins():
        for f in sorted(cond.symbols):
            k = cond.symbols[f]
            for u in range(h.n):
                pin(int(labels[term_idx[(f, (u,) * k)]]), u)

    return ncls, esrc, edst, tags, presets, pin, idem_pins


# ---------------------------------------------------------------------------
# totally symmetric conditions: classes are supports, not tuples
# ---------------------------------------------------------------------------

def _ts_cover_ok(h: Digraph, S, T, n):
    for u in S:
        if not any(v in T for v in h.successors(u)):
            return False
    for v in T:
        if not any(u in S for u in h.predecessors(v)):
            return False
    if len(S) + len(T) <= n:
        return True
    # need an edge cover of size <= n, i.e. a matching of size >= |S|+|T|-n
    Sl = sorted(S)
    Tl = sorted(T)
    tpos = {v: i for i, v in enumerate(Tl)}
    adj = [[tpos[v] for v in h.successors(u) if v in tpos] for u in Sl]
    match = [-1] * len(Tl)

    def augment(u, seen):
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match[v] < 0 or augment(match[v], seen):
                    match[v] = u
                    return True
        return False

    size = 0
    for u in range(len(Sl)):
        if augment(u, [False] * len(Tl)):
            size += 1
    return len(S) + len(T) - size <= n


def _build_ts(cond: MinorCondition, h: Digraph, levelwise: bool, size_limit: int):
    n = cond.ts_arity
    if levelwise:
        lv = levels(h)
        groups = {}
        for v in range(h.n):
            groups.setdefault(lv.levels[v], []).append(v)
        group_list = [groups[k] for k in sorted(groups)]
        group_level = sorted(groups)
    else:
        group_list = [list(range(h.n))]
        group_level = [None]

    est = sum(
        sum(comb(len(vs), k) for k in range(1, min(n, len(vs)) + 1)) for vs in group_list
    )
    if est > size_limit:
        raise SizeLimit(f"{est} support classes exceed the limit {size_limit}")

    classes = []  # (level, frozenset)
    for vs, lvl in zip(group_list, group_level):
        for k in range(1, min(n, len(vs)) + 1):
            classes.extend((lvl, frozenset(c)) for c in itertools.combinations(vs, k))
    cls_idx = {c: i for i, c in enumerate(classes)}
    ncls = len(classes)
    if ncls * ncls > max(size_limit, 10_000_000):
        raise SizeLimit(f"{ncls}^2 candidate edges exceed the limit")

    eset = []
    for i, (lvl, S) in enumerate(classes):
        for j, (lvl2, T) in enumerate(classes):
            if levelwise and lvl2 != lvl + 1:
                continue
            if _ts_cover_ok(h, S, T, n):
                eset.append((i, j))
    esrc = np.array([e[0] for e in eset], dtype=np.int64)
    edst = np.array([e[1] for e in eset], dtype=np.int64)

    sym = next(iter(cond.symbols))
    tags = tuple(
        ((sym, tuple(sorted(S)) + (max(S),) * (n - len(S))),) for _, S in classes
    )
    presets: dict[int, int] = {}

    def idem_pins():
        for lvl, S in classes:
            if len(S) == 1:
                (u,) = S
                presets[cls_idx[(lvl, S)]] = 1 << u

    return ncls, esrc, edst, tags, presets, idem_pins


# ---------------------------------------------------------------------------
# public construction and satisfaction
# ---------------------------------------------------------------------------

def build_indicator(
    cond: MinorCondition,
    h: Digraph,
    idempotent: bool = True,
    levelwise: bool = False,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> IndicatorStructure:
    """Construct the indicator structure of a condition with respect to a
    target digraph. Raises SizeLimit when the term-class budget is
    exceeded and NotBalanced for level-wise mode on an unbalanced target.
    """
    if cond.kind == "ts":
        ncls, esrc, edst, tags, presets, idem = _build_ts(cond, h, levelwise, size_limit)
        if idempotent:
            idem()
    elif levelwise:
        ncls, esrc, edst, tags, presets, pin, idem = _build_generic_levelwise(
            cond, h, size_limit
        )
        if idempotent:
            idem()
    else:
        total, off, labels, ncls, esrc, edst, tags, diag, pin, presets = (
            _build_generic_full(cond, h, size_limit)
        )
        if idempotent:
            _idempotent_pins_full(cond, h, off, labels, diag, pin)
    return IndicatorStructure(ncls, esrc, edst, tags, presets, h, levelwise)


def _solve_indicator(ind: IndicatorStructure, want_witness: bool):
    """Component-wise preset-respecting search for a homomorphism from the
    indicator into its target. Returns (found, assignment array or None)."""
    n = ind.nclasses
    h = ind.target
    full = (1 << h.n) - 1
    if any(m == 0 for m in ind.preset_lists.values()):
        return False, None
    if n == 0:
        return True, np.zeros(0, dtype=np.int64)
    ne = len(ind.esrc)
    if ne:
        g = coo_matrix(
            (np.ones(ne, dtype=np.int8), (ind.esrc, ind.edst)), shape=(n, n)
        )
        ncomp, comp = connected_components(g, directed=False)
    else:
        ncomp, comp = n, np.arange(n)
    assignment = np.full(n, -1, dtype=np.int64) if want_witness else None

    order = np.argsort(comp, kind="stable")
    starts = np.searchsorted(comp[order], np.arange(ncomp))
    local = np.empty(n, dtype=np.int64)
    local[order] = np.arange(n) - starts[comp[order]]
    if ne:
        ecomp = comp[ind.esrc]
        eorder = np.argsort(ecomp, kind="stable")
        estarts = np.searchsorted(ecomp[eorder], np.arange(ncomp))
        les = local[ind.esrc[eorder]]
        led = local[ind.edst[eorder]]

    if ne:
        outdeg = np.bincount(ind.esrc, minlength=n)
        indeg = np.bincount(ind.edst, minlength=n)
        irregular = (outdeg != 1) | (indeg != 1)
        comp_irregular = np.bincount(comp, weights=irregular, minlength=ncomp) > 0
    else:
        comp_irregular = np.ones(ncomp, dtype=bool)
    comp_pinned = np.zeros(ncomp, dtype=bool)
    for v in ind.preset_lists:
        comp_pinned[comp[v]] = True

    hedges = h.sorted_edges()
    cycle_memo: dict[int, Optional[list]] = {}
    for c in range(ncomp):
        lo = starts[c]
        hi = starts[c + 1] if c + 1 < ncomp else n
        verts = order[lo:hi]
        nloc = hi - lo
        if ne:
            elo = estarts[c]
            ehi = estarts[c + 1] if c + 1 < ncomp else ne
        else:
            elo = ehi = 0
        if ehi == elo:  # isolated class
            mask = ind.preset_lists.get(int(verts[0]), full)
            if mask == 0:
                return False, None
            if want_witness:
                assignment[verts] = (mask & -mask).bit_length() - 1
            continue
        # preset-free components that are plain directed cycles repeat all
        # over large indicators; solve one representative per length
        if not comp_pinned[c] and not comp_irregular[c] and ehi - elo == nloc:
            sol = cycle_memo.get(nloc, 0)
            if sol == 0:
                inst = HomInstance(
                    nloc, [(i, (i + 1) % nloc) for i in range(nloc)], h.n, hedges
                )
                sol = inst.search([full] * nloc)
                cycle_memo[nloc] = sol
            if sol is None:
                return False, None
            if want_witness:
                # walk the component cycle and replay the representative
                succ = {}
                for k in range(elo, ehi):
                    succ[int(les[k])] = int(led[k])
                cur = 0
                for val in sol:
                    assignment[verts[cur]] = val
                    cur = succ[cur]
            continue
        ces = les[elo:ehi].tolist()
        ced = led[elo:ehi].tolist()
        inst = HomInstance(nloc, list(zip(ces, ced)), h.n, hedges)
        masks = [full] * nloc
        for i, v in enumerate(verts.tolist()):
            if v in ind.preset_lists:
                masks[i] = ind.preset_lists[v]
        sol = inst.search(masks)
        if sol is None:
            return False, None
        if want_witness:
            assignment[verts] = sol
    return True, assignment


def _witness_tables(ind: IndicatorStructure, assignment) -> Optional[dict]:
    if ind.vertex_tags is None or assignment is None:
        return None
    tables: dict[str, dict[tuple, int]] = {}
    for cls, terms in enumerate(ind.vertex_tags):
        val = int(assignment[cls])
        for sym, args in terms:
            tables.setdefault(sym, {})[args] = val
    return tables


def _expand_ts_witness(cond: MinorCondition, h: Digraph, tables):
    """Fill in a full operation table from the per-support values."""
    if tables is None:
        return None
    n = cond.ts_arity
    if h.n ** n > 200_000:
        return tables
    sym = next(iter(cond.symbols))
    by_support = {frozenset(args): v for args, v in tables[sym].items()}
    out = {}
    for b in itertools.product(range(h.n), repeat=n):
        key = frozenset(b)
        if key in by_support:
            out[b] = by_support[key]
    return {sym: out}


def satisfies(
    h: Digraph,
    cond: MinorCondition,
    mode: str = "auto",
    idempotent: Optional[bool] = None,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> SatResult:
    """Decide whether Pol(h) satisfies the condition.

    full: search the full indicator; Yes comes with witness tables.
    levelwise: search only same-level tuples (balanced targets); a No is
        always conclusive, a Yes only for levelwise-sound conditions, else
        the verdict is Inconclusive.
    auto: level-wise first when the target is balanced, escalating to the
        full indicator when the level-wise Yes is not conclusive.
    """
    if idempotent is None:
        idempotent = is_core(h)

    def run(levelwise):
        ind = build_indicator(cond, h, idempotent=idempotent, levelwise=levelwise, size_limit=size_limit)
        # witnesses only make sense while the term tags fit in memory
        found, assignment = _solve_indicator(ind, want_witness=ind.vertex_tags is not None)
        wit = _witness_tables(ind, assignment) if found else None
        if found and wit is not None and cond.kind == "ts" and not levelwise:
            wit = _expand_ts_witness(cond, h, wit)
        return found, wit

    if mode == "full":
        found, wit = run(False)
        return SatResult(YES if found else NO, wit, "full")
    if mode == "levelwise":
        found, wit = run(True)
        if not found:
            return SatResult(NO, None, "levelwise")
        if cond.levelwise_sound:
            return SatResult(YES, wit, "levelwise")
        return SatResult(INCONCLUSIVE, wit, "levelwise")
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")

    from .digraph import is_balanced

    if is_balanced(h):
        try:
            found, wit = run(True)
        except SizeLimit:
            found, wit = None, None
        if found is False:
            return SatResult(NO, None, "levelwise")
        if found and cond.levelwise_sound:
            return SatResult(YES, wit, "levelwise")
    found, wit = run(False)
    return SatResult(YES if found else NO, wit, "full")
