"""Minor conditions: height-one identity systems between function symbols.

All the named condition families used for classifying digraph CSPs are
constructed here, with chained equalities expanded left-to-right into
binary identities. Conditions whose level-wise test is known to be
conclusive carry the levelwise_sound flag.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .digraph import Digraph, EmptyEdgeSet


class UnknownCondition(ValueError):
    pass


class BadParameter(ValueError):
    pass


class ArityTooLarge(ValueError):
    pass


class FunctionSymbol(NamedTuple):
    name: str
    arity: int


class MinorIdentity(NamedTuple):
    """f(x_sigma(1),...,x_sigma(k)) = g(x_tau(1),...,x_tau(m)), with the
    index maps stored as tuples of variable numbers 0..nvars-1."""

    left_symbol: str
    left_args: tuple[int, ...]
    right_symbol: str
    right_args: tuple[int, ...]

    @property
    def nvars(self) -> int:
        return max(max(self.left_args), max(self.right_args)) + 1


def _identity(f, sigma, g, tau) -> MinorIdentity:
    """Normalize variables: renumber by first occurrence, dropping unused."""
    ren = {}
    for v in itertools.chain(sigma, tau):
        if v not in ren:
            ren[v] = len(ren)
    return MinorIdentity(f, tuple(ren[v] for v in sigma), g, tuple(ren[v] for v in tau))


def _chain(symbol_sides: list[tuple[str, tuple[int, ...]]]) -> list[MinorIdentity]:
    """Expand a chained equality s_1 = s_2 = ... = s_k into adjacent pairs."""
    out = []
    for (f, sig), (g, tau) in zip(symbol_sides, symbol_sides[1:]):
        out.append(_identity(f, sig, g, tau))
    return out


@dataclass(frozen=True)
class MinorCondition:
    name: str
    symbols: dict[str, int]  # symbol name -> arity
    _identities: tuple[MinorIdentity, ...] | None
    levelwise_sound: bool = False
    kind: str = "generic"  # "ts" marks the totally-symmetric family
    ts_arity: int = 0

    def iter_identities(self) -> Iterator[MinorIdentity]:
        if self.kind == "ts":
            yield from _ts_identities(self.ts_arity)
        else:
            yield from self._identities

    @property
    def identities(self) -> tuple[MinorIdentity, ...]:
        if self.kind == "ts":
            if self.ts_arity > 8:
                raise ArityTooLarge(
                    "TS(%d) has too many identities to materialize; "
                    "iterate or use the level-wise indicator" % self.ts_arity
                )
            return tuple(self.iter_identities())
        return self._identities

    def max_arity(self) -> int:
        return max(self.symbols.values())

    def __repr__(self):
        return f"MinorCondition({self.name})"


def _cond(name, symbols, identities, levelwise_sound=False) -> MinorCondition:
    for ident in identities:
        for sym, args in ((ident.left_symbol, ident.left_args), (ident.right_symbol, ident.right_args)):
            if symbols.get(sym) != len(args):
                raise ValueError(f"identity uses undeclared symbol {sym}/{len(args)}")
    return MinorCondition(name, dict(symbols), tuple(identities), levelwise_sound)


def _ts_identities(n: int) -> Iterator[MinorIdentity]:
    """All identities s(x_1..x_n) = s(y_1..y_n) with {x} = {y} as sets,
    over an n-variable pool, one per unordered pair of distinct tuples."""
    pool = range(n)
    for k in range(1, n + 1):
        for support in itertools.combinations(pool, k):
            tuples = [t for t in itertools.product(support, repeat=n) if set(t) == set(support)]
            for i, sig in enumerate(tuples):
                for tau in tuples[i + 1 :]:
                    yield _identity("s", sig, "s", tau)


# ---------------------------------------------------------------------------
# the named families
# ---------------------------------------------------------------------------

def _kmm() -> MinorCondition:
    x, y = 0, 1
    ids = _chain([("p", (x, y, y)), ("q", (y, x, x)), ("q", (x, x, y))])
    ids.append(_identity("p", (x, y, x), "q", (x, y, x)))
    return _cond("KMM", {"p": 3, "q": 3}, ids, levelwise_sound=True)


def _siggers4() -> MinorCondition:
    a, r, e = 0, 1, 2
    ids = [_identity("f", (a, r, e, a), "f", (r, a, r, e))]
    return _cond("Siggers4", {"f": 4}, ids)


def _wnu(k: int) -> MinorCondition:
    if k < 2:
        raise BadParameter("WNU(k) needs k >= 2")
    x, y = 0, 1
    sides = []
    for i in range(k):
        args = [x] * k
        args[i] = y
        sides.append(("f", tuple(args)))
    return _cond(f"WNU({k})", {"f": k}, _chain(sides), levelwise_sound=True)


def _wnu34() -> MinorCondition:
    x, y = 0, 1
    sides = [("f", (y, x, x)), ("f", (x, y, x)), ("f", (x, x, y))]
    sides += [("g", (x, x, x, y)), ("g", (x, x, y, x)), ("g", (x, y, x, x)), ("g", (y, x, x, x))]
    return _cond("WNU34", {"f": 3, "g": 4}, _chain(sides), levelwise_sound=True)


def _nu(n: int) -> MinorCondition:
    if n < 3:
        raise BadParameter("NU(n) needs n >= 3")
    x, y = 0, 1
    sides = [("f", (x,) * n)]
    for i in range(n):
        args = [x] * n
        args[i] = y
        sides.append(("f", tuple(args)))
    return _cond(f"NU({n})", {"f": n}, _chain(sides))


def _hm(n: int) -> MinorCondition:
    if n < 1:
        raise BadParameter("HM(n) needs n >= 1")
    x, y = 0, 1
    ids = [_identity("p1", (x, x, x), "p1", (x, y, y))]
    for i in range(1, n):
        ids.append(_identity(f"p{i}", (x, x, y), f"p{i+1}", (x, y, y)))
    ids.append(_identity(f"p{n}", (x, x, y), f"p{n}", (y, y, y)))
    return _cond(f"HM({n})", {f"p{i}": 3 for i in range(1, n + 1)}, ids, levelwise_sound=True)


def _j(n: int) -> MinorCondition:
    if n < 0:
        raise BadParameter("J(n) needs n >= 0")
    x, y = 0, 1
    ids = [_identity("j1", (x, x, x), "j1", (x, x, y))]
    for i in range(1, n + 1):
        ids.append(_identity(f"j{2*i-1}", (x, y, y), f"j{2*i}", (x, y, y)))
    for i in range(1, 2 * n + 2):
        ids.append(_identity(f"j{i}", (x, y, x), f"j{i}", (x, x, x)))
    for i in range(1, n + 1):
        ids.append(_identity(f"j{2*i}", (x, x, y), f"j{2*i+1}", (x, x, y)))
    ids.append(_identity(f"j{2*n+1}", (x, y, y), f"j{2*n+1}", (y, y, y)))
    return _cond(f"J({n})", {f"j{i}": 3 for i in range(1, 2 * n + 2)}, ids)


def _kk(n: int) -> MinorCondition:
    # The chain starts at d1 and ends at d(n-1); the projections that bound
    # the classical chain are folded into the first and last identities.
    if n < 2:
        raise BadParameter("KK(n) needs n >= 2")
    x, y = 0, 1
    ids = [_identity("d1", (x, y, y), "d1", (x, x, x))]
    for i in range(2, n - 1, 2):
        ids.append(_identity(f"d{i}", (x, y, y), f"d{i+1}", (x, y, y)))
        ids.append(_identity(f"d{i}", (x, y, x), f"d{i+1}", (x, y, x)))
    for i in range(1, n - 1, 2):
        ids.append(_identity(f"d{i}", (x, x, y), f"d{i+1}", (x, x, y)))
    last = f"d{n-1}"
    if n % 2 == 1:
        ids.append(_identity(last, (x, y, y), last, (y, y, y)))
        ids.append(_identity(last, (x, y, x), last, (x, x, x)))
    else:
        ids.append(_identity(last, (x, x, y), last, (y, y, y)))
    return _cond(f"KK({n})", {f"d{i}": 3 for i in range(1, n)}, ids)


def _hmck(n: int) -> MinorCondition:
    if n < 0:
        raise BadParameter("HMcK(n) needs n >= 0")
    if n == 0:
        c = _hm(1)
        return MinorCondition("HMcK(0)", c.symbols, c._identities, levelwise_sound=False)
    x, y = 0, 1
    ids = [_identity("d1", (x, y, y), "d1", (x, x, x))]
    for i in range(2, n, 2):
        ids.append(_identity(f"d{i}", (x, y, y), f"d{i+1}", (x, y, y)))
    for i in range(1, n, 2):
        ids.append(_identity(f"d{i}", (x, x, y), f"d{i+1}", (x, x, y)))
        ids.append(_identity(f"d{i}", (x, y, x), f"d{i+1}", (x, y, x)))
    ids.append(_identity(f"d{n}", (x, y, y), "p", (x, y, y)))
    ids.append(_identity("p", (x, x, y), "e1", (x, x, y)))
    for i in range(1, n, 2):
        ids.append(_identity(f"e{i}", (x, y, y), f"e{i+1}", (x, y, y)))
        ids.append(_identity(f"e{i}", (x, y, x), f"e{i+1}", (x, y, x)))
    for i in range(2, n, 2):
        ids.append(_identity(f"e{i}", (x, x, y), f"e{i+1}", (x, x, y)))
    last = f"e{n}"
    if n % 2 == 1:
        ids.append(_identity(last, (x, y, y), last, (y, y, y)))
        ids.append(_identity(last, (x, y, x), last, (x, x, x)))
    else:
        ids.append(_identity(last, (x, x, y), last, (y, y, y)))
    symbols = {f"d{i}": 3 for i in range(1, n + 1)}
    symbols["p"] = 3
    symbols.update({f"e{i}": 3 for i in range(1, n + 1)})
    return _cond(f"HMcK({n})", symbols, ids)


def _nn(n: int) -> MinorCondition:
    if n < 0:
        raise BadParameter("NN(n) needs n >= 0")
    x, y, z = 0, 1, 2
    ids = [_identity("f0", (x, y, y, z), "f0", (x, x, x, x))]
    for i in range(n):
        ids.append(_identity(f"f{i}", (x, x, y, x), f"f{i+1}", (x, y, y, x)))
        ids.append(_identity(f"f{i}", (x, x, y, y), f"f{i+1}", (x, y, y, y)))
    ids.append(_identity(f"f{n}", (x, x, y, z), f"f{n}", (z, z, z, z)))
    return _cond(f"NN({n})", {f"f{i}": 4 for i in range(n + 1)}, ids)


def _ts(n: int) -> MinorCondition:
    if n < 2:
        raise BadParameter("TS(n) needs n >= 2")
    return MinorCondition(
        f"TS({n})", {"s": n}, None, levelwise_sound=True, kind="ts", ts_arity=n
    )


def _gfs(n: int) -> MinorCondition:
    if n < 1:
        raise BadParameter("GFS(n) needs n >= 1")
    x, z = 0, 1
    ys = [2 + i for i in range(n)]
    sides = [("f", tuple([x, x] + ys))]
    for i in range(n):
        rest = list(ys)
        rest[i] = z
        sides.append(("f", tuple([z, ys[i]] + rest)))
    return _cond(f"GFS({n})", {"f": n + 2}, _chain(sides))


_PARAMETRIC = {
    "WNU": _wnu,
    "NU": _nu,
    "HM": _hm,
    "J": _j,
    "KK": _kk,
    "HMCK": _hmck,
    "NN": _nn,
    "TS": _ts,
    "GFS": _gfs,
}

_FIXED = {
    "KMM": _kmm,
    "SIGGERS4": _siggers4,
    "WNU34": _wnu34,
    "MAJORITY": lambda: _alias("Majority", _nu(3)),
    "MALTSEV": lambda: _alias("Maltsev", _hm(1)),
}

_CANON = {
    "WNU": "WNU", "NU": "NU", "HM": "HM", "J": "J", "KK": "KK",
    "HMCK": "HMcK", "NN": "NN", "TS": "TS", "GFS": "GFS",
}


def _alias(name: str, c: MinorCondition) -> MinorCondition:
    return MinorCondition(name, c.symbols, c._identities, c.levelwise_sound, c.kind, c.ts_arity)


def make_condition(name: str, param: int | None = None) -> MinorCondition:
    """Build a named condition; parametric families take one integer, e.g.
    make_condition("HM", 4). Raises UnknownCondition / BadParameter."""
    key = name.upper()
    if key in _FIXED:
        if param is not None:
            raise BadParameter(f"{name} takes no parameter")
        return _FIXED[key]()
    if key in _PARAMETRIC:
        if param is None:
            raise BadParameter(f"{name} needs an integer parameter")
        c = _PARAMETRIC[key](param)
        return c
    if key == "SIGMA":
        raise BadParameter("use parse_condition for Sigma(...) conditions")
    raise UnknownCondition(f"unknown condition {name!r}")


_NAME_RE = re.compile(r"^([A-Za-z]+[A-Za-z0-9]*?)(?:\((\d+(?:,\d+)*)\))?$")


def parse_condition(text: str) -> MinorCondition:
    """Parse CLI names: 'HM(4)', 'TS(12)', 'Majority', 'Sigma(2,5)', ..."""
    m = _NAME_RE.match(text.strip())
    if not m:
        raise UnknownCondition(f"cannot parse condition name {text!r}")
    name, params = m.group(1), m.group(2)
    if name.upper() == "SIGMA":
        if not params:
            raise BadParameter("Sigma needs cycle lengths, e.g. Sigma(2,5)")
        from .digraph import disjoint_cycles

        lengths = [int(p) for p in params.split(",")]
        c = loop_condition(disjoint_cycles(lengths))
        return _alias(f"Sigma({','.join(str(x) for x in sorted(set(lengths)))})", c)
    if params is None:
        return make_condition(name)
    vals = [int(p) for p in params.split(",")]
    if len(vals) != 1:
        raise BadParameter(f"{name} takes a single integer parameter")
    return make_condition(name, vals[0])


def loop_condition(g: Digraph) -> MinorCondition:
    """The loop condition of a digraph: one symbol whose arity is the number
    of edges, with the single identity f_source = f_target; variables are
    the vertices."""
    if not g.edges:
        raise EmptyEdgeSet("loop_condition needs at least one edge")
    edges = g.sorted_edges()
    sigma = tuple(u for u, _ in edges)
    tau = tuple(v for _, v in edges)
    ident = _identity("f", sigma, "f", tau)
    return _cond(f"Sigma[{g.n}v,{len(edges)}e]", {"f": len(edges)}, [ident])


# ---------------------------------------------------------------------------
# triviality
# ---------------------------------------------------------------------------

def is_trivial(c: MinorCondition, arity_cap: int = 8) -> bool:
    """True iff the condition is satisfied by coordinate projections on a
    two-element set (equivalently: implied by every minor condition).

    A projection choice i per symbol satisfies f_sigma = g_tau iff
    sigma(i_f) and tau(i_g) are the same variable.
    """
    if c.max_arity() > arity_cap:
        raise ArityTooLarge(
            f"triviality check capped at arity {arity_cap}, condition has {c.max_arity()}"
        )
    symbols = sorted(c.symbols)
    order = {s: i for i, s in enumerate(symbols)}
    identities = list(c.iter_identities())

    def consistent(choice):
        fixed = len(choice)
        for ident in identities:
            fo, go = order[ident.left_symbol], order[ident.right_symbol]
            if fo < fixed and go < fixed:
                if ident.left_args[choice[fo]] != ident.right_args[choice[go]]:
                    return False
        return True

    def extend(choice):
        if len(choice) == len(symbols):
            return True
        sym = symbols[len(choice)]
        for i in range(c.symbols[sym]):
            nxt = choice + [i]
            if consistent(nxt) and extend(nxt):
                return True
        return False

    return extend([])
