"""Closed-form calculus for disjoint unions of directed cycles and their
cyclic loop conditions: satisfaction, implication, decomposition into prime
conditions, the pp-order, and the lattice operations.

A disjoint union of cycles is represented by its set of cycle lengths; a
prime cyclic loop condition by a set of primes. The whole calculus is
plain integer arithmetic around a dotdiv c = a / gcd(a, c).
"""

from __future__ import annotations

import itertools
from functools import reduce
from math import gcd, lcm
from typing import FrozenSet, Iterable

CycleSet = FrozenSet[int]
PrimeSet = FrozenSet[int]

_LCM_CAP = 10**9


def cycle_set(lengths: Iterable[int]) -> CycleSet:
    s = frozenset(int(a) for a in lengths)
    if not s:
        raise ValueError("a cycle set must be non-empty")
    if any(a < 1 for a in s):
        raise ValueError("cycle lengths must be positive")
    return s


def dotdiv(a: int, c: int) -> int:
    """a 'divided as much as possible' by c: a // gcd(a, c)."""
    return a // gcd(a, c)


def set_dotdiv(cs: Iterable[int], c: int) -> CycleSet:
    return frozenset(dotdiv(a, c) for a in cs)


def rad(n: int) -> int:
    """Product of the distinct prime divisors."""
    r = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            r *= d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        r *= n
    return r


def prime_factors(n: int) -> frozenset[int]:
    ps = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            ps.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        ps.add(n)
    return frozenset(ps)


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _lcm_of(cs: Iterable[int]) -> int:
    value = reduce(lcm, cs, 1)
    if value > _LCM_CAP:
        raise ValueError(f"lcm {value} exceeds the supported cap {_LCM_CAP}")
    return value


def satisfies_clc(c: Iterable[int], d: Iterable[int]) -> bool:
    """Does the union of cycles with lengths c satisfy the cyclic loop
    condition of d? Exhaustive over all maps from d into c: each map must
    leave some cycle length of c dividing lcm of the pointwise dotdivs."""
    cs = cycle_set(c)
    ds = sorted(cycle_set(d))
    clist = sorted(cs)
    for h in itertools.product(clist, repeat=len(ds)):
        value = reduce(lcm, (dotdiv(h[i], b) for i, b in enumerate(ds)), 1)
        if not any(value % a == 0 for a in cs):
            return False
    return True


def clc_implies(c: Iterable[int], d: Iterable[int]) -> bool:
    """Implication between cyclic loop conditions: Sigma_c forces Sigma_d
    iff every cycle length in c has a partner in d whose radical divides
    its radical."""
    cs, ds = cycle_set(c), cycle_set(d)
    return all(any(rad(a) % rad(b) == 0 for b in ds) for a in cs)


def clc_equivalent(c: Iterable[int], d: Iterable[int]) -> bool:
    return clc_implies(c, d) and clc_implies(d, c)


def is_maximal_for(c: Iterable[int], x: int) -> bool:
    """x is maximal for c when dividing by it kills no cycle completely but
    dividing by any further factor of the remainder does."""
    cs = cycle_set(c)
    after = set_dotdiv(cs, x)
    if 1 in after:
        return False
    rest = _lcm_of(after)
    for dd in divisors(rest):
        if dd > 1 and 1 not in set_dotdiv(cs, x * dd):
            return False
    return True


def maximal_divisors(c: Iterable[int]) -> dict[CycleSet, int]:
    """All maximal divisors, deduplicated by the resulting set c dotdiv x;
    maps each resulting set to its smallest witness x."""
    cs = cycle_set(c)
    out: dict[CycleSet, int] = {}
    for x in divisors(_lcm_of(cs)):
        if is_maximal_for(cs, x):
            out.setdefault(set_dotdiv(cs, x), x)
    return out


def _prime_part(s: CycleSet) -> PrimeSet:
    return frozenset(p for p in s if p > 1 and prime_factors(p) == {p})


def pcl_decomposition(c: Iterable[int]) -> frozenset[PrimeSet]:
    """The antichain of prime cyclic loop conditions equivalent to Sigma_c:
    prime parts of the maximal-divisor quotients, keeping the strongest
    (subset-minimal) ones."""
    gens = [_prime_part(s) for s in maximal_divisors(c)]
    return frozenset(p for p in gens if not any(q < p for q in gens))


def pcl_of_cycles(c: Iterable[int]) -> frozenset[PrimeSet]:
    """Generators of the prime conditions NOT satisfied by the union of
    cycles: the weakest (subset-maximal) unsatisfied ones. Everything
    outside their upset is satisfied."""
    gens = [_prime_part(s) for s in maximal_divisors(c)]
    return frozenset(p for p in gens if not any(q > p for q in gens))


def cycles_ppleq(d: Iterable[int], c: Iterable[int]) -> bool:
    """pp-order on unions of cycles: the union for d pp-constructs the one
    for c iff for every quotient of c that is generated by its primes, d
    fails the corresponding loop condition."""
    ds, cs = cycle_set(d), cycle_set(c)
    for x in divisors(_lcm_of(cs)):
        quotient = set_dotdiv(cs, x)
        primes = _prime_part(quotient)
        if all(any(a % p == 0 for p in primes) for a in quotient):
            if satisfies_clc(ds, quotient):
                return False
    return True


def cycles_ppequiv(d: Iterable[int], c: Iterable[int]) -> bool:
    return cycles_ppleq(d, c) and cycles_ppleq(c, d)


def square_free_rep(c: Iterable[int]) -> CycleSet:
    """A pp-equivalent union of cycles with square-free lengths: one lcm per
    choice of a prime from each generator of the unsatisfied conditions,
    reduced by divisibility."""
    gens = sorted(pcl_of_cycles(c), key=sorted)
    prods = {reduce(lcm, pick, 1) for pick in itertools.product(*(sorted(p) for p in gens))}
    return frozenset(a for a in prods if not any(b != a and a % b == 0 for b in prods))


def clc_meet(c: Iterable[int], d: Iterable[int]) -> CycleSet:
    """Meet in the lattice of cyclic loop conditions: the union of the sets."""
    return cycle_set(c) | cycle_set(d)


def clc_join(c: Iterable[int], d: Iterable[int]) -> CycleSet:
    """Join: pairwise products (radical-reduced to keep numbers small)."""
    return frozenset(rad(a * b) for a in cycle_set(c) for b in cycle_set(d))
