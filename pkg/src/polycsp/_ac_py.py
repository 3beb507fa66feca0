"""Pure-Python arc-consistency / search kernel.

Candidate lists are bitmasks over the target's vertices, so this kernel
works for targets of any size (Python ints are unbounded). The compiled
kernel in _ac.pyx implements the same interface for targets with at most
64 vertices and is selected at import time when available.
"""

KERNEL_NAME = "python"


class Instance:
    """A homomorphism instance: digraph g (as an edge list) into a fixed
    target given by successor/predecessor masks."""

    __slots__ = ("n", "esrc", "edst", "out_adj", "in_adj", "inc", "full")

    def __init__(self, n, esrc, edst, out_adj, in_adj):
        self.n = n
        self.esrc = list(esrc)
        self.edst = list(edst)
        self.out_adj = list(out_adj)
        self.in_adj = list(in_adj)
        inc = [[] for _ in range(n)]
        for i in range(len(self.esrc)):
            inc[self.esrc[i]].append(i)
            inc[self.edst[i]].append(i)
        self.inc = [tuple(x) for x in inc]
        self.full = (1 << len(self.out_adj)) - 1

    def _ac(self, lists, trail):
        esrc, edst, inc = self.esrc, self.edst, self.inc
        out_adj, in_adj = self.out_adj, self.in_adj
        ne = len(esrc)
        queue = list(range(ne))
        inq = [True] * ne
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            inq[e] = False
            x, y = esrc[e], edst[e]
            lx, ly = lists[x], lists[y]
            nx = 0
            m = lx
            while m:
                b = m & -m
                m ^= b
                if out_adj[b.bit_length() - 1] & ly:
                    nx |= b
            ny = 0
            m = ly
            while m:
                b = m & -m
                m ^= b
                if in_adj[b.bit_length() - 1] & nx:
                    ny |= b
            if nx != lx:
                if not nx:
                    return False
                trail.append((x, lx))
                lists[x] = nx
                for e2 in inc[x]:
                    if not inq[e2]:
                        inq[e2] = True
                        queue.append(e2)
            if ny != ly:
                if not ny:
                    return False
                trail.append((y, ly))
                lists[y] = ny
                for e2 in inc[y]:
                    if not inq[e2]:
                        inq[e2] = True
                        queue.append(e2)
        return True

    def run_ac(self, lists):
        """Refine lists in place to the greatest arc-consistent fixed point;
        False means some list emptied (and lists is left untouched)."""
        work = list(lists)
        if not self._ac(work, []):
            return False
        lists[:] = work
        return True

    def _pick(self, lists):
        best = -1
        bc = 1 << 62
        for i, m in enumerate(lists):
            c = m.bit_count()
            if 1 < c < bc:
                bc = c
                best = i
        return best

    def search(self, lists):
        """MAC backtracking search. Returns the assignment (list of target
        vertices) or None. lists is left unchanged."""
        work = list(lists)
        if not self._ac(work, []):
            return None
        if self._solve(work):
            return [m.bit_length() - 1 for m in work]
        return None

    def _solve(self, lists):
        var = self._pick(lists)
        if var < 0:
            return True
        m = lists[var]
        while m:
            b = m & -m
            m ^= b
            trail = [(var, lists[var])]
            lists[var] = b
            if self._ac(lists, trail) and self._solve(lists):
                return True
            for i, old in reversed(trail):
                lists[i] = old
        return False

    def count(self, lists):
        """Number of list-respecting homomorphisms (exhaustive)."""
        work = list(lists)
        if not self._ac(work, []):
            return 0
        return self._count(work)

    def _count(self, lists):
        var = self._pick(lists)
        if var < 0:
            return 1
        total = 0
        m = lists[var]
        while m:
            b = m & -m
            m ^= b
            trail = [(var, lists[var])]
            lists[var] = b
            if self._ac(lists, trail):
                total += self._count(lists)
            for i, old in reversed(trail):
                lists[i] = old
        return total
