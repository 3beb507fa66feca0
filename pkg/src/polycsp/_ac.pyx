# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arc-consistency / search kernel for targets with <= 64 vertices.

Mirrors the interface of _ac_py.Instance; candidate lists are uint64
bitmasks. The hot loops (AC revision, MAC backtracking) dominate the
runtime of tree generation and condition sweeps, which is why this lives
in an extension module.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef extern from *:
    """
    #include <stdlib.h>
    #include <string.h>
    #if defined(__GNUC__) || defined(__clang__)
    static inline int popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    #else
    static inline int popcount64(unsigned long long x) {
        int c = 0; while (x) { x &= x - 1; c++; } return c;
    }
    static inline int ctz64(unsigned long long x) {
        int c = 0; while (!(x & 1ULL)) { x >>= 1; c++; } return c;
    }
    #endif
    static int *grow_int(int *p, long oldn, long newn) {
        int *q = (int *)malloc(sizeof(int) * newn);
        memcpy(q, p, sizeof(int) * oldn);
        free(p);
        return q;
    }
    static unsigned long long *grow_u64(unsigned long long *p, long oldn, long newn) {
        unsigned long long *q = (unsigned long long *)malloc(sizeof(unsigned long long) * newn);
        memcpy(q, p, sizeof(unsigned long long) * oldn);
        free(p);
        return q;
    }
    """
    int popcount64(u64 x) nogil
    int ctz64(u64 x) nogil
    int *grow_int(int *p, long oldn, long newn) nogil
    u64 *grow_u64(u64 *p, long oldn, long newn) nogil

KERNEL_NAME = "cython"


cdef class Instance:
    cdef int n, ne, nh
    cdef int *esrc
    cdef int *edst
    cdef u64 *out_adj
    cdef u64 *in_adj
    cdef int *inc_start   # CSR of incident edge ids per vertex
    cdef int *inc
    cdef int *queue       # ring buffer, capacity ne + 1
    cdef char *inq
    cdef int *trail_var
    cdef u64 *trail_old
    cdef long trail_cap
    cdef u64 full

    def __cinit__(self, n, esrc, edst, out_adj, in_adj):
        cdef int i, ne = len(esrc), nh = len(out_adj)
        if nh > 64:
            raise ValueError("compiled kernel handles at most 64 target vertices")
        self.n = n
        self.ne = ne
        self.nh = nh
        self.full = (<u64>1 << nh) - 1 if nh < 64 else <u64>0xFFFFFFFFFFFFFFFF
        self.esrc = <int*>malloc(sizeof(int) * max(ne, 1))
        self.edst = <int*>malloc(sizeof(int) * max(ne, 1))
        self.out_adj = <u64*>malloc(sizeof(u64) * max(nh, 1))
        self.in_adj = <u64*>malloc(sizeof(u64) * max(nh, 1))
        self.inc_start = <int*>malloc(sizeof(int) * (n + 1))
        self.inc = <int*>malloc(sizeof(int) * max(2 * ne, 1))
        self.queue = <int*>malloc(sizeof(int) * (ne + 1))
        self.inq = <char*>malloc(max(ne, 1))
        self.trail_cap = 1024
        self.trail_var = <int*>malloc(sizeof(int) * self.trail_cap)
        self.trail_old = <u64*>malloc(sizeof(u64) * self.trail_cap)
        for i in range(ne):
            self.esrc[i] = esrc[i]
            self.edst[i] = edst[i]
        for i in range(nh):
            self.out_adj[i] = out_adj[i]
            self.in_adj[i] = in_adj[i]
        cdef int *deg = <int*>malloc(sizeof(int) * (n + 1))
        for i in range(n + 1):
            deg[i] = 0
        for i in range(ne):
            deg[self.esrc[i]] += 1
            deg[self.edst[i]] += 1
        self.inc_start[0] = 0
        for i in range(n):
            self.inc_start[i + 1] = self.inc_start[i] + deg[i]
            deg[i] = self.inc_start[i]
        for i in range(ne):
            self.inc[deg[self.esrc[i]]] = i
            deg[self.esrc[i]] += 1
            self.inc[deg[self.edst[i]]] = i
            deg[self.edst[i]] += 1
        free(deg)

    def __dealloc__(self):
        free(self.esrc); free(self.edst)
        free(self.out_adj); free(self.in_adj)
        free(self.inc_start); free(self.inc)
        free(self.queue); free(self.inq)
        free(self.trail_var); free(self.trail_old)

    cdef void _grow_trail(self, long need):
        cdef long cap = self.trail_cap
        while cap < need:
            cap *= 2
        if cap != self.trail_cap:
            self.trail_var = grow_int(self.trail_var, self.trail_cap, cap)
            self.trail_old = grow_u64(self.trail_old, self.trail_cap, cap)
            self.trail_cap = cap

    cdef void _undo(self, u64 *lists, long frm, long to):
        cdef long i
        for i in range(to - 1, frm - 1, -1):
            lists[self.trail_var[i]] = self.trail_old[i]

    cdef long _ac(self, u64 *lists, long tpos):
        """AC-3 fixed point, appending changes to the trail from tpos on.
        Returns the new trail position; on wipeout undoes its own changes
        and returns -1."""
        cdef int qh = 0, qt = 0, qcap = self.ne + 1
        cdef int e, x, y, k, e2
        cdef long t0 = tpos
        cdef u64 lx, ly, nx, ny, m, b
        if self.ne == 0:
            return tpos
        for e in range(self.ne):
            self.queue[e] = e
            self.inq[e] = 1
        qt = self.ne
        if qt == qcap:
            qt = 0
        while qh != qt:
            e = self.queue[qh]
            qh += 1
            if qh == qcap:
                qh = 0
            self.inq[e] = 0
            x = self.esrc[e]
            y = self.edst[e]
            lx = lists[x]
            ly = lists[y]
            nx = 0
            m = lx
            while m:
                b = m & (~m + 1)
                m ^= b
                if self.out_adj[ctz64(b)] & ly:
                    nx |= b
            ny = 0
            m = ly
            while m:
                b = m & (~m + 1)
                m ^= b
                if self.in_adj[ctz64(b)] & nx:
                    ny |= b
            if nx != lx:
                if nx == 0:
                    self._undo(lists, t0, tpos)
                    return -1
                self._grow_trail(tpos + 1)
                self.trail_var[tpos] = x
                self.trail_old[tpos] = lx
                tpos += 1
                lists[x] = nx
                for k in range(self.inc_start[x], self.inc_start[x + 1]):
                    e2 = self.inc[k]
                    if not self.inq[e2]:
                        self.inq[e2] = 1
                        self.queue[qt] = e2
                        qt += 1
                        if qt == qcap:
                            qt = 0
            if ny != ly:
                if ny == 0:
                    self._undo(lists, t0, tpos)
                    return -1
                self._grow_trail(tpos + 1)
                self.trail_var[tpos] = y
                self.trail_old[tpos] = ly
                tpos += 1
                lists[y] = ny
                for k in range(self.inc_start[y], self.inc_start[y + 1]):
                    e2 = self.inc[k]
                    if not self.inq[e2]:
                        self.inq[e2] = 1
                        self.queue[qt] = e2
                        qt += 1
                        if qt == qcap:
                            qt = 0
        return tpos

    cdef int _pick(self, u64 *lists):
        cdef int best = -1, bc = 65, i, c
        for i in range(self.n):
            c = popcount64(lists[i])
            if 1 < c < bc:
                bc = c
                best = i
                if c == 2:
                    break
        return best

    cdef int _solve(self, u64 *lists, long tpos):
        cdef int var = self._pick(lists)
        cdef u64 m, b
        cdef long t2
        if var < 0:
            return 1
        m = lists[var]
        while m:
            b = m & (~m + 1)
            m ^= b
            self._grow_trail(tpos + 1)
            self.trail_var[tpos] = var
            self.trail_old[tpos] = lists[var]
            lists[var] = b
            t2 = self._ac(lists, tpos + 1)
            if t2 >= 0:
                if self._solve(lists, t2):
                    return 1
                self._undo(lists, tpos, t2)
            else:
                lists[var] = self.trail_old[tpos]
        return 0

    cdef object _count_rec(self, u64 *lists, long tpos):
        cdef int var = self._pick(lists)
        cdef u64 m, b
        cdef long t2
        if var < 0:
            return 1
        total = 0
        m = lists[var]
        while m:
            b = m & (~m + 1)
            m ^= b
            self._grow_trail(tpos + 1)
            self.trail_var[tpos] = var
            self.trail_old[tpos] = lists[var]
            lists[var] = b
            t2 = self._ac(lists, tpos + 1)
            if t2 >= 0:
                total += self._count_rec(lists, t2)
                self._undo(lists, tpos, t2)
            else:
                lists[var] = self.trail_old[tpos]
        return total

    cdef u64 *_load(self, lists):
        cdef u64 *work = <u64*>malloc(sizeof(u64) * max(self.n, 1))
        cdef int i
        for i in range(self.n):
            work[i] = lists[i]
        return work

    def run_ac(self, lists):
        """Refine lists in place to the greatest arc-consistent fixed point;
        False means some list emptied."""
        cdef u64 *work = self._load(lists)
        cdef int i
        try:
            if self._ac(work, 0) < 0:
                return False
            for i in range(self.n):
                lists[i] = work[i]
            return True
        finally:
            free(work)

    def search(self, lists):
        """MAC backtracking search. Returns the assignment (list of target
        vertices) or None. lists is left unchanged."""
        cdef u64 *work = self._load(lists)
        cdef int i
        try:
            if self._ac(work, 0) < 0:
                return None
            if not self._solve(work, 0):
                return None
            return [ctz64(work[i]) for i in range(self.n)]
        finally:
            free(work)

    def count(self, lists):
        """Number of list-respecting homomorphisms (exhaustive)."""
        cdef u64 *work = self._load(lists)
        try:
            if self._ac(work, 0) < 0:
                return 0
            return self._count_rec(work, 0)
        finally:
            free(work)
