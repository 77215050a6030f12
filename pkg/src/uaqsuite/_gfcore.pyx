# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field and subset-scan kernels.

Same contract as `_gfpure`; see that module for semantics. Callers go
through `gf`, which converts arguments to int64 buffers and falls back
to the pure module when a value does not fit."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline long long _mod_inv(long long a, long long p) nogil:
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


cdef long long _det_inplace(long long *a, int n, long long p) nogil:
    cdef long long det = 1, pv, inv, f
    cdef int col, r, c, piv
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if a[r * n + col]:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != col:
            for c in range(n):
                pv = a[col * n + c]
                a[col * n + c] = a[piv * n + c]
                a[piv * n + c] = pv
            det = (p - det) if det else 0
        pv = a[col * n + col]
        det = det * pv % p
        inv = _mod_inv(pv, p)
        for r in range(col + 1, n):
            f = a[r * n + col] * inv % p
            if f:
                for c in range(col, n):
                    a[r * n + c] = (a[r * n + c] - f * a[col * n + c]) % p
                    if a[r * n + c] < 0:
                        a[r * n + c] += p
    return det


def det_mod_p(long long[::1] flat, int n, long long p):
    cdef long long *a = <long long *> malloc(n * n * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef int i
    cdef long long v
    for i in range(n * n):
        v = flat[i] % p
        a[i] = v + p if v < 0 else v
    cdef long long det = _det_inplace(a, n, p)
    free(a)
    return det


def rank_mod_p(long long[::1] flat, int rows, int cols, long long p):
    cdef long long *a = <long long *> malloc(rows * cols * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef int i, col, r, c, piv, rank = 0
    cdef long long inv, f, tmp
    for i in range(rows * cols):
        tmp = flat[i] % p
        a[i] = tmp + p if tmp < 0 else tmp
    for col in range(cols):
        piv = -1
        for r in range(rank, rows):
            if a[r * cols + col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for c in range(cols):
                tmp = a[rank * cols + c]
                a[rank * cols + c] = a[piv * cols + c]
                a[piv * cols + c] = tmp
        inv = _mod_inv(a[rank * cols + col], p)
        for r in range(rank + 1, rows):
            f = a[r * cols + col] * inv % p
            if f:
                for c in range(col, cols):
                    a[r * cols + c] = (a[r * cols + c] - f * a[rank * cols + c]) % p
                    if a[r * cols + c] < 0:
                        a[r * cols + c] += p
        rank += 1
        if rank == rows:
            break
    free(a)
    return rank


def wedge_fill(long long[::1] flat, int n, int k, long long p, long long[::1] out):
    cdef int pos = 0, i, r, c, base
    cdef long long v
    if k == 0:
        out[0] = 1 % p
        return
    if k > n:
        return
    cdef int *idx = <int *> malloc(k * sizeof(int))
    cdef long long *sub = <long long *> malloc(k * k * sizeof(long long))
    if idx == NULL or sub == NULL:
        free(idx)
        free(sub)
        raise MemoryError()
    for i in range(k):
        idx[i] = i
    while True:
        for r in range(k):
            base = idx[r] * k
            for c in range(k):
                v = flat[base + c] % p
                sub[r * k + c] = v + p if v < 0 else v
        out[pos] = _det_inplace(sub, k, p)
        pos += 1
        i = k - 1
        while i >= 0 and idx[i] == n - k + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for r in range(i + 1, k):
            idx[r] = idx[r - 1] + 1
    free(idx)
    free(sub)


cdef class EchelonBasis:
    cdef long long p
    cdef int dim
    cdef int _rank
    cdef long long *buf
    cdef int *pivots
    cdef long long *scratch

    def __cinit__(self, int dim, long long p):
        self.dim = dim
        self.p = p
        self._rank = 0
        cdef size_t cap = (dim if dim > 0 else 1)
        self.buf = <long long *> malloc(cap * cap * sizeof(long long))
        self.pivots = <int *> malloc(cap * sizeof(int))
        self.scratch = <long long *> malloc(cap * sizeof(long long))
        if self.buf == NULL or self.pivots == NULL or self.scratch == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.buf)
        free(self.pivots)
        free(self.scratch)

    @property
    def rank(self):
        return self._rank

    def insert(self, long long[::1] vec):
        cdef long long p = self.p
        cdef int dim = self.dim
        cdef long long *v = self.scratch
        cdef int i, j, pivot
        cdef long long c, inv
        for i in range(dim):
            c = vec[i] % p
            v[i] = c + p if c < 0 else c
        for i in range(self._rank):
            pivot = self.pivots[i]
            c = v[pivot]
            if c:
                for j in range(pivot, dim):
                    v[j] = (v[j] - c * self.buf[i * dim + j]) % p
                    if v[j] < 0:
                        v[j] += p
        for j in range(dim):
            if v[j]:
                inv = _mod_inv(v[j], p)
                for i in range(dim):
                    self.buf[self._rank * dim + i] = v[i] * inv % p
                self.pivots[self._rank] = j
                self._rank += 1
                return True
        return False


def find_solution(long long[::1] role_masks, long long plb, long long pub,
                  long long kp, int kr, long long[::1] cons_masks,
                  long long[::1] cons_caps, long long max_subsets):
    cdef int n = role_masks.shape[0]
    cdef int ncons = cons_masks.shape[0]
    cdef long long count = 0
    cdef int size, i, j, rid
    cdef long long granted, rmask
    cdef bint ok
    cdef int *idx = <int *> malloc((kr + 1) * sizeof(int))
    if idx == NULL:
        raise MemoryError()
    if kr > n:
        kr = n
    try:
        for size in range(kr + 1):
            if size == 0:
                if count >= max_subsets:
                    return None, count, True
                count += 1
                if plb == 0:
                    ok = True
                    for j in range(ncons):
                        if cons_caps[j] < 0:
                            ok = False
                            break
                    if ok:
                        return (), count, False
                continue
            for i in range(size):
                idx[i] = i
            while True:
                if count >= max_subsets:
                    return None, count, True
                count += 1
                granted = 0
                for i in range(size):
                    granted |= role_masks[idx[i]]
                if not (plb & ~granted) and not (granted & ~pub) \
                        and __builtin_popcountll(granted & ~plb) <= kp:
                    rmask = 0
                    for i in range(size):
                        rmask |= (<long long>1) << idx[i]
                    ok = True
                    for j in range(ncons):
                        if __builtin_popcountll(rmask & cons_masks[j]) > cons_caps[j]:
                            ok = False
                            break
                    if ok:
                        return tuple(idx[i] for i in range(size)), count, False
                i = size - 1
                while i >= 0 and idx[i] == n - size + i:
                    i -= 1
                if i < 0:
                    break
                idx[i] += 1
                for j in range(i + 1, size):
                    idx[j] = idx[j - 1] + 1
        return None, count, False
    finally:
        free(idx)
