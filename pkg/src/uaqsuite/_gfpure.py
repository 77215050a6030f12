"""Pure-Python finite-field and subset-scan kernels.

Reference implementations for the hot loops: prime-field elimination,
minor determinants, incremental echelon bases, and the brute-force
subset scan. The compiled module `_gfcore` mirrors this API exactly and
is preferred at import when available; see `gf`.

Vectors and matrices cross this boundary as flat sequences of ints
(row-major for matrices). All arithmetic is modulo a prime p supplied by
the caller.
"""

from __future__ import annotations

import itertools


def det_mod_p(flat, n, p):
    """Determinant of an n*n matrix given row-major, reduced mod p."""
    a = [[flat[i * n + j] % p for j in range(n)] for i in range(n)]
    det = 1
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = p - det if det else 0
        pv = a[col][col]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        row = a[col]
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                ar = a[r]
                for c in range(col, n):
                    ar[c] = (ar[c] - f * row[c]) % p
    return det


def rank_mod_p(flat, rows, cols, p):
    """Rank of a rows*cols matrix given row-major, mod p."""
    a = [[flat[i * cols + j] % p for j in range(cols)] for i in range(rows)]
    rank = 0
    for col in range(cols):
        piv = -1
        for r in range(rank, rows):
            if a[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], p - 2, p)
        row = a[rank]
        for r in range(rank + 1, rows):
            f = a[r][col] * inv % p
            if f:
                ar = a[r]
                for c in range(col, cols):
                    ar[c] = (ar[c] - f * row[c]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def wedge_fill(flat, n, k, p, out):
    """All k*k row-minors of an n*k matrix, in lexicographic row-subset
    order, written into `out` (length binomial(n, k))."""
    if k == 0:
        out[0] = 1 % p
        return
    pos = 0
    sub = [0] * (k * k)
    for combo in itertools.combinations(range(n), k):
        idx = 0
        for r in combo:
            base = r * k
            for c in range(k):
                sub[idx] = flat[base + c]
                idx += 1
        out[pos] = det_mod_p(sub, k, p)
        pos += 1


class EchelonBasis:
    """Incremental row basis over GF(p) with first-nonzero pivoting.

    insert() reduces the vector against the stored rows and keeps it iff
    a nonzero residue remains, so processing a family in order yields a
    deterministic spanning subset.
    """

    def __init__(self, dim, p):
        self.dim = dim
        self.p = p
        self.rows = []  # (pivot index, normalized row)

    @property
    def rank(self):
        return len(self.rows)

    def insert(self, vec) -> bool:
        p = self.p
        v = [x % p for x in vec]
        for pivot, row in self.rows:
            c = v[pivot]
            if c:
                for j in range(pivot, self.dim):
                    v[j] = (v[j] - c * row[j]) % p
        for j in range(self.dim):
            if v[j]:
                inv = pow(v[j], p - 2, p)
                self.rows.append((j, [x * inv % p for x in v]))
                return True
        return False


def find_solution(role_masks, plb, pub, kp, kr, cons_masks, cons_caps, max_subsets):
    """First role subset (size-ascending, then lexicographic) meeting all
    solution clauses. Returns (combo or None, subsets tested, hit cap)."""
    n = len(role_masks)
    count = 0
    for size in range(min(kr, n) + 1):
        for combo in itertools.combinations(range(n), size):
            if count >= max_subsets:
                return None, count, True
            count += 1
            granted = 0
            for rid in combo:
                granted |= role_masks[rid]
            if plb & ~granted:
                continue
            if granted & ~pub:
                continue
            if (granted & ~plb).bit_count() > kp:
                continue
            rmask = 0
            for rid in combo:
                rmask |= 1 << rid
            ok = True
            for cmask, cap in zip(cons_masks, cons_caps):
                if (rmask & cmask).bit_count() > cap:
                    ok = False
                    break
            if ok:
                return combo, count, False
    return None, count, False
