"""Representative families over a partition matroid.

Given a family of independent p-sets, a q-representative subfamily
preserves extendability: whenever some member is disjoint from a set B
with |B| <= q and stays independent together with it, a kept member does
too. The dynamic program only ever needs extendability, so tables can be
pruned to representative subfamilies without changing the answer.

Members map to wedge vectors (all p-row minors of their representation
columns); a spanning subset of those vectors is representative, and a
deterministic echelon scan extracts one in input order.

Two engines:

exact      wedge vectors over the full representation, dimension
           binomial(rank, p); no randomness, no failure probability.
truncated  the representation is first compressed to p+q rows by a
           random matrix over a large prime field, shrinking the wedge
           dimension to binomial(p+q, p); may fail with probability at
           most |family| * binomial(rank, p) / field.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from . import gf
from .errors import ConfigError, InputError
from .matroid import FieldMatrix, PartitionMatroid, is_independent

# smallest prime at or above 2**31; frozen, checked by tests
DEFAULT_TRUNCATION_FIELD = 2_147_483_659


@dataclass(frozen=True)
class Family:
    """Distinct role sets of one size, kept in insertion order."""

    sets: tuple[tuple[int, ...], ...]
    p: int

    @staticmethod
    def from_sets(sets, p: int) -> "Family":
        seen = set()
        out = []
        for s in sets:
            key = tuple(sorted(s))
            if len(key) != p:
                raise InputError(f"family member {key} does not have size {p}")
            if key not in seen:
                seen.add(key)
                out.append(key)
        return Family(tuple(out), p)


@dataclass(frozen=True)
class RepConfig:
    mode: str = "exact"
    seed: int = 0
    truncation_field: int = DEFAULT_TRUNCATION_FIELD

    def __post_init__(self):
        if self.mode not in ("exact", "truncated"):
            raise ConfigError(f"unknown representative-family mode {self.mode!r}")


def wedge_vector(m: PartitionMatroid, s, working_rep: FieldMatrix = None):
    """Wedge coordinates of a role set: every |s|-row minor of its columns,
    row subsets in lexicographic order. Zero iff the columns are dependent."""
    rep = m.rep if working_rep is None else working_rep
    cols = sorted(m.column_of(rid) for rid in frozenset(s))
    flat = rep.columns_flat(cols)
    return gf.wedge_coords(flat, rep.rows, len(cols), rep.p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _big_field_rep(m: PartitionMatroid, field_p: int) -> FieldMatrix:
    # same block-diagonal Vandermonde shape as m.rep, rebuilt natively over
    # the large field so independence stays faithful there
    data = [[0] * len(m.ground) for _ in range(m.rank)]
    row_base = 0
    for roles, cap in m.blocks:
        for local, rid in enumerate(sorted(roles)):
            col = m.column_of(rid)
            for e in range(cap):
                data[row_base + e][col] = pow(local + 1, e, field_p)
        row_base += cap
    return FieldMatrix(p=field_p, rows=m.rank, cols=len(m.ground),
                       data=tuple(tuple(r) for r in data))


def _truncated_rep(m: PartitionMatroid, rows: int, cfg: RepConfig) -> FieldMatrix:
    big = _big_field_rep(m, cfg.truncation_field)
    rng = random.Random(cfg.seed)
    t = [[rng.randrange(cfg.truncation_field) for _ in range(m.rank)] for _ in range(rows)]
    p = cfg.truncation_field
    data = []
    for i in range(rows):
        row = []
        ti = t[i]
        for c in range(big.cols):
            acc = 0
            for r in range(big.rows):
                acc = (acc + ti[r] * big.data[r][c]) % p
            row.append(acc)
        data.append(tuple(row))
    return FieldMatrix(p=p, rows=rows, cols=big.cols, data=tuple(data))


def compute_repfam(m: PartitionMatroid, fam: Family, q: int,
                   cfg: RepConfig = None, wedge_cache: dict = None) -> Family:
    """q-representative subfamily of fam, in fam's member order.

    Exact mode output size is at most binomial(rank, p); truncated mode
    output size is at most binomial(p+q, p). With q=0 only witness
    existence matters and the first member alone suffices.
    """
    cfg = cfg or RepConfig()
    if q < 0:
        raise InputError("negative extension budget")
    for s in fam.sets:
        if len(s) != fam.p:
            raise InputError(f"family member {s} does not have size {fam.p}")
        if not is_independent(m, s):
            raise InputError(f"family member {s} is not independent")
    if not fam.sets:
        return fam
    if q == 0:
        return Family((fam.sets[0],), fam.p)
    if cfg.mode == "truncated":
        if not _is_prime(cfg.truncation_field) or cfg.truncation_field < 2**31:
            raise ConfigError(
                f"truncation field must be a prime of at least 2**31, got {cfg.truncation_field}")
        if fam.p + q > m.rank:
            raise ConfigError(
                f"truncation rank {fam.p + q} exceeds matroid rank {m.rank}")
        rep = _truncated_rep(m, fam.p + q, cfg)
        cache = None
    else:
        rep = m.rep
        cache = wedge_cache
    dim = math.comb(rep.rows, fam.p)
    basis = gf.echelon_basis(dim, rep.p)
    kept = []
    for s in fam.sets:
        if cache is not None:
            w = cache.get(s)
            if w is None:
                w = wedge_vector(m, s, rep)
                cache[s] = w
        else:
            w = wedge_vector(m, s, rep)
        if basis.insert(w):
            kept.append(s)
    return Family(tuple(kept), fam.p)


def _fits(m: PartitionMatroid, a, b: frozenset) -> bool:
    sa = frozenset(a)
    return not (sa & b) and is_independent(m, sa | b)


def oracle_is_representative(m: PartitionMatroid, fam: Family, sub: Family,
                             q: int, universe) -> bool:
    """Exhaustive check of the representative property, for tests.

    True iff for every B drawn from universe with |B| <= q, some member of
    fam fits B exactly when some member of sub does. Exponential in
    |universe|; never called by the solver.
    """
    univ = sorted(set(universe))
    for size in range(q + 1):
        for combo in itertools.combinations(univ, size):
            b = frozenset(combo)
            in_fam = any(_fits(m, a, b) for a in fam.sets)
            in_sub = any(_fits(m, a, b) for a in sub.sets)
            if in_fam != in_sub:
                return False
    return True
