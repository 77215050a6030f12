"""Partition matroid over roles, with a prime-field linear representation.

Each separation-of-duty constraint (X, t) becomes a block whose capacity
is t-1: an independent set may use at most t-1 roles of X. Roles in no
constraint sit in their own capacity-1 block. Independence of a role set
is then exactly constraint satisfaction plus no repeats, which is what
the dynamic program needs.

The representation is block-diagonal: a block of capacity c contributes c
rows, and the column of a role in that block is the Vandermonde vector
(1, x, x^2, ..., x^(c-1)) for an evaluation point x unique within the
block. Any c columns of such a slice are independent, any c+1 are not,
so the matrix represents the matroid faithfully over GF(p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from . import gf
from .errors import ClassViolationError, InputError


def smallest_prime_above(n: int) -> int:
    """Least prime strictly greater than n."""
    cand = max(n + 1, 2)
    while True:
        if cand == 2 or (cand % 2 and all(cand % d for d in range(3, isqrt(cand) + 1, 2))):
            return cand
        cand += 1


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix over GF(p), rows stored as tuples."""

    p: int
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise InputError("matrix shape mismatch")

    def flat(self) -> list[int]:
        out = []
        for row in self.data:
            out.extend(row)
        return out

    def columns_flat(self, cols) -> list[int]:
        """Row-major flattening of the selected columns, given order."""
        out = []
        for row in self.data:
            out.extend(row[c] for c in cols)
        return out


@dataclass(frozen=True)
class PartitionMatroid:
    ground: tuple[int, ...]  # role ids, also the column order of rep
    blocks: tuple[tuple[frozenset[int], int], ...]  # (role set, capacity)
    p: int
    rank: int
    rep: FieldMatrix
    _block_of: dict = field(default_factory=dict, repr=False, compare=False)
    _col_of: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for bi, (roles, _cap) in enumerate(self.blocks):
            for rid in roles:
                self._block_of[rid] = bi
        self._col_of.update({rid: i for i, rid in enumerate(self.ground)})

    def column_of(self, rid: int) -> int:
        try:
            return self._col_of[rid]
        except KeyError:
            raise InputError(f"role id {rid} is not in the matroid ground set") from None


def build_csm(leaf) -> PartitionMatroid:
    """Constraint satisfaction matroid of a leaf (or bare instance).

    Requires pairwise-disjoint constraint role sets; the block structure
    does not exist otherwise.
    """
    inst = getattr(leaf, "inst", leaf)
    covered = set()
    blocks = []
    for con in inst.constraints:
        overlap = covered & con.roles
        if overlap:
            raise ClassViolationError(
                "constraints share roles, no partition matroid exists",
                witnesses=[("constraint-overlap", inst.role_label_set(overlap))],
            )
        covered |= con.roles
        blocks.append((con.roles, min(con.t - 1, len(con.roles))))
    for rid in range(inst.n_roles):
        if rid not in covered:
            blocks.append((frozenset([rid]), 1))
    blocks.sort(key=lambda b: min(b[0]))
    rank = sum(cap for _roles, cap in blocks)
    max_width = max((len(roles) for roles, _cap in blocks), default=0)
    p = smallest_prime_above(max(inst.n_roles, max_width, 2 * rank))
    ground = tuple(range(inst.n_roles))
    # block-diagonal Vandermonde columns
    col_rows = {rid: None for rid in ground}
    row_base = 0
    for roles, cap in blocks:
        for local, rid in enumerate(sorted(roles)):
            x = local + 1  # nonzero, distinct inside the block
            col_rows[rid] = (row_base, tuple(pow(x, e, p) for e in range(cap)))
        row_base += cap
    data = [[0] * len(ground) for _ in range(rank)]
    for col, rid in enumerate(ground):
        base, vals = col_rows[rid]
        for e, v in enumerate(vals):
            data[base + e][col] = v
    rep = FieldMatrix(p=p, rows=rank, cols=len(ground),
                      data=tuple(tuple(r) for r in data))
    return PartitionMatroid(ground=ground, blocks=tuple(blocks), p=p, rank=rank, rep=rep)


def is_independent(m: PartitionMatroid, rs) -> bool:
    """Combinatorial independence: within every block, at most its capacity."""
    rs = frozenset(rs)
    for rid in rs:
        m.column_of(rid)
    counts = {}
    for rid in rs:
        bi = m._block_of.get(rid)
        if bi is None:
            continue
        counts[bi] = counts.get(bi, 0) + 1
        if counts[bi] > m.blocks[bi][1]:
            return False
    return True


def rank_of_columns(m: PartitionMatroid, rs) -> int:
    """Rank of the representation columns of the given roles."""
    cols = sorted(m.column_of(rid) for rid in frozenset(rs))
    if not cols:
        return 0
    flat = m.rep.columns_flat(cols)
    return gf.rank_mod_p(flat, m.rep.rows, len(cols), m.p)
