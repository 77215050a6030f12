"""Partition matroid construction and its linear representation."""

import itertools
import random

import pytest

from uaqsuite.errors import ClassViolationError, InputError
from uaqsuite.matroid import (
    FieldMatrix,
    build_csm,
    is_independent,
    rank_of_columns,
    smallest_prime_above,
)
from uaqsuite.model import make_instance

from conftest import random_compliant


def test_smallest_prime_above_frozen_values():
    assert smallest_prime_above(13) == 17
    assert smallest_prime_above(2**31 - 1) == 2_147_483_659
    assert smallest_prime_above(0) == 2
    assert smallest_prime_above(1) == 2
    assert smallest_prime_above(2) == 3
    assert smallest_prime_above(14) == 17
    assert smallest_prime_above(100) == 101


def _inst_with_constraint():
    return make_instance(
        roles=["r0", "r1", "r2", "r3", "r4"],
        permissions=["p0", "p1"],
        rp=[("r0", "p0"), ("r1", "p0"), ("r2", "p1"), ("r3", "p1"), ("r4", "p1")],
        plb=["p0", "p1"],
        kr=3,
        kp=0,
        constraints=[(["r0", "r1", "r2"], 3)],
    )


def test_build_csm_block_structure():
    m = build_csm(_inst_with_constraint())
    assert m.ground == (0, 1, 2, 3, 4)
    by_roles = {roles: cap for roles, cap in m.blocks}
    assert by_roles[frozenset([0, 1, 2])] == 2  # t - 1
    assert by_roles[frozenset([3])] == 1
    assert by_roles[frozenset([4])] == 1
    assert m.rank == 4
    assert m.rep.rows == m.rank
    assert m.rep.cols == 5
    assert m.rep.p == smallest_prime_above(max(5, 3, 2 * m.rank))


def test_build_csm_capacity_clamped_to_block_size():
    inst = make_instance(
        roles=["a", "b"],
        permissions=["p"],
        rp=[("a", "p"), ("b", "p")],
        plb=["p"],
        kr=2,
        kp=0,
        constraints=[(["a", "b"], 5)],
    )
    m = build_csm(inst)
    by_roles = {roles: cap for roles, cap in m.blocks}
    assert by_roles[frozenset([0, 1])] == 2
    assert is_independent(m, {0, 1})


def test_build_csm_rejects_overlapping_constraints():
    inst = make_instance(
        roles=["a", "b", "c"],
        permissions=["p"],
        rp=[("a", "p")],
        plb=["p"],
        kr=2,
        kp=0,
        constraints=[(["a", "b"], 2), (["b", "c"], 2)],
    )
    with pytest.raises(ClassViolationError) as exc:
        build_csm(inst)
    tags = [tag for tag, _witness in exc.value.witnesses]
    assert tags == ["constraint-overlap"]
    _tag, witness = exc.value.witnesses[0]
    assert witness == frozenset({"b"})


def test_column_of_unknown_role_raises():
    m = build_csm(_inst_with_constraint())
    with pytest.raises(InputError):
        m.column_of(99)


def test_independence_matches_constraints_directly():
    m = build_csm(_inst_with_constraint())
    # block {0,1,2} has capacity 2
    assert is_independent(m, set())
    assert is_independent(m, {0, 1})
    assert not is_independent(m, {0, 1, 2})
    assert is_independent(m, {0, 1, 3, 4})
    assert not is_independent(m, {0, 1, 2, 3})


def test_representation_is_faithful_small():
    m = build_csm(_inst_with_constraint())
    for size in range(len(m.ground) + 1):
        for combo in itertools.combinations(m.ground, size):
            rs = frozenset(combo)
            assert is_independent(m, rs) == (rank_of_columns(m, rs) == len(rs))


def test_representation_is_faithful_random():
    rng = random.Random(1107)
    for _trial in range(40):
        inst = random_compliant(rng, max_roles=6, max_perms=8)
        m = build_csm(inst)
        for size in range(min(len(m.ground), 5) + 1):
            for combo in itertools.combinations(m.ground, size):
                rs = frozenset(combo)
                want = is_independent(m, rs)
                assert want == (rank_of_columns(m, rs) == len(rs))


def test_rank_of_columns_counts_dependent_sets():
    m = build_csm(_inst_with_constraint())
    assert rank_of_columns(m, set()) == 0
    assert rank_of_columns(m, {0}) == 1
    # three roles of a capacity-2 block span only 2 dimensions
    assert rank_of_columns(m, {0, 1, 2}) == 2


def test_build_csm_is_deterministic():
    a = build_csm(_inst_with_constraint())
    b = build_csm(_inst_with_constraint())
    assert a.ground == b.ground
    assert a.blocks == b.blocks
    assert a.p == b.p
    assert a.rank == b.rank
    assert a.rep.data == b.rep.data


def test_field_matrix_shape_checked():
    with pytest.raises(InputError):
        FieldMatrix(p=5, rows=2, cols=2, data=((1, 2),))
    with pytest.raises(InputError):
        FieldMatrix(p=5, rows=1, cols=2, data=((1,),))


def test_blocks_cover_every_role_once():
    rng = random.Random(2211)
    for _trial in range(25):
        inst = random_compliant(rng, max_roles=7, max_perms=8)
        m = build_csm(inst)
        seen = []
        for roles, cap in m.blocks:
            assert 0 <= cap <= len(roles)
            seen.extend(roles)
        assert sorted(seen) == list(range(inst.n_roles))
