"""Core domain model: masks, instances, verification, class checking."""

import pytest
from hypothesis import given, strategies as st

from uaqsuite.errors import InputError
from uaqsuite.model import (
    ClassParams,
    SodConstraint,
    Solution,
    bits,
    check_class,
    make_instance,
    mask_of,
    permissions_of,
    stats,
    verify_solution,
    with_unbounded_kr,
)


@given(st.sets(st.integers(min_value=0, max_value=200)))
def test_mask_roundtrip(ids):
    assert set(bits(mask_of(ids))) == ids


def test_bits_order_ascending():
    assert list(bits(0b101001)) == [0, 3, 5]


def small_instance(**overrides):
    kwargs = dict(
        roles=["alice", "bob", "carol"],
        permissions=["read", "write", "audit"],
        rp=[("alice", "read"), ("bob", "write"), ("carol", "read"),
            ("carol", "audit")],
        plb=["read", "write"],
        kr=2,
        kp=1,
    )
    kwargs.update(overrides)
    return make_instance(**kwargs)


def test_make_instance_interning():
    inst = small_instance()
    assert inst.n_roles == 3 and inst.n_perms == 3
    assert inst.role_id("bob") == 1
    assert inst.perm_labels[inst.perm_id("audit")] == "audit"
    carol = inst.role_perm_masks[inst.role_id("carol")]
    assert {inst.perm_labels[b] for b in bits(carol)} == {"read", "audit"}


def test_make_instance_unknown_labels():
    with pytest.raises(InputError, match="dave"):
        small_instance(rp=[("dave", "read")])
    with pytest.raises(InputError, match="delete"):
        small_instance(plb=["delete"])
    with pytest.raises(InputError, match="dave"):
        small_instance(constraints=[(["dave"], 1)])


def test_make_instance_duplicate_labels():
    with pytest.raises(InputError):
        small_instance(roles=["alice", "alice", "bob"])
    with pytest.raises(InputError):
        small_instance(constraints=[(["alice", "alice"], 1)])


def test_instance_invariants():
    with pytest.raises(InputError):
        small_instance(pub=["read"])  # plb must sit inside pub
    with pytest.raises(InputError):
        small_instance(kr=-1)
    with pytest.raises(InputError):
        small_instance(kp=-1)
    with pytest.raises(InputError):
        small_instance(constraints=[(["alice"], 0)])


def test_pub_defaults_to_all_permissions():
    inst = small_instance()
    assert inst.pub_mask == inst.all_perms_mask


def test_sod_mask():
    con = SodConstraint(frozenset({0, 2}), 1)
    assert con.mask == 0b101


def test_verify_good_solution():
    inst = small_instance()
    sol = Solution(inst.role_ids({"alice", "bob"}))
    verdict = verify_solution(inst, sol)
    assert verdict.ok and not verdict.violations


def test_verify_each_violation_kind():
    inst = small_instance()
    kinds = {v.kind for v in
             verify_solution(inst, inst.role_ids({"alice"})).violations}
    assert kinds == {"missing-permission"}

    kinds = {v.kind for v in verify_solution(
        inst, inst.role_ids({"alice", "bob", "carol"})).violations}
    assert "role-budget" in kinds

    narrow = small_instance(pub=["read", "write"], kp=0)
    kinds = {v.kind for v in verify_solution(
        narrow, narrow.role_ids({"carol", "bob"})).violations}
    assert "forbidden-permission" in kinds

    tight = small_instance(kp=0)
    kinds = {v.kind for v in verify_solution(
        tight, tight.role_ids({"carol", "bob"})).violations}
    assert "extra-budget" in kinds

    fenced = small_instance(constraints=[(["alice", "bob"], 2)])
    kinds = {v.kind for v in verify_solution(
        fenced, fenced.role_ids({"alice", "bob"})).violations}
    assert "sod" in kinds


def test_verify_one_missing_violation_per_permission():
    inst = small_instance()
    verdict = verify_solution(inst, frozenset())
    missing = [v for v in verdict.violations if v.kind == "missing-permission"]
    assert sorted(v.subject for v in missing) == ["read", "write"]


def test_verify_rejects_unknown_ids():
    inst = small_instance()
    with pytest.raises(InputError):
        verify_solution(inst, {99})


def test_check_class_clean():
    inst = small_instance()
    report = check_class(inst, ClassParams(2, 2, 3))
    assert report.ok and not report.witnesses


def test_check_class_shared_permissions_witness():
    inst = make_instance(
        roles=["r1", "r2"],
        permissions=["p1", "p2"],
        rp=[("r1", "p1"), ("r1", "p2"), ("r2", "p1"), ("r2", "p2")],
        plb=["p1"], kr=1, kp=1,
    )
    report = check_class(inst, ClassParams(2, 2, 3))
    assert not report.kab_free
    assert report.witnesses[0][0] == "shared-permissions"
    assert report.witnesses[0][1] == {"r1", "r2"}


def test_check_class_width_and_overlap_witnesses():
    inst = small_instance(
        constraints=[(["alice", "bob", "carol"], 2), (["carol"], 1)])
    report = check_class(inst, ClassParams(2, 2, 2))
    tags = {w[0] for w in report.witnesses}
    assert not report.widths_ok and "constraint-width" in tags
    assert not report.disjoint_ok and "constraint-overlap" in tags
    assert not report.ok


def test_stats_counts():
    inst = small_instance()
    s = stats(inst)
    assert (s.n_roles, s.n_perms, s.n_constraints) == (3, 3, 0)
    assert s.k_hat == 1  # audit
    assert s.r_hat == 1  # carol holds audit


def test_with_unbounded_kr():
    inst = small_instance()
    wide = with_unbounded_kr(inst)
    assert wide.kr == wide.n_roles
    assert wide.role_labels == inst.role_labels
    assert with_unbounded_kr(wide) is wide


def test_permissions_of_union():
    inst = small_instance()
    perms = permissions_of(inst, inst.role_ids({"alice", "carol"}))
    assert {inst.perm_labels[p] for p in perms} == {"read", "audit"}
