"""Preprocessing: role-forcing rules, branching, and the kernel-size gate.

The driver shrinks an instance by deleting roles that can never help,
forcing roles that every solution must contain, and branching on small
role sets that some solution must intersect. Forced roles accumulate in
the partial solution r1 and their budgets are charged immediately, so a
solution of a leaf instance unions with r1 into a solution of the
original instance.

Every structural change restarts the rule cascade from the top. Leaves
are instances none of the rules can shrink further; a final gate marks a
leaf infeasible when its required permission set is provably too large
for its role budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .model import ClassParams, Instance, Role, SodConstraint, bits

# -- leaf bookkeeping ---------------------------------------------------------


@dataclass(frozen=True)
class BranchLeaf:
    inst: Instance
    r1: frozenset[int]  # forced roles, as ids of the original instance
    role_origin: tuple[int, ...]  # leaf role id -> original role id
    trace: tuple[tuple, ...]
    infeasible: bool = False
    reason: Optional[str] = None


@dataclass(frozen=True)
class BranchTree:
    root: Instance
    leaves: tuple[BranchLeaf, ...]


def initial_leaf(inst: Instance) -> BranchLeaf:
    return BranchLeaf(
        inst=inst,
        r1=frozenset(),
        role_origin=tuple(range(inst.n_roles)),
        trace=(),
    )


def _mark_infeasible(leaf: BranchLeaf, record: tuple, reason: str) -> BranchLeaf:
    return BranchLeaf(
        inst=leaf.inst,
        r1=leaf.r1,
        role_origin=leaf.role_origin,
        trace=leaf.trace + (record + ("infeasible", reason),),
        infeasible=True,
        reason=reason,
    )


def _remap_mask(mask: int, new_of_old: dict[int, int]) -> int:
    out = 0
    for b in bits(mask):
        if b in new_of_old:
            out |= 1 << new_of_old[b]
    return out


def _delete_roles(leaf: BranchLeaf, dead, drop_undersized: bool,
                  record: tuple) -> BranchLeaf:
    """Plain deletion: budgets untouched, constraints shrink keeping t.

    drop_undersized additionally removes constraints left with fewer
    roles than their threshold (always satisfied or vacuous by then).
    """
    inst = leaf.inst
    dead = set(dead)
    keep = [r for r in range(inst.n_roles) if r not in dead]
    remap = {old: new for new, old in enumerate(keep)}
    cons = []
    for con in inst.constraints:
        xs = frozenset(remap[r] for r in con.roles if r not in dead)
        if drop_undersized and len(xs) < con.t:
            continue
        cons.append(SodConstraint(xs, con.t))
    inst2 = Instance(
        role_labels=tuple(inst.role_labels[r] for r in keep),
        perm_labels=inst.perm_labels,
        role_perm_masks=tuple(inst.role_perm_masks[r] for r in keep),
        plb_mask=inst.plb_mask,
        pub_mask=inst.pub_mask,
        constraints=tuple(cons),
        kr=inst.kr,
        kp=inst.kp,
    )
    return BranchLeaf(
        inst=inst2,
        r1=leaf.r1,
        role_origin=tuple(leaf.role_origin[r] for r in keep),
        trace=leaf.trace + (record,),
    )


# -- reduction 0 --------------------------------------------------------------


def reduction0(inst: Instance) -> Instance:
    """Delete roles that cannot appear in any solution, then normalize.

    Removed: roles granting nothing from the required set, and roles
    granting anything outside the allowed set. Constraints shrink with
    their thresholds unchanged and disappear once they cannot bind.
    Permissions outside the allowed set are unassigned afterwards and
    are dropped, so the allowed set becomes the whole permission list.
    One pass reaches the fixpoint: deletions never re-trigger the role
    conditions.
    """
    keep_roles = [
        r for r in range(inst.n_roles)
        if inst.role_perm_masks[r] & inst.plb_mask
        and not (inst.role_perm_masks[r] & ~inst.pub_mask)
    ]
    dead_perm_mask = inst.all_perms_mask & ~inst.pub_mask
    cons_ok = all(len(c.roles) >= c.t for c in inst.constraints)
    if len(keep_roles) == inst.n_roles and not dead_perm_mask and cons_ok:
        return inst
    keep_perms = [p for p in range(inst.n_perms) if not (dead_perm_mask >> p) & 1]
    perm_map = {old: new for new, old in enumerate(keep_perms)}
    role_map = {old: new for new, old in enumerate(keep_roles)}
    cons = []
    for con in inst.constraints:
        xs = frozenset(role_map[r] for r in con.roles if r in role_map)
        if len(xs) < con.t:
            continue
        cons.append(SodConstraint(xs, con.t))
    n_perms2 = len(keep_perms)
    return Instance(
        role_labels=tuple(inst.role_labels[r] for r in keep_roles),
        perm_labels=tuple(inst.perm_labels[p] for p in keep_perms),
        role_perm_masks=tuple(
            _remap_mask(inst.role_perm_masks[r], perm_map) for r in keep_roles
        ),
        plb_mask=_remap_mask(inst.plb_mask, perm_map),
        pub_mask=(1 << n_perms2) - 1,
        constraints=tuple(cons),
        kr=inst.kr,
        kp=inst.kp,
    )


# -- forced-role bookkeeping --------------------------------------------------


def update_role(leaf: BranchLeaf, r, _record: tuple = None) -> BranchLeaf:
    """Force role r into the partial solution and charge its budgets.

    The role leaves the instance; its permissions leave the universe
    (they are granted now, so they stop counting anywhere); each
    constraint containing it loses one unit of allowance.
    """
    inst = leaf.inst
    rid = r.id if isinstance(r, Role) else r
    if not 0 <= rid < inst.n_roles:
        raise InputError(f"unknown role id {rid}")
    label = inst.role_labels[rid]
    record = _record if _record is not None else ("update", label)
    if inst.kr == 0:
        return _mark_infeasible(leaf, record, "role budget exhausted")
    pr = inst.role_perm_masks[rid]
    extras = (pr & ~inst.plb_mask).bit_count()
    if extras > inst.kp:
        return _mark_infeasible(leaf, record, "extra-permission budget exhausted")
    cons = []
    for con in inst.constraints:
        if rid in con.roles:
            if con.t == 1:
                return _mark_infeasible(leaf, record, "constraint allowance exhausted")
            cons.append((con.roles - {rid}, con.t - 1))
        else:
            cons.append((con.roles, con.t))
    keep_roles = [x for x in range(inst.n_roles) if x != rid]
    role_map = {old: new for new, old in enumerate(keep_roles)}
    keep_perms = [p for p in range(inst.n_perms) if not (pr >> p) & 1]
    perm_map = {old: new for new, old in enumerate(keep_perms)}
    inst2 = Instance(
        role_labels=tuple(inst.role_labels[x] for x in keep_roles),
        perm_labels=tuple(inst.perm_labels[p] for p in keep_perms),
        role_perm_masks=tuple(
            _remap_mask(inst.role_perm_masks[x] & ~pr, perm_map) for x in keep_roles
        ),
        plb_mask=_remap_mask(inst.plb_mask & ~pr, perm_map),
        pub_mask=_remap_mask(inst.pub_mask & ~pr, perm_map),
        constraints=tuple(
            SodConstraint(frozenset(role_map[x] for x in xs), t) for xs, t in cons
        ),
        kr=inst.kr - 1,
        kp=inst.kp - extras,
    )
    return BranchLeaf(
        inst=inst2,
        r1=leaf.r1 | {leaf.role_origin[rid]},
        role_origin=tuple(leaf.role_origin[x] for x in keep_roles),
        trace=leaf.trace + (record,),
    )


# -- reduction rules ----------------------------------------------------------


def rule1(leaf: BranchLeaf) -> BranchLeaf:
    """Delete roles that grant nothing required or sit in an exhausted
    constraint (threshold 1); drop constraints that can no longer bind."""
    if leaf.infeasible:
        return leaf
    while True:
        inst = leaf.inst
        dead = {
            r for r in range(inst.n_roles)
            if not inst.role_perm_masks[r] & inst.plb_mask
        }
        for con in inst.constraints:
            if con.t == 1:
                dead |= con.roles
        undersized = any(len(c.roles) < c.t for c in inst.constraints)
        if not dead and not undersized:
            return leaf
        record = ("rule1", tuple(sorted(inst.role_labels[r] for r in dead)))
        leaf = _delete_roles(leaf, dead, drop_undersized=True, record=record)


def _rule2_step(leaf: BranchLeaf) -> Optional[BranchLeaf]:
    inst = leaf.inst
    for pid in bits(inst.plb_mask):
        owners = [
            r for r in range(inst.n_roles)
            if (inst.role_perm_masks[r] >> pid) & 1
        ]
        if len(owners) != 1:
            continue
        rid = owners[0]
        record = ("rule2", inst.perm_labels[pid], inst.role_labels[rid])
        extras = (inst.role_perm_masks[rid] & ~inst.plb_mask).bit_count()
        if extras >= inst.kp + 1:
            return _mark_infeasible(leaf, record, "extra-permission budget exhausted")
        return update_role(leaf, rid, _record=record)
    return None


def rule2(leaf: BranchLeaf) -> BranchLeaf:
    """Force the only role granting a required permission; interleaved
    with rule1 until neither changes anything."""
    while True:
        leaf = rule1(leaf)
        if leaf.infeasible:
            return leaf
        nxt = _rule2_step(leaf)
        if nxt is None:
            return leaf
        leaf = nxt
        if leaf.infeasible:
            return leaf


def threshold_b(q: int, kr: int, beta: int) -> int:
    """Shared-coverage bound for branching at depth q.

    Arbitrary-precision arithmetic, so the value never wraps.
    """
    if q < 1 or kr < 0 or beta < 1:
        raise InputError("threshold arguments out of range")
    return beta * kr**q + sum(kr**a for a in range(1, q))


def threshold_h(kr: int, alpha: int, beta: int) -> int:
    """Required-coverage level at which a role becomes forced."""
    if alpha < 2 or kr < 0 or beta < 1:
        raise InputError("threshold arguments out of range")
    return beta * kr ** (alpha - 1) + sum(kr**a for a in range(alpha - 1))


def kernel_bound(kr: int, alpha: int, beta: int) -> int:
    """Largest required-set size a reducible instance can still satisfy."""
    if alpha < 2 or kr < 0 or beta < 1:
        raise InputError("threshold arguments out of range")
    return beta * kr**alpha + sum(kr**a for a in range(1, alpha))


def branching_rule(leaf: BranchLeaf, params: ClassParams) -> list[BranchLeaf]:
    """Branch on a small role set every solution must intersect.

    For q ascending, look for alpha-q roles whose shared required
    coverage exceeds threshold_b(q); one child per member that can still
    afford its extra permissions. Any witness set works, so the first in
    role-id order is taken. With alpha=2 the q range is empty and this
    never fires.
    """
    if leaf.infeasible:
        return [leaf]
    inst = leaf.inst
    plb = inst.plb_mask
    for q in range(1, params.alpha - 1):
        bound = threshold_b(q, inst.kr, params.beta)
        size = params.alpha - q
        # every member of a qualifying set individually exceeds the bound
        cands = [
            r for r in range(inst.n_roles)
            if (inst.role_perm_masks[r] & plb).bit_count() > bound
        ]
        if len(cands) < size:
            continue
        for combo in itertools.combinations(cands, size):
            shared = plb
            for rid in combo:
                shared &= inst.role_perm_masks[rid]
            if shared.bit_count() <= bound:
                continue
            labels = tuple(inst.role_labels[r] for r in combo)
            children = []
            for rid in combo:
                if (inst.role_perm_masks[rid] & ~plb).bit_count() <= inst.kp:
                    record = ("branch", q, labels, inst.role_labels[rid])
                    children.append(update_role(leaf, rid, _record=record))
            if not children:
                return [_mark_infeasible(
                    leaf, ("branch", q, labels), "no member can afford its extras")]
            return children
    return [leaf]


def _rule3_step(leaf: BranchLeaf, params: ClassParams) -> Optional[BranchLeaf]:
    inst = leaf.inst
    h = threshold_h(inst.kr, params.alpha, params.beta)
    for rid in range(inst.n_roles):
        if (inst.role_perm_masks[rid] & inst.plb_mask).bit_count() >= h:
            record = ("rule3", inst.role_labels[rid])
            extras = (inst.role_perm_masks[rid] & ~inst.plb_mask).bit_count()
            if extras > inst.kp:
                return _mark_infeasible(leaf, record, "extra-permission budget exhausted")
            return update_role(leaf, rid, _record=record)
    return None


def rule3(leaf: BranchLeaf, params: ClassParams) -> BranchLeaf:
    """Force any role covering threshold_h required permissions; earlier
    rules re-run after each change."""
    while True:
        leaf = rule2(leaf)
        if leaf.infeasible:
            return leaf
        nxt = _rule3_step(leaf, params)
        if nxt is None:
            return leaf
        leaf = nxt
        if leaf.infeasible:
            return leaf


def _rule4_step(leaf: BranchLeaf) -> Optional[BranchLeaf]:
    inst = leaf.inst
    dead = [
        r for r in range(inst.n_roles)
        if (inst.role_perm_masks[r] & ~inst.plb_mask).bit_count() > inst.kp
    ]
    if not dead:
        return None
    record = ("rule4", tuple(inst.role_labels[r] for r in dead))
    return _delete_roles(leaf, dead, drop_undersized=False, record=record)


def rule4(leaf: BranchLeaf) -> BranchLeaf:
    """Delete roles whose extra permissions alone overrun the budget.

    Plain deletion: thresholds stay, budgets stay. Constraints emptied
    below their threshold fall to the next rule1 pass.
    """
    if leaf.infeasible:
        return leaf
    nxt = _rule4_step(leaf)
    return leaf if nxt is None else nxt


def _gate(leaf: BranchLeaf, params: ClassParams) -> BranchLeaf:
    need = leaf.inst.plb_mask.bit_count()
    bound = kernel_bound(leaf.inst.kr, params.alpha, params.beta)
    if need > bound:
        return _mark_infeasible(
            leaf, ("kernel-gate", need, bound), "required set exceeds kernel bound")
    return leaf


def tree_document(tree: BranchTree) -> dict:
    """JSON-ready dump of a branch tree: root, every leaf's reduced
    instance, forced-role labels, and the rule trace that produced it."""
    from .instio import instance_document

    leaves = []
    for leaf in tree.leaves:
        leaves.append({
            "instance": instance_document(leaf.inst),
            "forced": sorted(tree.root.role_labels[r] for r in leaf.r1),
            "trace": [list(_jsonable(part) for part in rec) for rec in leaf.trace],
            "infeasible": leaf.infeasible,
            "reason": leaf.reason,
        })
    return {"root": instance_document(tree.root), "leaves": leaves}


def _jsonable(part):
    if isinstance(part, (tuple, frozenset)):
        return sorted(part) if isinstance(part, frozenset) else list(part)
    return part


def preprocess(inst: Instance, params: ClassParams) -> BranchTree:
    """Run the full rule cascade to a branch tree of irreducible leaves.

    Expects reduction0 output. Restart semantics: any change re-runs the
    cascade from rule1 on the changed leaf; branch children restart
    independently. Terminates because every change strictly shrinks
    roles plus constraint width plus required permissions.
    """
    leaves = []
    stack = [initial_leaf(inst)]
    while stack:
        leaf = stack.pop()
        leaf = rule2(leaf)  # rule1 + rule2 fixpoint
        if leaf.infeasible:
            leaves.append(leaf)
            continue
        children = branching_rule(leaf, params)
        if len(children) != 1 or children[0] is not leaf:
            stack.extend(reversed(children))
            continue
        nxt = _rule3_step(leaf, params)
        if nxt is not None:
            stack.append(nxt)
            continue
        nxt = _rule4_step(leaf)
        if nxt is not None:
            stack.append(nxt)
            continue
        leaves.append(_gate(leaf, params))
    return BranchTree(root=inst, leaves=tuple(leaves))
