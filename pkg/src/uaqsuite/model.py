"""Core domain model for user authorization queries over RBAC configurations.

An instance couples roles, permissions, a role-permission assignment, a
required permission set (lower bound), an allowed permission set (upper
bound), separation-of-duty constraints, and the two solution budgets: the
maximum number of roles and the maximum number of permissions granted
beyond the lower bound.

Roles and permissions are interned to dense integer ids at construction
time, and every set on a hot path is an integer bitmask over those ids.
Labels exist for documents and diagnostics only; all solver code speaks
ids and masks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InputError


class Role(NamedTuple):
    id: int
    label: str


class Permission(NamedTuple):
    id: int
    label: str


def bits(mask: int):
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class SodConstraint:
    """Separation-of-duty constraint: fewer than `t` of `roles` may be used."""

    roles: frozenset[int]
    t: int

    @property
    def mask(self) -> int:
        return mask_of(self.roles)


@dataclass(frozen=True)
class Solution:
    roles: frozenset[int]


@dataclass(frozen=True)
class Instance:
    role_labels: tuple[str, ...]
    perm_labels: tuple[str, ...]
    role_perm_masks: tuple[int, ...]
    plb_mask: int
    pub_mask: int
    constraints: tuple[SodConstraint, ...]
    kr: int
    kp: int
    _role_index: dict = field(default_factory=dict, repr=False, compare=False)
    _perm_index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        nr, np_ = len(self.role_labels), len(self.perm_labels)
        if len(self.role_perm_masks) != nr:
            raise InputError("role mask count does not match role count")
        if len(set(self.role_labels)) != nr:
            raise InputError("duplicate role label")
        if len(set(self.perm_labels)) != np_:
            raise InputError("duplicate permission label")
        full = (1 << np_) - 1
        for lbl, m in zip(self.role_labels, self.role_perm_masks):
            if m & ~full:
                raise InputError(f"role {lbl!r} assigned an out-of-range permission id")
        if self.plb_mask & ~full or self.pub_mask & ~full:
            raise InputError("permission bound references out-of-range permission id")
        if self.plb_mask & ~self.pub_mask:
            raise InputError("required permissions must lie inside the allowed set")
        for con in self.constraints:
            if con.t < 1:
                raise InputError("constraint threshold must be at least 1")
            for rid in con.roles:
                if not 0 <= rid < nr:
                    raise InputError(f"constraint references unknown role id {rid}")
        if self.kr < 0 or self.kp < 0:
            raise InputError("budgets must be non-negative")
        self._role_index.update({lbl: i for i, lbl in enumerate(self.role_labels)})
        self._perm_index.update({lbl: i for i, lbl in enumerate(self.perm_labels)})

    # -- views ------------------------------------------------------------

    @property
    def n_roles(self) -> int:
        return len(self.role_labels)

    @property
    def n_perms(self) -> int:
        return len(self.perm_labels)

    @property
    def roles(self) -> tuple[Role, ...]:
        return tuple(Role(i, lbl) for i, lbl in enumerate(self.role_labels))

    @property
    def permissions(self) -> tuple[Permission, ...]:
        return tuple(Permission(i, lbl) for i, lbl in enumerate(self.perm_labels))

    @property
    def rp(self) -> tuple[tuple[int, int], ...]:
        pairs = []
        for rid, m in enumerate(self.role_perm_masks):
            pairs.extend((rid, pid) for pid in bits(m))
        return tuple(pairs)

    @property
    def all_perms_mask(self) -> int:
        return (1 << self.n_perms) - 1

    # -- id/label resolution ----------------------------------------------

    def role_id(self, label: str) -> int:
        try:
            return self._role_index[label]
        except KeyError:
            raise InputError(f"unknown role {label!r}") from None

    def perm_id(self, label: str) -> int:
        try:
            return self._perm_index[label]
        except KeyError:
            raise InputError(f"unknown permission {label!r}") from None

    def role_ids(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.role_id(x) for x in labels)

    def perm_ids(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.perm_id(x) for x in labels)

    def role_label_set(self, ids: Iterable[int]) -> frozenset[str]:
        return frozenset(self.role_labels[i] for i in ids)

    def perm_label_set(self, ids: Iterable[int]) -> frozenset[str]:
        return frozenset(self.perm_labels[i] for i in ids)

    def check_role_ids(self, rs: Iterable[int]) -> frozenset[int]:
        out = frozenset(rs)
        for rid in out:
            if not 0 <= rid < self.n_roles:
                raise InputError(f"unknown role id {rid}")
        return out

    def perms_mask(self, rs: Iterable[int]) -> int:
        """Union bitmask of the permissions assigned to the given role ids."""
        m = 0
        for rid in self.check_role_ids(rs):
            m |= self.role_perm_masks[rid]
        return m


def make_instance(
    roles: Sequence[str],
    permissions: Sequence[str],
    rp: Iterable[tuple[str, str]],
    plb: Iterable[str],
    kr: int,
    kp: int,
    pub: Optional[Iterable[str]] = None,
    constraints: Iterable[tuple[Iterable[str], int]] = (),
) -> Instance:
    """Build an Instance from labels.

    `pub=None` means every permission is allowed. Raises InputError on the
    first unknown identifier or duplicate label encountered.
    """
    role_index = {}
    for lbl in roles:
        if lbl in role_index:
            raise InputError(f"duplicate role {lbl!r}")
        role_index[lbl] = len(role_index)
    perm_index = {}
    for lbl in permissions:
        if lbl in perm_index:
            raise InputError(f"duplicate permission {lbl!r}")
        perm_index[lbl] = len(perm_index)

    def rid(lbl):
        if lbl not in role_index:
            raise InputError(f"unknown role {lbl!r}")
        return role_index[lbl]

    def pid(lbl):
        if lbl not in perm_index:
            raise InputError(f"unknown permission {lbl!r}")
        return perm_index[lbl]

    masks = [0] * len(role_index)
    for r, p in rp:
        masks[rid(r)] |= 1 << pid(p)
    plb_mask = mask_of(pid(x) for x in plb)
    if pub is None:
        pub_mask = (1 << len(perm_index)) - 1
    else:
        pub_mask = mask_of(pid(x) for x in pub)
    cons = []
    for xs, t in constraints:
        seen = set()
        for x in xs:
            i = rid(x)
            if i in seen:
                raise InputError(f"role {x!r} repeated inside one constraint")
            seen.add(i)
        cons.append(SodConstraint(frozenset(seen), t))
    return Instance(
        role_labels=tuple(roles),
        perm_labels=tuple(permissions),
        role_perm_masks=tuple(masks),
        plb_mask=plb_mask,
        pub_mask=pub_mask,
        constraints=tuple(cons),
        kr=kr,
        kp=kp,
    )


# -- operations ---------------------------------------------------------------


def permissions_of(inst: Instance, rs: Iterable[int]) -> frozenset[int]:
    """Permission ids granted by the union of the given roles."""
    return frozenset(bits(inst.perms_mask(rs)))


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str

    def __str__(self):
        return f"{self.kind}: {self.subject}"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[Violation, ...]


def verify_solution(inst: Instance, sol) -> Verdict:
    """Check every solution clause; list one violation per failed item.

    Accepts a Solution or any iterable of role ids.
    """
    roles = sol.roles if isinstance(sol, Solution) else frozenset(sol)
    roles = inst.check_role_ids(roles)
    granted = 0
    for rid in roles:
        granted |= inst.role_perm_masks[rid]
    out = []
    if len(roles) > inst.kr:
        out.append(Violation("role-budget", f"{len(roles)} roles exceed limit {inst.kr}"))
    for pid in bits(inst.plb_mask & ~granted):
        out.append(Violation("missing-permission", inst.perm_labels[pid]))
    for pid in bits(granted & ~inst.pub_mask):
        out.append(Violation("forbidden-permission", inst.perm_labels[pid]))
    extra = (granted & ~inst.plb_mask).bit_count()
    if extra > inst.kp:
        out.append(Violation("extra-budget", f"{extra} extra permissions exceed limit {inst.kp}"))
    rmask = mask_of(roles)
    for con in inst.constraints:
        if (rmask & con.mask).bit_count() >= con.t:
            labels = ",".join(sorted(inst.role_labels[i] for i in con.roles))
            out.append(Violation("sod", f"{{{labels}}} threshold {con.t}"))
    return Verdict(not out, tuple(out))


@dataclass(frozen=True)
class ClassParams:
    alpha: int
    beta: int
    max_width: int

    def __post_init__(self):
        if self.alpha < 2 or self.beta < 2 or self.max_width < 1:
            raise InputError("class parameters require alpha>=2, beta>=2, max_width>=1")


@dataclass(frozen=True)
class ClassReport:
    kab_free: bool
    widths_ok: bool
    disjoint_ok: bool
    witnesses: tuple

    @property
    def ok(self) -> bool:
        return self.kab_free and self.widths_ok and self.disjoint_ok


def check_class(inst: Instance, params: ClassParams) -> ClassReport:
    """Test the three structural conditions the branching solver relies on.

    Fails carry a witness each: an offending role tuple, an oversized
    constraint, or an overlapping constraint pair.
    """
    witnesses = []
    kab_free = True
    # only roles holding >= beta permissions can participate in a violation
    rich = [r for r in range(inst.n_roles)
            if inst.role_perm_masks[r].bit_count() >= params.beta]
    for combo in itertools.combinations(rich, params.alpha):
        shared = inst.all_perms_mask
        for rid in combo:
            shared &= inst.role_perm_masks[rid]
            if shared.bit_count() < params.beta:
                break
        if shared.bit_count() >= params.beta:
            kab_free = False
            witnesses.append(("shared-permissions", inst.role_label_set(combo)))
            break
    widths_ok = True
    for con in inst.constraints:
        if len(con.roles) > params.max_width:
            widths_ok = False
            witnesses.append(("constraint-width", inst.role_label_set(con.roles)))
            break
    disjoint_ok = True
    for a, b in itertools.combinations(inst.constraints, 2):
        if a.roles & b.roles:
            disjoint_ok = False
            witnesses.append(("constraint-overlap", inst.role_label_set(a.roles & b.roles)))
            break
    return ClassReport(kab_free, widths_ok, disjoint_ok, tuple(witnesses))


@dataclass(frozen=True)
class InstanceStats:
    n_roles: int
    n_perms: int
    n_constraints: int
    k_hat: int
    r_hat: int


def stats(inst: Instance) -> InstanceStats:
    """Size measures: k_hat counts permissions outside the required set,
    r_hat counts roles granting at least one such permission."""
    extra = inst.all_perms_mask & ~inst.plb_mask
    r_hat = sum(1 for m in inst.role_perm_masks if m & ~inst.plb_mask)
    return InstanceStats(
        n_roles=inst.n_roles,
        n_perms=inst.n_perms,
        n_constraints=len(inst.constraints),
        k_hat=extra.bit_count(),
        r_hat=r_hat,
    )


def with_unbounded_kr(inst: Instance) -> Instance:
    """Copy of the instance whose role budget never binds (kr = |roles|)."""
    if inst.kr == inst.n_roles:
        return inst
    return Instance(
        role_labels=inst.role_labels,
        perm_labels=inst.perm_labels,
        role_perm_masks=inst.role_perm_masks,
        plb_mask=inst.plb_mask,
        pub_mask=inst.pub_mask,
        constraints=inst.constraints,
        kr=inst.n_roles,
        kp=inst.kp,
    )
