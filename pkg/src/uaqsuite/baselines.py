"""Reference solvers: exhaustive search and the unconstrained special case.

Both are slow by design. They exist to cross-check the main solver on
small instances and to give benchmarks an honest floor.
"""

from __future__ import annotations

import itertools
from typing import Optional

from . import gf
from .errors import InputError, ScaleLimitError
from .model import Instance, Solution

DEFAULT_SUBSET_CAP = 2_000_000


def brute_force(inst: Instance,
                max_subsets: int = DEFAULT_SUBSET_CAP) -> Optional[Solution]:
    """Try every role subset in size-then-lexicographic order.

    Returns the first subset satisfying all four solution clauses, or
    None when the whole space is exhausted. Raises ScaleLimitError once
    max_subsets candidates have been examined without finishing, so a
    mistyped large instance fails fast instead of burning hours.
    """
    if max_subsets < 1:
        raise InputError("max_subsets must be positive")
    cons_masks = [c.mask for c in inst.constraints]
    cons_caps = [c.t - 1 for c in inst.constraints]
    combo, count, capped = gf.find_solution(
        list(inst.role_perm_masks),
        inst.plb_mask,
        inst.pub_mask,
        inst.kp,
        min(inst.kr, inst.n_roles),
        cons_masks,
        cons_caps,
        max_subsets,
    )
    if capped:
        raise ScaleLimitError(
            f"brute force stopped after {count} subsets (cap {max_subsets})")
    if combo is None:
        return None
    return Solution(frozenset(combo))


def type1_solver(inst: Instance, stats_out: Optional[dict] = None) -> Optional[Solution]:
    """Solve the unconstrained, unbounded-role special case.

    Applies only when there are no separation constraints, the role
    budget cannot bind, and every permission is allowed; raises
    InputError naming the violated condition otherwise.

    Roles granting nothing outside the required set are free, so all of
    them are taken. The search runs over subsets of the remaining roles
    only, size-then-lex, and accepts the first whose combined grant
    covers the required set within the extra budget. The returned
    solution is that subset plus every free role, verbatim.
    """
    if inst.constraints:
        raise InputError("type1 solver requires an instance with no constraints")
    if inst.kr < inst.n_roles:
        raise InputError("type1 solver requires kr >= number of roles")
    if inst.pub_mask != inst.all_perms_mask:
        raise InputError("type1 solver requires every permission to be allowed")
    plb = inst.plb_mask
    r1 = [r for r in range(inst.n_roles)
          if not inst.role_perm_masks[r] & ~plb]
    r2 = [r for r in range(inst.n_roles)
          if inst.role_perm_masks[r] & ~plb]
    base = 0
    for r in r1:
        base |= inst.role_perm_masks[r]
    budget = inst.kp + plb.bit_count()
    examined = 0
    found = None
    for size in range(len(r2) + 1):
        for combo in itertools.combinations(r2, size):
            examined += 1
            granted = base
            for r in combo:
                granted |= inst.role_perm_masks[r]
            if plb & ~granted:
                continue
            if granted.bit_count() > budget:
                continue
            found = Solution(frozenset(r1) | set(combo))
            break
        if found is not None:
            break
    if stats_out is not None:
        stats_out["subsets_examined"] = examined
    return found
