"""Representative-family dynamic program over preprocessed leaves.

Per leaf, the solver guesses the extra-permission set Y, then grows
role sets level by level: a table cell holds the role sets of size i
whose required coverage is exactly W and whose extras fit inside Y,
pruned to a representative family in the leaf's separation matroid.
Pruning keeps enough sets that some completion to a full solution
always survives, so the first set reaching full coverage is final.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import ClassViolationError, InputError, InternalError
from .instio import SolutionDocument
from .matroid import build_csm, is_independent
from .model import (
    ClassParams,
    Instance,
    Solution,
    bits,
    check_class,
    verify_solution,
)
from .reduce import BranchLeaf, preprocess, reduction0
from .repfam import Family, RepConfig, compute_repfam


@dataclass(frozen=True)
class LeafResult:
    """Outcome for one leaf: role ids local to the leaf, or None."""

    roles: Optional[frozenset[int]]
    table_cells: int


def solve_leaf(leaf: BranchLeaf, cfg: Optional[RepConfig] = None) -> LeafResult:
    """Find a role set completing the leaf, or report none exists.

    Extra sets Y are tried smallest first; within one Y the table fills
    with i ascending, so the first full-coverage family yields the
    answer. Cells are pruned with q = remaining role budget (capped by
    the matroid rank in truncated mode, since larger sets are dependent
    anyway).
    """
    if leaf.infeasible:
        return LeafResult(None, 0)
    inst = leaf.inst
    plb = inst.plb_mask
    if plb == 0:
        return LeafResult(frozenset(), 0)
    if inst.kr == 0 or inst.n_roles == 0:
        return LeafResult(None, 0)
    cfg = cfg if cfg is not None else RepConfig()
    m = build_csm(leaf)
    pr_plb = [mask & plb for mask in inst.role_perm_masks]
    pr_ext = [mask & ~plb for mask in inst.role_perm_masks]
    extras_universe = 0
    for mask in pr_ext:
        extras_universe |= mask
    ebits = list(bits(extras_universe))
    kr_eff = min(inst.kr, inst.n_roles)
    cells = 0
    cache: dict = {}
    for ysize in range(min(inst.kp, len(ebits)) + 1):
        for ycombo in itertools.combinations(ebits, ysize):
            y = 0
            for b in ycombo:
                y |= 1 << b
            elig = [r for r in range(inst.n_roles) if not pr_ext[r] & ~y]
            if not elig:
                continue
            level: dict[int, Family] = {0: Family.from_sets([()], 0)}
            cells += 1
            for i in range(1, kr_eff + 1):
                grown: dict[int, list] = {}
                seen: dict[int, set] = {}
                for w in sorted(level):
                    for a in level[w].sets:
                        held = set(a)
                        for r in elig:
                            if r in held:
                                continue
                            cand = tuple(sorted(held | {r}))
                            wn = w | pr_plb[r]
                            bucket = seen.setdefault(wn, set())
                            if cand in bucket:
                                continue
                            if not is_independent(m, cand):
                                continue
                            bucket.add(cand)
                            grown.setdefault(wn, []).append(cand)
                if not grown:
                    break
                q = kr_eff - i
                if cfg.mode == "truncated":
                    q = min(q, max(m.rank - i, 0))
                level = {}
                answer = None
                for wn in sorted(grown):
                    fam = compute_repfam(
                        m, Family.from_sets(grown[wn], i), q, cfg,
                        wedge_cache=cache)
                    level[wn] = fam
                    cells += 1
                    if wn == plb and fam.sets:
                        answer = frozenset(fam.sets[0])
                        break
                if answer is not None:
                    return LeafResult(answer, cells)
    return LeafResult(None, cells)


def _leaf_job(args):
    leaf, cfg = args
    return solve_leaf(leaf, cfg)


def solve(
    inst: Instance,
    params: ClassParams,
    cfg: Optional[RepConfig] = None,
    threads: int = 1,
) -> tuple[SolutionDocument, Optional[Solution]]:
    """Full pipeline: class gate, preprocessing, per-leaf table search.

    Raises ClassViolationError when the instance falls outside the
    declared class. The returned solution is verified against the
    original instance before anything is reported; a failure there is an
    internal invariant break, never a quiet wrong answer.

    threads > 1 evaluates leaves in worker processes. All leaves run to
    completion in that mode, so the verdict and cell totals stay
    deterministic; single-threaded mode stops at the first satisfied
    leaf.
    """
    if threads < 1:
        raise InputError("threads must be positive")
    started = time.perf_counter()
    report = check_class(inst, params)
    if not report.ok:
        raise ClassViolationError(
            "instance outside the declared class", witnesses=report.witnesses)
    reduced = reduction0(inst)
    tree = preprocess(reduced, params)
    total_cells = 0
    chosen: Optional[frozenset[str]] = None
    if threads == 1:
        for leaf in tree.leaves:
            result = solve_leaf(leaf, cfg)
            total_cells += result.table_cells
            if result.roles is not None:
                chosen = _labels_for(reduced, leaf, result.roles)
                break
    else:
        live = [leaf for leaf in tree.leaves if not leaf.infeasible]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_leaf_job, [(leaf, cfg) for leaf in live]))
        for leaf, result in zip(live, results):
            total_cells += result.table_cells
            if result.roles is not None and chosen is None:
                chosen = _labels_for(reduced, leaf, result.roles)
    wall_ms = (time.perf_counter() - started) * 1000.0
    if chosen is None:
        doc = SolutionDocument(
            status="unsat", roles=None, engine="fpt", wall_ms=wall_ms,
            leaves=len(tree.leaves), table_cells=total_cells)
        return doc, None
    solution = Solution(inst.role_ids(chosen))
    verdict = verify_solution(inst, solution)
    if not verdict.ok:
        raise InternalError(
            f"solver produced an invalid solution: {verdict.violations}")
    doc = SolutionDocument(
        status="sat", roles=chosen, engine="fpt", wall_ms=wall_ms,
        leaves=len(tree.leaves), table_cells=total_cells)
    return doc, solution


def _labels_for(reduced: Instance, leaf: BranchLeaf,
                r2: frozenset[int]) -> frozenset[str]:
    """Forced roles carry ids of the preprocessed root; table roles carry
    leaf-local ids. Labels are stable through both, so the union maps
    back to the caller's instance by name."""
    forced = {reduced.role_labels[r] for r in leaf.r1}
    local = {leaf.inst.role_labels[r] for r in r2}
    return frozenset(forced | local)
