"""Instance generators with decidable ground truth, plus graph checkers.

Three families translate bipartite-graph problems into access-control
instances whose satisfiability mirrors a graph property (domination or
a one-vertex-per-block biclique), so brute-force answers can be checked
against an independent exhaustive graph search. A fourth family emits
seeded random instances inside a declared class, optionally with a
planted solution.

Permission and role labels keep their graph provenance (vertex names,
block pair indices) to make failing cases readable.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .errors import GenerationError, InputError
from .model import Instance, Solution, make_instance, check_class, ClassParams, verify_solution

# -- graph types --------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteGraph:
    """Simple bipartite graph over string-labelled vertices."""

    a: tuple[str, ...]
    b: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        if len(set(self.a)) != len(self.a) or len(set(self.b)) != len(self.b):
            raise InputError("duplicate vertex label")
        if set(self.a) & set(self.b):
            raise InputError("vertex sides are not disjoint")
        for u, v in self.edges:
            if u not in self.a or v not in self.b:
                raise InputError(f"edge ({u}, {v}) leaves the vertex sides")

    def neighbors_of(self, u: str) -> frozenset[str]:
        return frozenset(v for (x, v) in self.edges if x == u)


@dataclass(frozen=True)
class BipartiteInstance:
    """Bipartite graph with both sides split into k nonempty blocks."""

    a_blocks: tuple[tuple[str, ...], ...]
    b_blocks: tuple[tuple[str, ...], ...]
    edges: frozenset[tuple[str, str]]
    k: int

    def __post_init__(self):
        if self.k < 1 or len(self.a_blocks) != self.k or len(self.b_blocks) != self.k:
            raise InputError("block count does not match k")
        seen: set[str] = set()
        for block in self.a_blocks + self.b_blocks:
            if not block:
                raise InputError("empty block")
            for v in block:
                if v in seen:
                    raise InputError(f"vertex {v} appears in two blocks")
                seen.add(v)
        avs = {v for block in self.a_blocks for v in block}
        bvs = {v for block in self.b_blocks for v in block}
        for u, v in self.edges:
            if u not in avs or v not in bvs:
                raise InputError(f"edge ({u}, {v}) leaves the blocks")

    @property
    def a_vertices(self) -> tuple[str, ...]:
        return tuple(v for block in self.a_blocks for v in block)

    @property
    def b_vertices(self) -> tuple[str, ...]:
        return tuple(v for block in self.b_blocks for v in block)


# -- exhaustive graph checkers ------------------------------------------------


def has_red_blue_dominating_set(g: BipartiteGraph, k: int) -> bool:
    """Does some set of at most k left vertices dominate every right vertex?"""
    if k < 0:
        raise InputError("k must be nonnegative")
    targets = set(g.b)
    if not targets:
        return True
    for size in range(min(k, len(g.a)) + 1):
        for combo in itertools.combinations(g.a, size):
            covered = set()
            for u in combo:
                covered |= g.neighbors_of(u)
            if targets <= covered:
                return True
    return False


def has_multicolored_biclique(g: BipartiteInstance) -> bool:
    """Does picking one vertex per block yield a complete cross pattern?"""
    for avs in itertools.product(*g.a_blocks):
        for bvs in itertools.product(*g.b_blocks):
            if all((u, v) in g.edges for u in avs for v in bvs):
                return True
    return False


# -- domination-based generators ----------------------------------------------


def gen_rbds_type1(g: BipartiteGraph, k: int) -> Instance:
    """Domination as permission coverage, role count free, extras paid.

    One role per left vertex; its private marker permission makes every
    selection cost one extra, so at most k vertices can be used.
    """
    if k < 0:
        raise InputError("k must be nonnegative")
    roles = list(g.a)
    perms = list(g.b) + [f"p_{v}" for v in g.a]
    rp = [(u, v) for (u, v) in g.edges] + [(v, f"p_{v}") for v in g.a]
    return make_instance(
        roles=roles,
        permissions=perms,
        rp=rp,
        plb=list(g.b),
        kr=len(roles),
        kp=k,
    )


def gen_rbds_type2(g: BipartiteGraph, k: int) -> Instance:
    """Domination as permission coverage with the role budget binding."""
    if k < 0:
        raise InputError("k must be nonnegative")
    return make_instance(
        roles=list(g.a),
        permissions=list(g.b),
        rp=[(u, v) for (u, v) in g.edges],
        plb=list(g.b),
        kr=k,
        kp=0,
    )


# -- biclique-based generators ------------------------------------------------


def gen_mcb_nosod(g: BipartiteInstance) -> Instance:
    """Biclique search as coverage: one role per edge, no constraints.

    Each edge role carries its two endpoints plus a block-pair marker.
    Covering all k*k markers with k*k roles while touching at most 2k
    vertices forces the chosen edges onto k+k fixed vertices, one per
    block, pairwise adjacent.
    """
    k = g.k
    block_of = {}
    for i, block in enumerate(g.a_blocks, start=1):
        for v in block:
            block_of[v] = i
    for j, block in enumerate(g.b_blocks, start=1):
        for v in block:
            block_of[v] = j
    markers = [f"p_{i}_{j}" for i in range(1, k + 1) for j in range(1, k + 1)]
    roles = []
    rp = []
    for u, v in sorted(g.edges):
        r = f"r_{u}_{v}"
        roles.append(r)
        rp.append((r, u))
        rp.append((r, v))
        rp.append((r, f"p_{block_of[u]}_{block_of[v]}"))
    perms = markers + list(g.a_vertices) + list(g.b_vertices)
    return make_instance(
        roles=roles,
        permissions=perms,
        rp=rp,
        plb=markers,
        kr=k * k,
        kp=2 * k,
    )


def gen_mcb_k22(g: BipartiteInstance) -> Instance:
    """Biclique search under separation constraints, zero extra budget.

    One role per vertex carrying its private permission and its block
    color; a hub role carries every private permission plus its own.
    Non-edges across the sides become width-2 constraints, so a
    selection covering all colors must pick pairwise-adjacent vertices.
    Constraints share roles, so these instances feed the brute-force
    engine and class-negative tests only.
    """
    k = g.k
    roles = [f"r_{v}" for v in g.a_vertices + g.b_vertices] + ["s"]
    colors = [f"c{i}" for i in range(1, 2 * k + 1)]
    privates = [f"p_{v}" for v in g.a_vertices + g.b_vertices]
    perms = privates + colors + ["q"]
    rp = []
    for i, block in enumerate(g.a_blocks, start=1):
        for v in block:
            rp.append((f"r_{v}", f"p_{v}"))
            rp.append((f"r_{v}", f"c{i}"))
    for j, block in enumerate(g.b_blocks, start=1):
        for v in block:
            rp.append((f"r_{v}", f"p_{v}"))
            rp.append((f"r_{v}", f"c{k + j}"))
    for p in privates:
        rp.append(("s", p))
    rp.append(("s", "q"))
    constraints = []
    for u in g.a_vertices:
        for v in g.b_vertices:
            if (u, v) not in g.edges:
                constraints.append(([f"r_{u}", f"r_{v}"], 2))
    return make_instance(
        roles=roles,
        permissions=perms,
        rp=rp,
        plb=perms,
        kr=2 * k + 1,
        kp=0,
        constraints=constraints,
    )


# -- random graphs ------------------------------------------------------------


def random_bipartite(na: int, nb: int, edge_prob: float, seed: int) -> BipartiteGraph:
    """Seeded per-pair-probability bipartite graph."""
    if na < 0 or nb < 0 or not 0.0 <= edge_prob <= 1.0:
        raise InputError("bad random-graph parameters")
    rng = random.Random(seed)
    a = tuple(f"a{i}" for i in range(1, na + 1))
    b = tuple(f"b{j}" for j in range(1, nb + 1))
    edges = frozenset((u, v) for u in a for v in b if rng.random() < edge_prob)
    return BipartiteGraph(a, b, edges)


def random_blocked(k: int, block_size: int, edge_prob: float, seed: int,
                   plant_biclique: bool = False) -> BipartiteInstance:
    """Seeded blocked bipartite graph, k blocks of block_size per side.

    plant_biclique wires the first vertex of every block to the first
    vertex of every opposite block, guaranteeing a one-per-block
    complete cross pattern.
    """
    if k < 1 or block_size < 1 or not 0.0 <= edge_prob <= 1.0:
        raise InputError("bad random-graph parameters")
    rng = random.Random(seed)
    a_blocks = tuple(
        tuple(f"a{i}_{t}" for t in range(1, block_size + 1))
        for i in range(1, k + 1))
    b_blocks = tuple(
        tuple(f"b{j}_{t}" for t in range(1, block_size + 1))
        for j in range(1, k + 1))
    edges = set()
    for ablock in a_blocks:
        for bblock in b_blocks:
            for u in ablock:
                for v in bblock:
                    if rng.random() < edge_prob:
                        edges.add((u, v))
    if plant_biclique:
        for ablock in a_blocks:
            for bblock in b_blocks:
                edges.add((ablock[0], bblock[0]))
    return BipartiteInstance(a_blocks, b_blocks, frozenset(edges), k)


def demo_blocked_graph() -> BipartiteInstance:
    """Fixed two-block worked example used across tests and docs.

    Contains the one-per-block complete cross pattern on a2, a3, b2, b3
    and eleven edges overall.
    """
    return BipartiteInstance(
        a_blocks=(("a1", "a2"), ("a3", "a4", "a5")),
        b_blocks=(("b1", "b2"), ("b3", "b4")),
        edges=frozenset([
            ("a1", "b1"), ("a1", "b2"), ("a1", "b4"),
            ("a2", "b2"), ("a2", "b3"),
            ("a3", "b2"), ("a3", "b3"),
            ("a4", "b1"), ("a4", "b4"),
            ("a5", "b1"), ("a5", "b4"),
        ]),
        k=2,
    )


# -- random in-class instances ------------------------------------------------


@dataclass(frozen=True)
class RandomSpec:
    """Knobs for the seeded random generator. c bounds constraint width."""

    n_roles: int
    n_perms: int
    plb_size: int
    max_role_degree: int
    alpha: int
    beta: int
    c: int
    n_constraints: int
    kr: int
    kp: int
    plant: bool = False
    seed: int = 0

    def __post_init__(self):
        if min(self.n_roles, self.n_perms, self.plb_size, self.max_role_degree) < 1:
            raise InputError("sizes must be positive")
        if self.plb_size > self.n_perms:
            raise InputError("plb_size exceeds n_perms")
        if self.alpha < 2 or self.beta < 2 or self.c < 1:
            raise InputError("class parameters out of range")
        if self.n_constraints < 0 or self.kr < 0 or self.kp < 0:
            raise InputError("budgets must be nonnegative")


_MAX_ATTEMPTS = 60


def gen_random(spec: RandomSpec) -> tuple[Instance, Optional[Solution]]:
    """Seeded random instance inside the (alpha, beta, c) class.

    plant=True additionally embeds a solution: kr roles partitioning the
    required set between them (so they never share a permission), with
    up to kp extras sprinkled on top, and constraints drawn so the
    planted roles stay under every threshold. The planted solution is
    returned alongside; without planting the second element is None.
    """
    last_problem = "no attempt made"
    for attempt in range(_MAX_ATTEMPTS):
        rng = random.Random(spec.seed * _MAX_ATTEMPTS + attempt)
        built = _try_random(spec, rng)
        if isinstance(built, str):
            last_problem = built
            continue
        return built
    raise GenerationError(
        f"no class-compliant instance after {_MAX_ATTEMPTS} attempts: {last_problem}")


def _try_random(spec: RandomSpec, rng: random.Random):
    roles = [f"r{i}" for i in range(spec.n_roles)]
    perms = [f"p{j}" for j in range(spec.n_perms)]
    plb = sorted(rng.sample(perms, spec.plb_size))
    plb_set = set(plb)
    masks: dict[str, set[str]] = {r: set() for r in roles}
    planted: list[str] = []
    if spec.plant:
        if spec.kr > spec.n_roles:
            return "kr exceeds n_roles, nothing to plant"
        if spec.kr * spec.max_role_degree < spec.plb_size:
            return "planted roles cannot carry the required set"
        if spec.n_constraints > spec.n_roles - spec.kr:
            # disjoint constraints each need a role outside the plant
            return "not enough unplanted roles for disjoint constraints"
        if spec.kr == 0:
            if spec.plb_size:
                return "kr=0 cannot cover a nonempty required set"
            planted = []
        else:
            planted = rng.sample(roles, spec.kr)
            shuffled = plb[:]
            rng.shuffle(shuffled)
            for idx, p in enumerate(shuffled):
                masks[planted[idx % spec.kr]].add(p)
            for idx, r in enumerate(planted):
                if not masks[r]:
                    # more planted roles than required permissions: spares
                    # re-cover one permission each, sharing at most one
                    masks[r].add(shuffled[idx % len(shuffled)])
            if any(len(masks[r]) > spec.max_role_degree for r in planted):
                # round-robin keeps shares within one of each other, so
                # this only fires when the degree bound is truly tight
                return "degree bound too tight for the required set"
            spare = [p for p in perms if p not in plb_set]
            rng.shuffle(spare)
            n_extras = rng.randint(0, min(spec.kp, len(spare)))
            for p in spare[:n_extras]:
                r = rng.choice(planted)
                if len(masks[r]) < spec.max_role_degree:
                    masks[r].add(p)
    for r in roles:
        if r in masks and masks[r]:
            continue
        degree = rng.randint(1, spec.max_role_degree)
        masks[r] = set(rng.sample(perms, min(degree, spec.n_perms)))
    if not _repair_sharing(spec, rng, roles, perms, masks, set(planted)):
        return "could not repair shared-permission violations"
    constraints = _draw_constraints(spec, rng, roles, masks, set(planted))
    if isinstance(constraints, str):
        return constraints
    inst = make_instance(
        roles=roles,
        permissions=perms,
        rp=[(r, p) for r in roles for p in sorted(masks[r])],
        plb=plb,
        kr=spec.kr,
        kp=spec.kp,
        constraints=constraints,
    )
    params = ClassParams(alpha=spec.alpha, beta=spec.beta, max_width=spec.c)
    if not check_class(inst, params).ok:
        return "class check failed after repair"
    if not spec.plant:
        return inst, None
    solution = Solution(inst.role_ids(planted))
    if not verify_solution(inst, solution).ok:
        return "planted solution failed verification"
    return inst, solution


def _repair_sharing(spec: RandomSpec, rng: random.Random, roles, perms,
                    masks: dict[str, set[str]], protected: set[str]) -> bool:
    """Break every alpha-role beta-permission overlap by shrinking the
    grant of some unprotected member; protected (planted) roles are
    never touched and never overlap each other by construction."""
    for _ in range(200):
        violation = None
        for combo in itertools.combinations(roles, spec.alpha):
            shared = set.intersection(*(masks[r] for r in combo))
            if len(shared) >= spec.beta:
                violation = (combo, shared)
                break
        if violation is None:
            return True
        combo, shared = violation
        editable = [r for r in combo if r not in protected]
        if not editable:
            return False
        victim = rng.choice(editable)
        drop = rng.choice(sorted(shared))
        masks[victim].discard(drop)
        if not masks[victim]:
            fresh = rng.choice(perms)
            masks[victim].add(fresh)
    return False


def _draw_constraints(spec: RandomSpec, rng: random.Random, roles,
                      masks, planted: set[str]):
    """Pairwise-disjoint constraints of width at most c; with planting,
    each drawn threshold strictly exceeds its planted membership."""
    if spec.n_constraints == 0:
        return []
    pool = roles[:]
    rng.shuffle(pool)
    out = []
    attempts = 0
    while len(out) < spec.n_constraints:
        attempts += 1
        if attempts > 50 + 10 * spec.n_constraints:
            return "could not draw constraints compatible with the plant"
        width = rng.randint(1, spec.c)
        if len(pool) < width:
            return "role pool too small for disjoint constraints"
        xs = [pool.pop() for _ in range(width)]
        inside = sum(1 for r in xs if r in planted)
        if inside >= width:
            # fully planted: no threshold up to the width could hold
            pool.extend(xs)
            rng.shuffle(pool)
            continue
        t = rng.randint(inside + 1, width)
        out.append((xs, t))
    return out
