"""Shared builders for randomized tests.

Everything takes an explicit random.Random so individual tests pin their
own seeds and stay reproducible in isolation.
"""

from __future__ import annotations

import itertools
import random

from uaqsuite.model import Instance, make_instance
from uaqsuite.generators import BipartiteInstance


def random_compliant(rng: random.Random, alpha: int = 2, beta: int = 2,
                     max_width: int = 3, max_roles: int = 8,
                     max_perms: int = 10) -> Instance:
    """Random instance obeying the (alpha, beta, max_width) class.

    Role grants are drawn and redrawn until no pair shares beta
    permissions (alpha=2) or no alpha-tuple does (checked directly for
    the sizes used here); constraints come from a disjoint role pool.
    """
    n_r = rng.randint(1, max_roles)
    n_p = rng.randint(2, max_perms)
    masks: list[int] = []
    for _ in range(n_r):
        for _attempt in range(50):
            size = rng.randint(1, 3)
            mask = 0
            for b in rng.sample(range(n_p), min(size, n_p)):
                mask |= 1 << b
            tuples = itertools.combinations(masks + [mask], alpha)
            ok = True
            for combo in tuples:
                if mask not in combo:
                    continue
                shared = combo[0]
                for m in combo[1:]:
                    shared &= m
                if shared.bit_count() >= beta:
                    ok = False
                    break
            if ok:
                break
        masks.append(mask)
    roles = [f"r{i}" for i in range(n_r)]
    perms = [f"p{i}" for i in range(n_p)]
    rp = [(roles[i], perms[b]) for i in range(n_r) for b in range(n_p)
          if (masks[i] >> b) & 1]
    granted = sorted({p for _, p in rp})
    plb = [p for p in granted if rng.random() < 0.6] or [granted[0]]
    cons = []
    pool = list(range(n_r))
    rng.shuffle(pool)
    for _ in range(rng.randint(0, 2)):
        width = rng.randint(1, max_width)
        if len(pool) < width:
            break
        xs = [roles[pool.pop()] for _ in range(width)]
        cons.append((xs, rng.randint(1, width)))
    return make_instance(
        roles=roles, permissions=perms, rp=rp, plb=plb,
        kr=rng.randint(1, 4), kp=rng.randint(0, 3), constraints=cons)


def all_two_block_graphs(max_per_block: int):
    """Every blocked bipartite graph with k=2 and bounded block sizes."""
    for s1, s2, t1, t2 in itertools.product(
            range(1, max_per_block + 1), repeat=4):
        a1 = tuple(f"a1_{i}" for i in range(s1))
        a2 = tuple(f"a2_{i}" for i in range(s2))
        b1 = tuple(f"b1_{i}" for i in range(t1))
        b2 = tuple(f"b2_{i}" for i in range(t2))
        pairs = [(u, v) for u in a1 + a2 for v in b1 + b2]
        for bitsel in range(1 << len(pairs)):
            edges = frozenset(
                p for i, p in enumerate(pairs) if (bitsel >> i) & 1)
            yield BipartiteInstance((a1, a2), (b1, b2), edges, 2)


def random_two_block_graph(rng: random.Random, max_per_block: int,
                           plant: bool = False) -> BipartiteInstance:
    """Random k=2 blocked graph with independent per-pair edges."""
    sizes = [rng.randint(1, max_per_block) for _ in range(4)]
    a1 = tuple(f"a1_{i}" for i in range(sizes[0]))
    a2 = tuple(f"a2_{i}" for i in range(sizes[1]))
    b1 = tuple(f"b1_{i}" for i in range(sizes[2]))
    b2 = tuple(f"b2_{i}" for i in range(sizes[3]))
    prob = rng.uniform(0.15, 0.85)
    edges = {(u, v) for u in a1 + a2 for v in b1 + b2
             if rng.random() < prob}
    if plant:
        for block_a in (a1, a2):
            for block_b in (b1, b2):
                edges.add((block_a[0], block_b[0]))
    return BipartiteInstance((a1, a2), (b1, b2), frozenset(edges), 2)
