"""Hardness-construction generators and the seeded random family."""

import itertools
import random

import pytest

from uaqsuite.baselines import brute_force
from uaqsuite.errors import GenerationError, InputError
from uaqsuite.generators import (
    BipartiteGraph,
    BipartiteInstance,
    RandomSpec,
    demo_blocked_graph,
    gen_mcb_k22,
    gen_mcb_nosod,
    gen_random,
    gen_rbds_type1,
    gen_rbds_type2,
    has_multicolored_biclique,
    has_red_blue_dominating_set,
    random_bipartite,
    random_blocked,
)
from uaqsuite.instio import serialize_instance
from uaqsuite.model import ClassParams, check_class, verify_solution


# -- graph containers ---------------------------------------------------------


def test_bipartite_graph_validation():
    with pytest.raises(InputError):
        BipartiteGraph(("a", "a"), ("b",), frozenset())
    with pytest.raises(InputError):
        BipartiteGraph(("a",), ("a",), frozenset())
    with pytest.raises(InputError):
        BipartiteGraph(("a",), ("b",), frozenset([("a", "z")]))
    g = BipartiteGraph(("a",), ("b", "c"), frozenset([("a", "b")]))
    assert g.neighbors_of("a") == {"b"}
    assert g.neighbors_of("zzz") == frozenset()


def test_blocked_graph_validation():
    with pytest.raises(InputError):
        BipartiteInstance((("a",),), (("b",), ("c",)), frozenset(), 2)
    with pytest.raises(InputError):
        BipartiteInstance((("a",), ()), (("b",), ("c",)), frozenset(), 2)
    with pytest.raises(InputError):
        BipartiteInstance((("a",), ("a",)), (("b",), ("c",)), frozenset(), 2)
    with pytest.raises(InputError):
        BipartiteInstance((("a",),), (("b",),), frozenset([("b", "a")]), 1)
    g = BipartiteInstance((("a1",), ("a2",)), (("b1",), ("b2",)), frozenset(), 2)
    assert g.a_vertices == ("a1", "a2")
    assert g.b_vertices == ("b1", "b2")


# -- exhaustive checkers ------------------------------------------------------


def test_domination_checker_edge_cases():
    empty_b = BipartiteGraph(("a1",), (), frozenset())
    assert has_red_blue_dominating_set(empty_b, 0)
    star = BipartiteGraph(
        ("hub", "lone"), ("b1", "b2", "b3"),
        frozenset([("hub", "b1"), ("hub", "b2"), ("hub", "b3")]))
    assert has_red_blue_dominating_set(star, 1)
    assert not has_red_blue_dominating_set(star, 0)
    bare = BipartiteGraph(("a1",), ("b1",), frozenset())
    assert not has_red_blue_dominating_set(bare, 5)
    with pytest.raises(InputError):
        has_red_blue_dominating_set(star, -1)


def test_biclique_checker_edge_cases():
    complete = random_blocked(2, 1, 1.0, seed=0)
    assert has_multicolored_biclique(complete)
    bare = BipartiteInstance((("a1",),), (("b1",),), frozenset(), 1)
    assert not has_multicolored_biclique(bare)
    assert has_multicolored_biclique(demo_blocked_graph())


# -- domination generators ----------------------------------------------------


def test_rbds_type1_shape():
    g = random_bipartite(3, 3, 0.5, seed=1)
    inst = gen_rbds_type1(g, 2)
    assert inst.kr == len(g.a)
    assert inst.kp == 2
    assert inst.constraints == ()
    # each role carries its private marker
    for u in g.a:
        rid = inst.role_id(u)
        assert (inst.role_perm_masks[rid] >> inst.perm_id(f"p_{u}")) & 1


def test_rbds_type2_shape():
    g = random_bipartite(3, 3, 0.5, seed=2)
    inst = gen_rbds_type2(g, 2)
    assert inst.kr == 2 and inst.kp == 0
    assert inst.perm_labels == g.b


@pytest.mark.parametrize("gen", [gen_rbds_type1, gen_rbds_type2])
def test_rbds_generators_track_domination(gen):
    rng = random.Random(ord("d") if gen is gen_rbds_type1 else ord("D"))
    both = set()
    for _trial in range(40):
        g = random_bipartite(rng.randint(1, 5), rng.randint(1, 4),
                             rng.random(), seed=rng.randrange(10**6))
        k = rng.randint(0, 3)
        want = has_red_blue_dominating_set(g, k)
        got = brute_force(gen(g, k)) is not None
        assert got == want
        both.add(want)
    assert both == {True, False}


# -- biclique generators ------------------------------------------------------


def test_nosod_shape_invariants():
    for seed in range(6):
        g = random_blocked(2, 2, 0.6, seed=seed)
        inst = gen_mcb_nosod(g)
        assert inst.kr == 4 and inst.kp == 4
        assert inst.constraints == ()
        assert inst.plb_mask.bit_count() == 4
        marker_ids = {inst.perm_id(f"p_{i}_{j}")
                      for i in (1, 2) for j in (1, 2)}
        for mask in inst.role_perm_masks:
            assert mask.bit_count() == 3
            assert sum((mask >> p) & 1 for p in marker_ids) == 1
        for ma, mb in itertools.combinations(inst.role_perm_masks, 2):
            assert (ma & mb).bit_count() <= 2
        assert check_class(inst, ClassParams(2, 3, 3)).ok


def test_nosod_tracks_biclique_search():
    rng = random.Random(303)
    both = set()
    for _trial in range(25):
        g = random_blocked(2, 2, rng.random(), seed=rng.randrange(10**6),
                           plant_biclique=rng.random() < 0.3)
        want = has_multicolored_biclique(g)
        inst = gen_mcb_nosod(g)
        got = brute_force(inst)
        assert (got is not None) == want
        both.add(want)
    assert both == {True, False}


def test_nosod_demo_solution_verifies():
    inst = gen_mcb_nosod(demo_blocked_graph())
    from uaqsuite.model import Solution

    sol = Solution(inst.role_ids(
        ["r_a2_b2", "r_a2_b3", "r_a3_b2", "r_a3_b3"]))
    verdict = verify_solution(inst, sol)
    assert verdict.ok, verdict.violations


def test_k22_shape_and_pair_sharing():
    g = demo_blocked_graph()
    inst = gen_mcb_k22(g)
    assert inst.kr == 5 and inst.kp == 0
    assert inst.plb_mask == inst.all_perms_mask
    hub = inst.role_id("s")
    for v in g.a_vertices + g.b_vertices:
        assert (inst.role_perm_masks[hub] >> inst.perm_id(f"p_{v}")) & 1
    assert (inst.role_perm_masks[hub] >> inst.perm_id("q")) & 1
    # constraints are exactly the cross non-edges
    non_edges = [(u, v) for u in g.a_vertices for v in g.b_vertices
                 if (u, v) not in g.edges]
    assert len(inst.constraints) == len(non_edges)
    assert all(c.t == 2 and len(c.roles) == 2 for c in inst.constraints)


def test_k22_outputs_never_share_permission_pairs():
    for seed in range(8):
        g = random_blocked(2, 2, 0.5, seed=seed)
        report = check_class(gen_mcb_k22(g), ClassParams(2, 2, 2))
        assert report.kab_free
        assert report.widths_ok


def test_k22_tracks_biclique_search():
    rng = random.Random(404)
    both = set()
    for _trial in range(25):
        g = random_blocked(2, 2, rng.random(), seed=rng.randrange(10**6),
                           plant_biclique=rng.random() < 0.3)
        want = has_multicolored_biclique(g)
        got = brute_force(gen_mcb_k22(g))
        assert (got is not None) == want
        both.add(want)
    assert both == {True, False}


def test_k22_complete_graph_is_unconstrained_and_sat():
    inst = gen_mcb_k22(random_blocked(2, 2, 1.0, seed=0))
    assert inst.constraints == ()
    assert brute_force(inst) is not None


# -- random graphs ------------------------------------------------------------


def test_random_graphs_are_seed_deterministic():
    assert random_bipartite(4, 4, 0.5, seed=9) == random_bipartite(4, 4, 0.5, seed=9)
    assert random_blocked(2, 2, 0.5, seed=9) == random_blocked(2, 2, 0.5, seed=9)
    assert random_bipartite(4, 4, 0.5, seed=9) != random_bipartite(4, 4, 0.5, seed=10)


def test_random_graph_parameter_validation():
    with pytest.raises(InputError):
        random_bipartite(-1, 2, 0.5, seed=0)
    with pytest.raises(InputError):
        random_bipartite(2, 2, 1.5, seed=0)
    with pytest.raises(InputError):
        random_blocked(0, 2, 0.5, seed=0)


def test_planted_biclique_always_present():
    for seed in range(10):
        g = random_blocked(2, 2, 0.1, seed=seed, plant_biclique=True)
        assert has_multicolored_biclique(g)


def test_demo_graph_is_the_documented_one():
    g = demo_blocked_graph()
    assert g.k == 2
    assert g.a_blocks == (("a1", "a2"), ("a3", "a4", "a5"))
    assert g.b_blocks == (("b1", "b2"), ("b3", "b4"))
    assert len(g.edges) == 11


# -- random in-class instances ------------------------------------------------


def _spec(**kw):
    args = dict(
        n_roles=10, n_perms=12, plb_size=4, max_role_degree=3,
        alpha=2, beta=2, c=3, n_constraints=1, kr=3, kp=2,
        plant=False, seed=0)
    args.update(kw)
    return RandomSpec(**args)


def test_gen_random_is_byte_deterministic():
    inst1, sol1 = gen_random(_spec(plant=True, seed=5))
    inst2, sol2 = gen_random(_spec(plant=True, seed=5))
    assert serialize_instance(inst1) == serialize_instance(inst2)
    assert sol1.roles == sol2.roles
    inst3, _sol3 = gen_random(_spec(plant=True, seed=6))
    assert serialize_instance(inst1) != serialize_instance(inst3)


def test_gen_random_outputs_stay_in_class():
    for seed in range(25):
        inst, sol = gen_random(_spec(seed=seed))
        assert sol is None
        assert check_class(inst, ClassParams(2, 2, 3)).ok


def test_gen_random_plants_verified_solutions():
    for seed in range(25):
        inst, sol = gen_random(_spec(plant=True, seed=seed))
        verdict = verify_solution(inst, sol)
        assert verdict.ok, verdict.violations
        assert len(sol.roles) == inst.kr


def test_gen_random_plant_survives_tight_shapes():
    # more planted roles than required permissions, and vice versa
    inst, sol = gen_random(_spec(plant=True, kr=6, plb_size=3, seed=11))
    assert verify_solution(inst, sol).ok
    inst, sol = gen_random(_spec(plant=True, kr=2, plb_size=6, seed=12))
    assert verify_solution(inst, sol).ok


def test_gen_random_reports_impossible_plants():
    with pytest.raises(GenerationError, match="kr exceeds n_roles"):
        gen_random(_spec(plant=True, n_roles=3, kr=5, n_constraints=0))
    with pytest.raises(GenerationError, match="carry the required set"):
        gen_random(_spec(plant=True, kr=1, max_role_degree=1, plb_size=3))
    with pytest.raises(GenerationError, match="unplanted roles"):
        gen_random(_spec(plant=True, n_roles=4, kr=3, n_constraints=2))


def test_random_spec_validation():
    with pytest.raises(InputError):
        _spec(plb_size=99)
    with pytest.raises(InputError):
        _spec(alpha=1)
    with pytest.raises(InputError):
        _spec(kp=-1)
    with pytest.raises(InputError):
        _spec(n_perms=0)
