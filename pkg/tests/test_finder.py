import math
import random

import pytest
from gmpy2 import mpq

import stacklearn as sl
from stacklearn import finder as finder_module
from stacklearn.errors import DegenerateGeometry
from stacklearn.finder import (FinderContext, SidePointPair, find_hyperplane,
                               route_side_points)
from stacklearn.geometry import Hyperplane, Polytope, dot
from stacklearn.learner import derived_delta
from stacklearn.oracle import QueryOracle, best_response, mixed_strategy

from conftest import make_instance, standard_instance


def _demo_context(demo_instance):
    return FinderContext(
        target_action=0,
        upper_bound=Polytope.simplex(3),
        interior_point=mixed_strategy((mpq(1, 6), mpq(2, 3), mpq(1, 6))),
        vertex=mixed_strategy((1, 0, 0)),
        delta=derived_delta(3, 3, mpq(1, 10)),
        payoff_scale_bits=2)


def test_route_side_points():
    pair = SidePointPair(0, plus=(1,), minus=(2,), facet_sample=(0,),
                         response_plus=5)
    assert route_side_points(pair, 5, target_action=5) == ((1,), (2,))
    assert route_side_points(pair, 4, target_action=5) == ((2,), (1,))


def test_find_hyperplane_demo_context(demo_instance):
    ctx = _demo_context(demo_instance)
    hyp = find_hyperplane(ctx, QueryOracle(demo_instance), random.Random(0))
    assert hyp == Hyperplane.canonical((1, -1, 0))


def test_find_hyperplane_is_always_true_plane(demo_instance):
    ctx = _demo_context(demo_instance)
    true_planes = set(sl.all_separating_hyperplanes(demo_instance))
    for seed in range(12):
        hyp = find_hyperplane(ctx, QueryOracle(demo_instance),
                              random.Random(seed))
        assert hyp in true_planes


def test_find_hyperplane_two_actions():
    # columns (1,0) and (0,1): indifference at equal weights
    instance = make_instance(leader_rows=[[1, 0], [0, 1]],
                             follower_rows=[[1, 0], [0, 1]])
    ctx = FinderContext(
        target_action=0,
        upper_bound=Polytope.simplex(2),
        interior_point=mixed_strategy((mpq(3, 4), mpq(1, 4))),
        vertex=mixed_strategy((0, 1)),
        delta=derived_delta(2, 2, mpq(1, 10)),
        payoff_scale_bits=instance.follower_bits)
    hyp = find_hyperplane(ctx, QueryOracle(instance), random.Random(1))
    assert hyp == Hyperplane.canonical((1, -1))


def test_degenerate_facet_draws_raise(demo_instance, monkeypatch):
    # identical facet samples leave all probes on one line
    fixed = mixed_strategy((0, mpq(1, 2), mpq(1, 2)))
    monkeypatch.setattr(finder_module, "sample_simplex_facet",
                        lambda m, i, delta, rng, **kw: fixed)
    ctx = _demo_context(demo_instance)
    with pytest.raises(DegenerateGeometry):
        find_hyperplane(ctx, QueryOracle(demo_instance), random.Random(0))


def test_query_budget_per_call(demo_instance):
    ctx = _demo_context(demo_instance)
    m, L = 3, demo_instance.follower_bits
    budget = m ** 7 * L + m ** 4 * math.log2(1 / float(ctx.delta))
    for seed in range(6):
        oracle = QueryOracle(demo_instance)
        find_hyperplane(ctx, oracle, random.Random(seed))
        assert oracle.query_count <= budget


def test_side_points_straddle_the_plane(demo_instance):
    """Mirrored probes answer from both sides on every facet draw."""
    target = 0
    ctx = _demo_context(demo_instance)
    recorded = []
    original = route_side_points

    def spy(pair, response_plus, target_action):
        recorded.append(pair)
        return original(pair, response_plus, target_action)

    import stacklearn.finder as fm
    old = fm.route_side_points
    fm.route_side_points = spy
    try:
        hyp = find_hyperplane(ctx, QueryOracle(demo_instance), random.Random(0))
    finally:
        fm.route_side_points = old
    assert len(recorded) == 3
    inst = demo_instance
    for pair in recorded:
        resp_plus = pair.response_plus
        resp_minus = best_response(inst, pair.minus)
        # both probes strictly interior to the simplex
        assert all(x > 0 for x in pair.plus)
        assert all(x > 0 for x in pair.minus)
        if dot(hyp.coeffs, pair.plus) != 0:
            assert resp_plus != resp_minus
        # responses confined to the two actions meeting at the plane
        assert {resp_plus, resp_minus} <= {0, 1, 2}


def test_recovered_plane_matches_payoff_difference():
    # the canonical coefficients equal a normalized follower column difference
    for trial in range(8):
        inst = standard_instance(3, 3, 6, 6000 + trial)
        regions = sl.true_regions(inst)
        target = next(j for j, r in regions.items() if r.has_full_dimension())
        region = regions[target]
        anchor = sl.interior_anchor(region)
        outside = next((v for v in Polytope.simplex(3).vertices()
                        if not region.contains(v)), None)
        if outside is None:
            continue
        ctx = FinderContext(target, Polytope.simplex(3), anchor, outside,
                            derived_delta(3, 3, mpq(1, 10)),
                            inst.follower_bits)
        hyp = find_hyperplane(ctx, QueryOracle(inst), random.Random(trial))
        assert hyp in set(sl.all_separating_hyperplanes(inst))
