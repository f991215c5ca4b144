"""Identification of one full separating hyperplane from oracle queries.

Given an upper bound on a best-response region, a known interior point
and a vertex the region does not contain, one randomized boundary search
produces a point exactly on an undiscovered hyperplane.  Points just off
that crossing toward each simplex facet, together with their mirror
images, land on both sides of the hyperplane; boundary searches between
opposite-side points yield further exact points until the coefficient
vector is pinned down.

The mirror segments all pass through the crossing point, so their own
crossing parameters are ratios of the facet samples alone.  That gives
the pair searches a far tighter denominator bound than the generic one,
which is what keeps the per-hyperplane query count low.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from gmpy2 import mpq, mpz

from .errors import DegenerateGeometry
from .geometry import (Hyperplane, Point, Polytope, hyperplane_from_points,
                       rank_of_vectors)
from .oracle import QueryOracle
from .rational import vector_bits
from .sampler import sample_int, sample_simplex_facet
from .search import _common_denominator, binary_search


@dataclass(frozen=True)
class FinderContext:
    """Inputs handed down by the learner for one discovery attempt."""

    target_action: int
    upper_bound: Polytope
    interior_point: Point     # strictly inside the true region
    vertex: Point             # vertex of upper_bound, known outside the region
    delta: object
    payoff_scale_bits: int    # bit budget of the payoff entries in play


@dataclass(frozen=True)
class SidePointPair:
    """Crossing-adjacent probe pair for one simplex facet."""

    facet_index: int
    plus: Point
    minus: Point
    facet_sample: Point
    response_plus: int


def route_side_points(pair: SidePointPair, response_plus: int,
                      target_action: int) -> tuple[Point, Point]:
    """Assign (same-side-as-target, other-side) from the queried response.

    Only the plus point is queried; its mirror is guaranteed to sit on
    the opposite side whenever the plus point is off the hyperplane.
    """
    if response_plus == target_action:
        return pair.plus, pair.minus
    return pair.minus, pair.plus


def _alpha(m: int, crossing: Point, payoff_scale_bits: int):
    """Probe radius small enough that probes stay between the crossing's
    hyperplane and every other boundary: 2^-(m(B+4L)+1) / m for the
    crossing's measured bit-complexity B."""
    exponent = m * (vector_bits(crossing) + 4 * payoff_scale_bits) + 1
    return mpq(1, m * (mpz(1) << exponent))


def find_hyperplane(ctx: FinderContext, oracle: QueryOracle,
                    rng: random.Random) -> Hyperplane:
    """Identify one separating hyperplane cutting ctx.upper_bound.

    Raises :class:`DegenerateGeometry` when the drawn points fail to pin
    down a single coefficient direction (a bounded-probability event;
    the caller retries with fresh randomness) and propagates
    :class:`OrientationError` from searches whose endpoints responded
    inconsistently.
    """
    m = oracle.m
    target = ctx.target_action

    p = sample_int(ctx.upper_bound, ctx.delta, rng)
    response = oracle.query(p)
    if response == target:
        first = binary_search(oracle, target, p, ctx.vertex, resp1=response)
    else:
        first = binary_search(oracle, target, p, ctx.interior_point,
                              resp1=response, resp2=target)
    crossing = first.point

    if m == 2:
        hyp = hyperplane_from_points([crossing])
        if hyp is None:
            raise DegenerateGeometry("crossing point does not define a line")
        return hyp

    alpha = _alpha(m, crossing, ctx.payoff_scale_bits)
    same_side: list[tuple[Point, object, Optional[int]]] = []
    other_side: list[tuple[Point, object, Optional[int]]] = []
    for i in range(m):
        facet_point = sample_simplex_facet(m, i, ctx.delta, rng)
        offset = tuple(alpha * (f - c) for f, c in zip(facet_point, crossing))
        plus = tuple(c + o for c, o in zip(crossing, offset))
        minus = tuple(c - o for c, o in zip(crossing, offset))
        resp_plus = oracle.query(plus)
        pair = SidePointPair(i, plus, minus, facet_point, resp_plus)
        near, far = route_side_points(pair, resp_plus, target)
        facet_den = _common_denominator(facet_point)
        if near is plus:
            same_side.append((plus, facet_den, resp_plus))
            other_side.append((minus, facet_den, None))
        else:
            same_side.append((minus, facet_den, None))
            other_side.append((plus, facet_den, resp_plus))

    # Every probe segment passes through the crossing, which the sought
    # hyperplane contains, so its crossing parameter is a ratio built
    # from the two facet samples only; alpha cancels.
    pair_scale = 2 * m * (mpz(1) << (2 * oracle.joint_bits * m))
    points: list[Point] = []
    for (pa, da, ra), (pb, db, rb) in itertools.product(same_side, other_side):
        if len(points) == m - 1:
            break
        result = binary_search(oracle, target, pa, pb, resp1=ra, resp2=rb,
                               crossing_denominator_bound=pair_scale * da * db)
        candidate = result.point
        if rank_of_vectors(points + [candidate]) == len(points) + 1:
            points.append(candidate)
    if len(points) < m - 1:
        raise DegenerateGeometry(
            f"only {len(points)} independent hyperplane points out of {m - 1}")

    hyp = hyperplane_from_points(points)
    if hyp is None:
        raise DegenerateGeometry("hyperplane points are linearly dependent")
    if hyp.value_at(crossing) != 0:
        # the pair crossings and the first crossing disagree: some search
        # strayed onto a different boundary
        raise DegenerateGeometry("crossing set is not coplanar")
    return hyp
