"""Bounded-bit interior sampling of polytopes in the simplex.

A draw is ``anchor + rho * x`` where the anchor averages d linearly
independent vertices, x is a uniform point of the grid
``{-1, ..., -1/M, 0, 1/M, ..., 1}^(d-1)`` embedded tangentially to the
probability sum (and to the fixed coordinate when sampling a simplex
facet), and ``M = ceil(sqrt(d)/delta)``.  The grid resolution is what
bounds the probability of landing on any fixed lower-dimensional linear
space by delta, independent of the step size rho.

rho is chosen as a power of two strictly below the anchor's exact
distance-to-boundary ratio, computed from the polytope's own constraint
list.  That keeps every draw strictly interior by construction and keeps
the draw's bit-complexity far below the worst-case budget
``40*m^3*L + 2*log2(1/delta)`` that callers may assert; the printed
worst-case step ``(d^3 * 2^(9d^3 L + 4dL))^-1`` is available as
:func:`worst_case_rho` for reference but would make every downstream
binary search pay thousands of extra queries for nothing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import AssertionViolation, InsufficientVertices
from .geometry import Halfspace, Point, Polytope, rank_of_vectors
from .rational import bit_complexity, ceil_log2, floor_log2, pow2, vector_bits


@dataclass(frozen=True)
class SampleParams:
    """Resolved sampling parameters for one polytope or facet."""

    d: int
    delta: object
    rho: object
    M: int
    facet_index: Optional[int] = None


def grid_size(d: int, delta) -> int:
    """Smallest integer M with M * delta >= sqrt(d)."""
    delta = mpq(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0, 1)")
    # M^2 * num^2 >= d * den^2, solved in integers
    target = d * delta.denominator ** 2
    num2 = delta.numerator ** 2
    M = int(gmpy2.isqrt((target + num2 - 1) // num2))
    while M * M * num2 < target:
        M += 1
    return max(M, 1)


def worst_case_rho(d: int, payoff_bits: int):
    """The pessimistic grid step valid for any region cut from payoffs."""
    exponent = 9 * d ** 3 * payoff_bits + 4 * d * payoff_bits
    return mpq(1, d ** 3 * (mpz(1) << exponent))


def bit_bound(m: int, payoff_bits: int, delta) -> int:
    """Upper bound on the bit-complexity of any sampled point."""
    return 40 * m ** 3 * payoff_bits + 2 * ceil_log2(1 / mpq(delta))


def _greedy_independent(vertices: Sequence[Point], d: int) -> Optional[list]:
    """First d vertices, in enumeration order, that are linearly independent."""
    chosen: list = []
    for v in vertices:
        if rank_of_vectors(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == d:
                return chosen
    return None


def interior_anchor(polytope: Polytope, d: Optional[int] = None,
                    vertices: Optional[Sequence[Point]] = None) -> Point:
    """Average of the first d linearly independent vertices.

    Raises :class:`InsufficientVertices` when the polytope does not span
    the requested dimension.
    """
    d = polytope.m if d is None else d
    pool = polytope.vertices() if vertices is None else tuple(vertices)
    chosen = _greedy_independent(pool, d)
    if chosen is None:
        raise InsufficientVertices(
            f"needed {d} independent vertices, polytope has rank "
            f"{rank_of_vectors(pool)}")
    inv = mpq(1, d)
    return tuple(sum(col, mpq(0)) * inv for col in zip(*chosen))


def _embedding(m: int, facet_index: Optional[int]) -> tuple[list[int], int]:
    free = [k for k in range(m) if k != facet_index]
    return free, free[-1]


def _spreads(halfspaces: Sequence[Halfspace], free: list[int]) -> list:
    """Per-constraint sensitivity to the embedded grid offsets."""
    close = free[-1]
    out = []
    for hs in halfspaces:
        c = hs.hyperplane.coeffs
        s = mpq(0)
        for k in free[:-1]:
            s += abs(c[k] - c[close])
        out.append(s)
    return out


def _exact_rho(halfspaces: Sequence[Halfspace], spreads: Sequence,
               anchor: Point):
    """Power of two strictly inside the anchor's slack on every constraint."""
    best = None
    for hs, s in zip(halfspaces, spreads):
        if s == 0:
            continue
        slack = hs.hyperplane.value_at(anchor) * hs.direction
        if slack <= 0:
            raise AssertionViolation("anchor is not interior to the polytope")
        ratio = slack / s
        if best is None or ratio < best:
            best = ratio
    if best is None:
        return mpq(1, 2)
    return pow2(floor_log2(best) - 1)


def _params(polytope: Polytope, delta, facet_index: Optional[int],
            anchor: Point) -> SampleParams:
    d = polytope.m if facet_index is None else polytope.m - 1
    free, _ = _embedding(polytope.m, facet_index)
    spreads = _spreads(polytope.halfspaces, free)
    rho = _exact_rho(polytope.halfspaces, spreads, anchor)
    return SampleParams(d, mpq(delta), rho, grid_size(d, delta), facet_index)


def sampler_params(polytope: Polytope, delta,
                   facet_index: Optional[int] = None) -> SampleParams:
    """Parameters the next draw on this polytope would use."""
    d = polytope.m if facet_index is None else polytope.m - 1
    anchor = interior_anchor(polytope, d)
    return _params(polytope, delta, facet_index, anchor)


def simplex_facet(m: int, facet_index: int) -> Polytope:
    """The facet p_i = 0 of the simplex, with its corner vertices cached."""
    base = Polytope.simplex(m)
    verts = tuple(v for v in base.vertices() if v[facet_index] == 0)
    facet = Polytope(m, base.halfspaces)
    facet._vertices = verts
    return facet


def _draw(polytope: Polytope, delta, rng: random.Random,
          facet_index: Optional[int], anchor: Point,
          payoff_bits: Optional[int]) -> Point:
    m = polytope.m
    free, close = _embedding(m, facet_index)
    params = _params(polytope, delta, facet_index, anchor)
    spreads = _spreads(polytope.halfspaces, free)
    for _ in range(64):
        point = list(anchor)
        for l in range(params.d - 1):
            k = rng.randint(-params.M, params.M)
            if k:
                offset = params.rho * mpq(k, params.M)
                point[free[l]] += offset
                point[close] -= offset
        pt = tuple(point)
        ok = sum(pt, mpq(0)) == 1
        if ok and facet_index is not None:
            ok = pt[facet_index] == 0
        if ok:
            for hs, s in zip(polytope.halfspaces, spreads):
                inside = hs.contains(pt) if s == 0 else hs.strictly_contains(pt)
                if not inside:
                    ok = False
                    break
        if ok:
            if payoff_bits is not None:
                budget = bit_bound(m, payoff_bits, delta)
                got = vector_bits(pt)
                if got > budget:
                    raise AssertionViolation(
                        f"sampled point uses {got} bits, budget {budget}")
            return pt
    raise AssertionViolation("no interior grid point after 64 draws")


def sample_int(polytope: Polytope, delta, rng: random.Random, *,
               anchor_vertices: Optional[Sequence[Point]] = None,
               payoff_bits: Optional[int] = None) -> Point:
    """Draw a strictly interior point of a full-dimensional polytope.

    ``anchor_vertices`` short-circuits vertex enumeration when the
    caller already holds m independent vertices (the uncovered-cell
    path).  Same seed, polytope and delta give the same point.
    """
    anchor = interior_anchor(polytope, polytope.m, anchor_vertices)
    return _draw(polytope, delta, rng, None, anchor, payoff_bits)


def sample_simplex_facet(m: int, facet_index: int, delta, rng: random.Random, *,
                         payoff_bits: Optional[int] = None) -> Point:
    """Draw from the relative interior of the facet p_i = 0 of the simplex."""
    if not 0 <= facet_index < m:
        raise ValueError("facet index out of range")
    facet = simplex_facet(m, facet_index)
    anchor = interior_anchor(facet, m - 1)
    return _draw(facet, delta, rng, facet_index, anchor, payoff_bits)
