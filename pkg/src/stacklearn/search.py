"""Exact boundary location along a segment of strategies.

Oracle-driven interval halving brackets the parameter where the
follower's response stops being the target action, then Stern-Brocot
mediant descent reconstructs that parameter exactly.  Two distinct
response-change parameters along a segment are rationals whose
denominators divide a product of the endpoint denominators and the
cleared payoff-difference scale, so once the bracket is narrower than
the squared inverse of that product it contains exactly one such
rational and the descent's first hit is it.  The halving count is
therefore driven by the measured endpoint denominators; the pessimistic
count ``6m(5B+8L)`` from the worst-case analysis is kept only as a hard
cap.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DepthExceeded, OrientationError
from .geometry import Point
from .oracle import QueryOracle
from .rational import vector_bits


def _iceil(q) -> int:
    return -((-q.numerator) // q.denominator)


def stern_brocot(lo, hi, depth: int):
    """First rational reached by mediant descent from (0/1, 1/1) in [lo, hi].

    Runs of steps in one direction are taken in bulk (one continued
    fraction term per iteration), so the iteration count scales with the
    bit size of the answer, not its denominator.  ``depth`` sizes the
    iteration cap at ``4*depth``; exceeding it means the caller's
    interval held no low-complexity rational.
    """
    lo, hi = mpq(lo), mpq(hi)
    if not (0 <= lo <= hi <= 1):
        raise ValueError("interval must satisfy 0 <= lo <= hi <= 1")
    if lo == 0:
        return mpq(0)
    if hi == 1:
        return mpq(1)
    a, b = mpz(0), mpz(1)
    c, d = mpz(1), mpz(1)
    cap = max(4 * depth, 64)
    for _ in range(cap):
        med = mpq(a + c, b + d)
        if med < lo:
            # mediants (a+tc)/(b+td) stay below lo while t < tau
            tau = (lo * b - a) / (c - lo * d)
            t = max(1, _iceil(tau) - 1)
            a, b = a + t * c, b + t * d
        elif med > hi:
            tau = (c - hi * d) / (hi * b - a)
            t = max(1, _iceil(tau) - 1)
            c, d = c + t * a, d + t * b
        else:
            return med
    raise DepthExceeded(f"no rational found in [{lo}, {hi}] within {cap} mediant steps")


def _common_denominator(p: Point):
    den = mpz(1)
    for x in p:
        den = gmpy2.lcm(den, x.denominator)
    return den


@dataclass
class SearchResult:
    """Outcome of one boundary search."""

    point: Point            # exactly on a separating hyperplane
    lam: object             # crossing parameter, target side at lam = 0
    queries: int            # oracle calls made by this search
    halvings: int
    swapped: bool           # endpoints were given in the opposite orientation


def binary_search(oracle: QueryOracle, target_action: int, p1: Point, p2: Point, *,
                  resp1: Optional[int] = None, resp2: Optional[int] = None,
                  crossing_denominator_bound=None) -> SearchResult:
    """Locate the exact response boundary on the segment from p1 to p2.

    Exactly one endpoint must answer ``target_action``; endpoints are
    reoriented so that side sits at parameter zero.  Responses already
    known to the caller can be passed in to save the two verification
    queries.  ``crossing_denominator_bound`` overrides the generic bound
    on the crossing's denominator when the caller knows more about the
    segment's structure.
    """
    p1 = tuple(mpq(x) for x in p1)
    p2 = tuple(mpq(x) for x in p2)
    queries = 0
    if resp1 is None:
        resp1 = oracle.query(p1)
        queries += 1
    if resp2 is None:
        resp2 = oracle.query(p2)
        queries += 1
    hit1, hit2 = resp1 == target_action, resp2 == target_action
    if hit1 == hit2:
        raise OrientationError(
            f"endpoints answer {resp1} and {resp2}; exactly one must be "
            f"action {target_action}")
    swapped = not hit1
    if swapped:
        p1, p2 = p2, p1

    m = oracle.m
    fbits = oracle.follower_bits
    B = max(vector_bits(p1), vector_bits(p2))
    printed_cap = 6 * m * (5 * B + 8 * fbits)
    depth = 3 * m * (5 * B + 8 * fbits)

    if crossing_denominator_bound is None:
        d1 = _common_denominator(p1)
        d2 = _common_denominator(p2)
        vbound = 2 * m * (mpz(1) << (2 * oracle.joint_bits * m)) * d1 * d2
    else:
        vbound = mpz(crossing_denominator_bound)
    halvings = min(2 * vbound.bit_length() + 1, max(printed_cap - 2, 1))

    diff = tuple(b - a for a, b in zip(p1, p2))
    lo, hi = mpq(0), mpq(1)
    for _ in range(halvings):
        mid = (lo + hi) / 2
        point = tuple(a + mid * d for a, d in zip(p1, diff))
        if oracle.query(point) == target_action:
            lo = mid
        else:
            hi = mid
        queries += 1

    lam = stern_brocot(lo, hi, depth)
    crossing = tuple(a + lam * d for a, d in zip(p1, diff))
    return SearchResult(point=crossing, lam=lam, queries=queries,
                        halvings=halvings, swapped=swapped)
