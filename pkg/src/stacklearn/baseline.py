"""Full-knowledge ground truth for verification.

Builds the true best-response regions directly from the payoff matrices,
computes the optimal commitment by scoring every region vertex, and
meters the uncontrolled halving search that needs exponentially many
probes when an endpoint carries too many bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from gmpy2 import mpq

from .geometry import (LEADER_SEPARATING, SEPARATING, Halfspace, Hyperplane,
                       Point, Polytope, dot, halfspace)
from .oracle import GameInstance, Strategy, best_response, leader_value

STANDARD = "standard"
EQUIVALENT = "equivalent"


@dataclass(frozen=True)
class GroundTruth:
    regions: dict
    optimum: tuple  # (strategy, value)


def follower_difference(instance: GameInstance, j: int, k: int) -> tuple:
    return tuple(instance.follower[i][j] - instance.follower[i][k]
                 for i in range(instance.m))


def leader_difference(instance: GameInstance, j: int, k: int) -> tuple:
    return tuple(instance.leader[i][j] - instance.leader[i][k]
                 for i in range(instance.m))


def separating_halfspace(instance: GameInstance, j: int, k: int) -> Optional[Halfspace]:
    """Side of the j/k indifference plane where j is weakly better for
    the follower; None when the payoff columns coincide."""
    diff = follower_difference(instance, j, k)
    if all(d == 0 for d in diff):
        return None
    return halfspace(diff, 0, SEPARATING)


def leader_halfspace(instance: GameInstance, j: int, k: int) -> Optional[Halfspace]:
    diff = leader_difference(instance, j, k)
    if all(d == 0 for d in diff):
        return None
    return halfspace(diff, 0, LEADER_SEPARATING)


def equivalent_actions(instance: GameInstance, j: int) -> list[int]:
    """Follower actions with payoff columns identical to j's."""
    out = []
    for k in range(instance.n):
        if k != j and all(d == 0 for d in follower_difference(instance, j, k)):
            out.append(k)
    return out


def true_regions(instance: GameInstance, mode: str = STANDARD) -> dict:
    """Best-response region of every follower action.

    In equivalent mode, regions of actions with identical follower
    columns are additionally split along the leader indifference planes,
    mirroring leader-favoring tie-breaking.
    """
    regions = {}
    for j in range(instance.n):
        region = Polytope.simplex(instance.m)
        for k in range(instance.n):
            if k == j:
                continue
            hs = separating_halfspace(instance, j, k)
            if hs is not None:
                region = region.intersect_halfspace(hs)
        if mode == EQUIVALENT:
            for k in equivalent_actions(instance, j):
                hs = leader_halfspace(instance, j, k)
                if hs is not None:
                    region = region.intersect_halfspace(hs)
        regions[j] = region
    return regions


def brute_force_optimal(instance: GameInstance, mode: str = STANDARD) -> tuple:
    """Optimal commitment via vertex enumeration of full-dimensional regions.

    Returns (strategy, value) with ties broken toward the
    lexicographically smallest strategy.
    """
    regions = true_regions(instance, mode)
    candidates: dict = {}
    for j in sorted(regions):
        if not regions[j].has_full_dimension():
            continue
        for v in regions[j].vertices():
            candidates.setdefault(v, None)
    best_point, best_value = None, None
    for v in candidates:
        value = leader_value(instance, v)
        if (best_value is None or value > best_value
                or (value == best_value and v < best_point)):
            best_point, best_value = v, value
    return best_point, best_value


def ground_truth(instance: GameInstance, mode: str = STANDARD) -> GroundTruth:
    return GroundTruth(true_regions(instance, mode),
                       brute_force_optimal(instance, mode))


def all_separating_hyperplanes(instance: GameInstance,
                               include_leader: bool = False) -> tuple:
    """Distinct canonical indifference hyperplanes of the game."""
    seen: dict = {}
    for j in range(instance.n):
        for k in range(j + 1, instance.n):
            hs = separating_halfspace(instance, j, k)
            if hs is not None:
                seen.setdefault(hs.hyperplane, None)
            elif include_leader:
                lhs = leader_halfspace(instance, j, k)
                if lhs is not None:
                    seen.setdefault(lhs.hyperplane, None)
    return tuple(seen)


def segment_crossings(instance: GameInstance, p1: Point, p2: Point,
                      include_leader: bool = False) -> dict:
    """Crossing parameter of every hyperplane the segment meets.

    Keys are canonical hyperplanes, values the exact lam in [0, 1] with
    p1 + lam*(p2 - p1) on the plane.
    """
    crossings = {}
    diff = tuple(b - a for a, b in zip(p1, p2))
    for hyp in all_separating_hyperplanes(instance, include_leader):
        slope = dot(hyp.coeffs, diff)
        if slope == 0:
            continue
        lam = -dot(hyp.coeffs, p1) / slope
        if 0 <= lam <= 1:
            crossings[hyp] = lam
    return crossings


def naive_binary_search_queries(instance: GameInstance, p1: Strategy,
                                p2: Strategy, target_hyperplane: Hyperplane,
                                max_steps: int = 10000) -> int:
    """Probe count of uncontrolled halving until the target crossing is
    isolated from every other crossing on the segment.

    The halving tracks the boundary of the region of the response at p1;
    it terminates once no other crossing parameter lies strictly inside
    the active interval, which is what a search that cannot bound its
    endpoints' bit-complexity must achieve before it can tell the
    crossings apart.
    """
    target = best_response(instance, p1)
    crossings = segment_crossings(instance, p1, p2)
    if target_hyperplane not in crossings:
        raise ValueError("segment does not cross the target hyperplane")
    lam_target = crossings[target_hyperplane]
    others = sorted(set(lam for hyp, lam in crossings.items())
                    - {lam_target})
    diff = tuple(b - a for a, b in zip(p1, p2))
    lo, hi = mpq(0), mpq(1)
    count = 0
    while any(lo < lam < hi for lam in others):
        if count >= max_steps:
            break
        mid = (lo + hi) / 2
        point = tuple(a + mid * d for a, d in zip(p1, diff))
        count += 1
        if best_response(instance, point) == target:
            lo = mid
        else:
            hi = mid
    return count
