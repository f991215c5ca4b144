"""Learning an optimal commitment by closing best-response regions.

The learner repeatedly samples an uncovered interior point, asks the
oracle whose region it fell in, and then certifies that region: every
vertex of the current upper bound is checked through a query placed a
calibrated step inside the region (querying the vertex itself would let
tie-breaking lie about membership), and each failing vertex triggers the
discovery of one more separating hyperplane.  When all vertices pass,
the upper bound provably equals the region.  Once the closed regions
cover the simplex, the best vertex over all of them is an optimal
commitment.

The uncovered remainder of the simplex is not convex, but it is the
union of the cells obtained by picking one discovered constraint per
closed region and flipping it; the first full-dimensional cell in a
fixed enumeration order feeds the interior sampler directly with its
independent vertices.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from gmpy2 import mpq, mpz

from .errors import (AssertionViolation, DegenerateGeometry, FullyCovered,
                     InsufficientVertices, OrientationError,
                     RetryBudgetExhausted)
from .finder import FinderContext, find_hyperplane
from .geometry import BOUNDARY, Halfspace, Point, Polytope
from .oracle import QueryOracle
from .rational import as_pair, vector_bits
from .sampler import _greedy_independent, bit_bound, sample_int

STANDARD = "standard"
EQUIVALENT = "equivalent"


@dataclass(frozen=True)
class LearnerConfig:
    """Run parameters; everything else is derived from the game's public
    m, n and payoff bit-complexity."""

    zeta: object = mpq(1, 10)
    mode: str = STANDARD
    retry_budget: int = 3
    record_checks: bool = False


@dataclass(frozen=True)
class VertexCheckRecord:
    action: int
    vertex: Point
    answer: bool


@dataclass
class LearnOutcome:
    p_star: Optional[Point]
    value: Optional[object]
    regions: dict
    anchors: dict
    query_count: int
    success: bool
    delta_events: list = field(default_factory=list)
    first_hyperplanes: dict = field(default_factory=dict)
    vertex_checks: Optional[list] = None

    def summary(self, seed=None, m=None, n=None, payoff_bits=None,
                zeta=None) -> dict:
        return {
            "seed": seed,
            "zeta": as_pair(zeta) if zeta is not None else None,
            "m": m,
            "n": n,
            "L": payoff_bits,
            "queries": self.query_count,
            "value": as_pair(self.value) if self.value is not None else None,
            "p_star": [as_pair(x) for x in self.p_star] if self.p_star else None,
            "success": self.success,
            "delta_events": list(self.delta_events),
        }


def derived_delta(n: int, m: int, zeta):
    """Per-draw failure budget carved out of the overall one."""
    zeta = mpq(zeta)
    if not 0 < zeta < 1:
        raise ValueError("zeta must be in (0, 1)")
    return zeta / (2 * (n * n + n * m) ** 2 + n ** 3)


def membership_step(m: int, point_bits: int, payoff_bits: int):
    """Mixing weight for vertex checks, strictly inside the interval
    (0, 2^-(m(B+4L)-1)) that makes the queried point's region membership
    equal the vertex's."""
    exponent = m * (point_bits + 4 * payoff_bits) + 1
    return mpq(1, (2 * m) * (mpz(1) << exponent))


def check_vertex(vertex: Point, anchor: Point, lam, target_action: int,
                 oracle: QueryOracle) -> bool:
    """Query lam*anchor + (1-lam)*vertex; the answer equals exact
    membership of the vertex in the target's best-response region."""
    probe = tuple(lam * a + (1 - lam) * v for a, v in zip(anchor, vertex))
    return oracle.query(probe) == target_action


def sample_uncovered_interior(m: int, closed_regions: dict, delta,
                              rng: random.Random) -> Point:
    """Interior point of the simplex minus the closed regions.

    Raises :class:`FullyCovered` when no flip-one-constraint cell has m
    independent vertices, which is exactly when the uncovered remainder
    has zero volume.
    """
    if not closed_regions:
        return sample_int(Polytope.simplex(m), delta, rng)
    choice_lists = []
    for action in sorted(closed_regions):
        cuts = [hs for hs in closed_regions[action].halfspaces
                if hs.hyperplane.kind != BOUNDARY]
        if not cuts:
            # an unconstrained closed region is the whole simplex
            raise FullyCovered("a closed region equals the simplex")
        choice_lists.append(cuts)
    simplex = Polytope.simplex(m)
    for combo in itertools.product(*choice_lists):
        cell = simplex
        for hs in combo:
            cell = cell.intersect_halfspace(hs.flipped())
        chosen = _greedy_independent(cell.vertices(), m)
        if chosen is not None:
            return sample_int(cell, delta, rng, anchor_vertices=chosen)
    raise FullyCovered("every uncovered cell is lower-dimensional")


def _ordered_vertices(region: Polytope) -> list:
    # deterministic check order; descending puts the first pure strategy first
    return sorted(region.vertices(), reverse=True)


class _Run:
    """State of one learning run."""

    def __init__(self, oracle: QueryOracle, config: LearnerConfig,
                 rng: random.Random):
        self.oracle = oracle
        self.config = config
        self.rng = rng
        self.m = oracle.m
        self.n = oracle.n
        self.payoff_bits = oracle.payoff_bits(config.mode)
        self.delta = derived_delta(self.n, self.m, config.zeta)
        # worst-case point size: sampled anchors and region vertices
        self.base_bits = max(bit_bound(self.m, self.payoff_bits, self.delta),
                             9 * self.payoff_bits * self.m * self.m)
        if config.mode == EQUIVALENT:
            self.max_cuts = comb(self.m + 2 * self.n - 1, self.m)
        else:
            self.max_cuts = comb(self.m + self.n, self.m)
        self.closed: dict = {}
        self.anchors: dict = {}
        self.first_hyperplanes: dict = {}
        self.events: list = []
        self.checks: Optional[list] = [] if config.record_checks else None

    def note(self, message: str):
        self.events.append(message)

    def pick_uncovered(self) -> tuple[Point, int]:
        """Sample an uncovered interior point whose response is unclosed."""
        for attempt in range(self.config.retry_budget + 1):
            try:
                point = sample_uncovered_interior(self.m, self.closed,
                                                  self.delta, self.rng)
            except (AssertionViolation, InsufficientVertices) as exc:
                self.note(f"uncovered-sample-failed: {exc}")
                continue
            action = self.oracle.query(point)
            if action not in self.closed:
                return point, action
            self.note(f"uncovered-sample-in-closed-region action={action}")
        raise RetryBudgetExhausted("could not sample an uncovered interior point")

    def run_check(self, vertex: Point, anchor: Point, action: int) -> bool:
        bits = max(self.base_bits, vector_bits(anchor), vector_bits(vertex))
        lam = membership_step(self.m, bits, self.payoff_bits)
        answer = check_vertex(vertex, anchor, lam, action, self.oracle)
        if self.checks is not None:
            self.checks.append(VertexCheckRecord(action, vertex, answer))
        return answer

    def discover_cut(self, action: int, region: Polytope, anchor: Point,
                     vertex: Point) -> Halfspace:
        """One new constraint for the region, preferring one that cuts
        off the failing vertex.

        A discovered hyperplane that only touches the vertex (or leaves
        it inside) is still a sound constraint, so when retries keep
        producing such planes the last one is accepted rather than
        failing the run; the region still shrinks strictly and the
        vertex gets rechecked against the smaller bound.
        """
        ctx = FinderContext(action, region, anchor, vertex, self.delta,
                            self.payoff_bits)
        fallback = None
        for attempt in range(self.config.retry_budget + 1):
            try:
                hyp = find_hyperplane(ctx, self.oracle, self.rng)
            except (DegenerateGeometry, OrientationError,
                    InsufficientVertices, AssertionViolation) as exc:
                self.note(f"finder-failed action={action}: "
                          f"{type(exc).__name__}: {exc}")
                continue
            value = hyp.value_at(anchor)
            if value == 0:
                self.note(f"anchor-on-discovered-hyperplane action={action}")
                continue
            side = Halfspace(hyp, 1 if value > 0 else -1)
            if side in region.halfspaces:
                self.note(f"duplicate-hyperplane action={action}")
                continue
            if side.contains(vertex):
                self.note(f"hyperplane-misses-vertex action={action}")
                fallback = side
                continue
            return side
        if fallback is not None:
            self.note(f"accepting-noncutting-hyperplane action={action}")
            return fallback
        raise RetryBudgetExhausted(
            f"no usable hyperplane for action {action} after "
            f"{self.config.retry_budget + 1} attempts")

    def close_action(self, action: int, anchor: Point):
        region = Polytope.simplex(self.m)
        self.anchors[action] = anchor
        pending = _ordered_vertices(region)
        cuts = 0
        while pending:
            vertex = pending.pop(0)
            if self.run_check(vertex, anchor, action):
                continue
            side = self.discover_cut(action, region, anchor, vertex)
            self.first_hyperplanes.setdefault(action, side.hyperplane)
            region = region.intersect_halfspace(side)
            cuts += 1
            if cuts > self.max_cuts:
                raise RetryBudgetExhausted(
                    f"action {action} exceeded the {self.max_cuts}-cut budget")
            pending = _ordered_vertices(region)
        self.closed[action] = region
        if not region.strictly_contains(anchor):
            self.note(f"anchor-on-region-boundary action={action}")

    def best_vertex(self) -> tuple[Optional[Point], Optional[object]]:
        """True leader value at every closed-region vertex, via one query each."""
        candidates: dict = {}
        for action in sorted(self.closed):
            for v in self.closed[action].vertices():
                candidates.setdefault(v, None)
        leader = self.oracle.leader_payoffs
        best_point, best_value = None, None
        for v in candidates:
            response = self.oracle.query(v)
            value = mpq(0)
            for i in range(self.m):
                value += v[i] * leader[i][response]
            if (best_value is None or value > best_value
                    or (value == best_value and v < best_point)):
                best_point, best_value = v, value
        return best_point, best_value


def learn(oracle: QueryOracle, config: LearnerConfig,
          rng: random.Random) -> LearnOutcome:
    """Run the full learning loop and return the best commitment found.

    Retry budgets absorb the bounded-probability failure events
    (degenerate draws, duplicate hyperplanes, samples landing on
    hyperplanes); exhausting any of them ends the run with
    ``success=False`` rather than an exception, so sweeps can proceed.
    """
    run = _Run(oracle, config, rng)
    success = True
    try:
        while len(run.closed) < run.n:
            try:
                anchor, action = run.pick_uncovered()
            except FullyCovered:
                break
            run.close_action(action, anchor)
    except RetryBudgetExhausted as exc:
        run.note(f"run-abandoned: {exc}")
        success = False
    p_star, value = run.best_vertex()
    return LearnOutcome(
        p_star=p_star,
        value=value,
        regions=dict(run.closed),
        anchors=dict(run.anchors),
        query_count=oracle.query_count,
        success=success,
        delta_events=run.events,
        first_hyperplanes=dict(run.first_hyperplanes),
        vertex_checks=run.checks,
    )
