"""Exact polytope geometry on the leader's strategy simplex.

Hyperplanes are kept in a canonical scaling (first nonzero coefficient
equal to one) so that equality is plain tuple comparison.  A polytope is
a list of halfspaces over the simplex; the probability-sum row is
implicit and is added to every linear solve.  Vertex enumeration walks
all (m-1)-element subsets of the distinct constraint hyperplanes, which
is exactly the combinatorial bound the query-count analysis budgets for.
All arithmetic is mpq, nothing is approximate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .errors import AssertionViolation
from .rational import vector_bits

#: A point or coefficient vector: tuple of mpq, length m.
Point = tuple

SEPARATING = "separating"
BOUNDARY = "boundary"
LEADER_SEPARATING = "leader-separating"


def dot(a: Sequence, b: Sequence):
    total = mpq(0)
    for x, y in zip(a, b):
        total += x * y
    return total


@dataclass(frozen=True)
class Hyperplane:
    """Canonical hyperplane {p : coeffs . p = offset}.

    ``kind`` records where the plane came from (payoff difference,
    simplex boundary, leader payoff difference); it is bookkeeping only
    and never enters equality or hashing.
    """

    coeffs: tuple
    offset: object
    kind: str = field(default=SEPARATING, compare=False)

    @staticmethod
    def canonical(coeffs: Iterable, offset=0, kind: str = SEPARATING) -> "Hyperplane":
        cs = tuple(mpq(c) for c in coeffs)
        pivot = next((c for c in cs if c != 0), None)
        if pivot is None:
            raise ValueError("hyperplane needs a nonzero coefficient")
        return Hyperplane(tuple(c / pivot for c in cs), mpq(offset) / pivot, kind)

    def value_at(self, point: Point):
        return dot(self.coeffs, point) - self.offset

    def contains_point(self, point: Point) -> bool:
        return self.value_at(point) == 0


@dataclass(frozen=True)
class Halfspace:
    """One side of a hyperplane: direction +1 keeps value_at >= 0, -1 the other side."""

    hyperplane: Hyperplane
    direction: int

    def contains(self, point: Point) -> bool:
        v = self.hyperplane.value_at(point)
        return v >= 0 if self.direction > 0 else v <= 0

    def strictly_contains(self, point: Point) -> bool:
        v = self.hyperplane.value_at(point)
        return v > 0 if self.direction > 0 else v < 0

    def flipped(self) -> "Halfspace":
        """The closed complement side of the same hyperplane."""
        return Halfspace(self.hyperplane, -self.direction)


def halfspace(coeffs: Iterable, offset=0, kind: str = SEPARATING) -> Halfspace:
    """Halfspace for the raw inequality coeffs . p >= offset.

    Canonicalizing may divide by a negative pivot, in which case the
    stored direction flips so the described set is unchanged.
    """
    cs = tuple(mpq(c) for c in coeffs)
    pivot = next((c for c in cs if c != 0), None)
    if pivot is None:
        raise ValueError("halfspace needs a nonzero coefficient")
    hyp = Hyperplane.canonical(cs, offset, kind)
    return Halfspace(hyp, 1 if pivot > 0 else -1)


def side_of(hyperplane: Hyperplane, inside_point: Point) -> Halfspace:
    """The closed side of ``hyperplane`` containing ``inside_point``.

    The point must not lie on the plane; callers treat that case as a
    failed draw and resample.
    """
    v = hyperplane.value_at(inside_point)
    if v == 0:
        raise ValueError("point lies on the hyperplane, side is undefined")
    return Halfspace(hyperplane, 1 if v > 0 else -1)


def solve_square_system(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[Point]:
    """Exact solution of a square rational system, or None when singular."""
    n = len(matrix)
    rows = [[mpq(x) for x in row] + [mpq(rhs[i])] for i, row in enumerate(matrix)]
    if any(len(row) != n + 1 for row in rows):
        raise ValueError("matrix must be square and match the rhs")
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot_row is None:
            return None
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def rank_of_vectors(vectors: Sequence[Sequence]) -> int:
    """Exact linear rank of a collection of rational vectors."""
    work = [list(map(mpq, v)) for v in vectors]
    if not work:
        return 0
    cols = len(work[0])
    rank = 0
    for col in range(cols):
        pivot_row = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def linearly_independent(points: Sequence[Sequence]) -> bool:
    return rank_of_vectors(points) == len(points)


def hyperplane_from_points(points: Sequence[Point],
                           kind: str = SEPARATING) -> Optional[Hyperplane]:
    """Homogeneous hyperplane {p : c . p = 0} through the given points.

    The coefficient vector spans the null space of the stacked point
    rows, so the points must have rank exactly m-1; otherwise the
    direction is not pinned down and None is returned (the caller
    retries with fresh samples).
    """
    if not points:
        return None
    m = len(points[0])
    work = [list(map(mpq, p)) for p in points]
    pivot_cols: list[int] = []
    rank = 0
    for col in range(m):
        pivot_row = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        pivot_cols.append(col)
        rank += 1
    if rank != m - 1:
        return None
    free_col = next(c for c in range(m) if c not in pivot_cols)
    coeffs = [mpq(0)] * m
    coeffs[free_col] = mpq(1)
    for row_idx, col in enumerate(pivot_cols):
        coeffs[col] = -work[row_idx][free_col]
    return Hyperplane.canonical(coeffs, 0, kind)


class Polytope:
    """Halfspace intersection inside the simplex.

    Construct via :meth:`simplex` so the m boundary constraints
    ``p_i >= 0`` are always present; the affine constraint sum(p) = 1 is
    implicit.  The vertex cache is filled once and then read-only, so a
    constructed polytope is safe to share.
    """

    __slots__ = ("m", "halfspaces", "_vertices")

    def __init__(self, m: int, halfspaces: Iterable[Halfspace]):
        self.m = m
        self.halfspaces = tuple(halfspaces)
        self._vertices: Optional[tuple] = None

    @staticmethod
    def simplex(m: int) -> "Polytope":
        if m < 2:
            raise ValueError("simplex needs at least two coordinates")
        constraints = []
        for i in range(m):
            coeffs = [mpq(0)] * m
            coeffs[i] = mpq(1)
            constraints.append(Halfspace(Hyperplane(tuple(coeffs), mpq(0), BOUNDARY), 1))
        return Polytope(m, constraints)

    def intersect_halfspace(self, hs: Halfspace) -> "Polytope":
        """New polytope with ``hs`` appended; an exact duplicate is a no-op."""
        if hs in self.halfspaces:
            return self
        return Polytope(self.m, self.halfspaces + (hs,))

    def constraint_hyperplanes(self) -> tuple:
        seen: dict = {}
        for hs in self.halfspaces:
            seen.setdefault(hs.hyperplane, None)
        return tuple(seen)

    def contains(self, point: Point) -> bool:
        if sum(point, mpq(0)) != 1:
            return False
        return all(hs.contains(point) for hs in self.halfspaces)

    def strictly_contains(self, point: Point) -> bool:
        """Interior membership: every constraint strict, sum exactly one."""
        if sum(point, mpq(0)) != 1:
            return False
        return all(hs.strictly_contains(point) for hs in self.halfspaces)

    def vertices(self, payoff_bits: Optional[int] = None) -> tuple:
        """All vertices, in deterministic enumeration order.

        When ``payoff_bits`` is given the constraints are promised to
        come from payoffs of that bit-complexity and every vertex is
        checked against the 9*L*m^2 size bound.
        """
        if self._vertices is None:
            self._vertices = self._enumerate()
        if payoff_bits is not None:
            limit = 9 * payoff_bits * self.m * self.m
            for v in self._vertices:
                if vector_bits(v) > limit:
                    raise AssertionViolation(
                        f"vertex {v} has {vector_bits(v)} bits, over 9*L*m^2 = {limit}")
        return self._vertices

    def _enumerate(self) -> tuple:
        m = self.m
        hyps = self.constraint_hyperplanes()
        ones = tuple(mpq(1) for _ in range(m))
        found: dict = {}
        for combo in itertools.combinations(hyps, m - 1):
            matrix = [ones] + [h.coeffs for h in combo]
            rhs = [mpq(1)] + [h.offset for h in combo]
            sol = solve_square_system(matrix, rhs)
            if sol is None:
                continue
            if all(hs.contains(sol) for hs in self.halfspaces):
                found.setdefault(sol, None)
        return tuple(found)

    def has_full_dimension(self) -> bool:
        """True when the polytope has m linearly independent vertices."""
        verts = self.vertices()
        return len(verts) >= self.m and rank_of_vectors(verts) == self.m

    def __repr__(self):
        return f"Polytope(m={self.m}, constraints={len(self.halfspaces)})"


def enumerate_vertices(polytope: Polytope, payoff_bits: Optional[int] = None) -> tuple:
    return polytope.vertices(payoff_bits)


def intersect_halfspace(polytope: Polytope, hs: Halfspace) -> Polytope:
    return polytope.intersect_halfspace(hs)
