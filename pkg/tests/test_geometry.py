import itertools
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

import stacklearn as sl
from stacklearn.geometry import (BOUNDARY, Halfspace, Hyperplane, Polytope,
                                 dot, halfspace, hyperplane_from_points,
                                 linearly_independent, rank_of_vectors,
                                 solve_square_system)
from stacklearn.errors import AssertionViolation

from conftest import standard_instance


def test_solve_identity():
    sol = solve_square_system([[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                              [mpq(1, 2), mpq(1, 3), mpq(1, 6)])
    assert sol == (mpq(1, 2), mpq(1, 3), mpq(1, 6))


def test_solve_hand_checked_system():
    # rows: sum to one, first two coordinates equal, third zero
    sol = solve_square_system([[1, 1, 1], [1, -1, 0], [0, 0, 1]], [1, 0, 0])
    assert sol == (mpq(1, 2), mpq(1, 2), mpq(0))


def test_solve_singular():
    assert solve_square_system([[1, 2], [1, 2]], [1, 1]) is None


def _fraction_vertices(constraints, m):
    """Independent vertex enumeration over Fraction: every (m-1)-subset of
    the constraint planes plus the sum row, solved by hand elimination."""
    def solve(rows, rhs):
        work = [[Fraction(x) for x in row] + [Fraction(b)]
                for row, b in zip(rows, rhs)]
        n = len(work)
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col] != 0), None)
            if piv is None:
                return None
            work[col], work[piv] = work[piv], work[col]
            work[col] = [x / work[col][col] for x in work[col]]
            for r in range(n):
                if r != col and work[r][col] != 0:
                    f = work[r][col]
                    work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return tuple(work[i][n] for i in range(n))

    found = set()
    for combo in itertools.combinations(constraints, m - 1):
        rows = [[Fraction(1)] * m] + [list(c) for c, _ in combo]
        rhs = [Fraction(1)] + [Fraction(b) for _, b in combo]
        sol = solve(rows, rhs)
        if sol is None:
            continue
        if any(x < 0 for x in sol):
            continue
        if all(sum(Fraction(ci) * x for ci, x in zip(c, sol)) >= b
               for c, b in constraints):
            found.add(sol)
    return found


def _appendix_region_zero():
    region = Polytope.simplex(3)
    region = region.intersect_halfspace(halfspace((-1, 1, 0)))  # p2 >= p1
    region = region.intersect_halfspace(halfspace((0, 1, -1)))  # p2 >= p3
    return region


def test_simplex_corners():
    assert set(Polytope.simplex(3).vertices()) == {
        (mpq(1), mpq(0), mpq(0)), (mpq(0), mpq(1), mpq(0)), (mpq(0), mpq(0), mpq(1))}


def test_region_vertices_against_independent_enumeration():
    region = _appendix_region_zero()
    constraints = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0),
                   ((-1, 1, 0), 0), ((0, 1, -1), 0)]
    expected = _fraction_vertices(constraints, 3)
    got = {tuple(Fraction(int(x.numerator), int(x.denominator)) for x in v)
           for v in region.vertices()}
    assert got == expected
    assert got == {
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(1, 2), Fraction(1, 2), Fraction(0)),
        (Fraction(0), Fraction(1, 2), Fraction(1, 2)),
        (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))}


def test_empty_polytope():
    empty = Polytope.simplex(3).intersect_halfspace(halfspace((1, 0, 0), 2))
    assert empty.vertices() == ()


def test_intersect_is_idempotent():
    region = Polytope.simplex(3)
    cut = halfspace((1, -1, 0))
    once = region.intersect_halfspace(cut)
    assert once.intersect_halfspace(cut) is once
    # a simplex boundary is already present
    dup = halfspace((0, 0, 1), 0, BOUNDARY)
    assert region.intersect_halfspace(dup) is region


def test_intersect_vertices_cross_checked():
    cut = Polytope.simplex(3).intersect_halfspace(halfspace((1, -1, 0)))
    constraints = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((1, -1, 0), 0)]
    expected = _fraction_vertices(constraints, 3)
    got = {tuple(Fraction(int(x.numerator), int(x.denominator)) for x in v)
           for v in cut.vertices()}
    assert got == expected


def test_intersect_never_enlarges():
    for trial in range(25):
        inst = standard_instance(3, 3, 6, 200 + trial)
        region = Polytope.simplex(3)
        for hs in sl.true_regions(inst)[0].halfspaces:
            before = region
            region = region.intersect_halfspace(hs)
            for v in region.vertices():
                assert before.contains(v)


def test_vertex_order_insensitive_to_constraint_order():
    inst = standard_instance(3, 3, 6, 5)
    region = sl.true_regions(inst)[0]
    permuted = Polytope(3, tuple(reversed(region.halfspaces)))
    assert set(region.vertices()) == set(permuted.vertices())


def test_vertex_bit_budget_random_games():
    # region vertices stay within 9*L*m^2 bits
    for trial in range(60):
        m, n = 3 if trial % 2 else 4, 3 if trial % 3 else 4
        inst = standard_instance(m, n, 6, 300 + trial)
        for region in sl.true_regions(inst).values():
            region.vertices(payoff_bits=inst.follower_bits)


def test_hyperplane_from_points_examples():
    hyp = hyperplane_from_points([(mpq(9, 26), mpq(9, 26), mpq(4, 13)),
                                  (mpq(1, 2), mpq(1, 2), mpq(0))])
    assert hyp == Hyperplane.canonical((1, -1, 0))
    assert hyperplane_from_points([(mpq(1), mpq(1), mpq(0)),
                                   (mpq(2), mpq(2), mpq(0))]) is None
    assert hyperplane_from_points([(mpq(1), mpq(0))]) == Hyperplane.canonical((0, 1))


def test_hyperplane_from_points_scale_invariant():
    rng = random.Random(6)
    for _ in range(50):
        pts = [(mpq(rng.randint(1, 9)), mpq(rng.randint(1, 9)), mpq(rng.randint(1, 9)))
               for _ in range(2)]
        base = hyperplane_from_points(pts)
        if base is None:
            continue
        scale = mpq(rng.randint(1, 7), rng.randint(1, 7))
        scaled = hyperplane_from_points([tuple(scale * x for x in p) for p in pts])
        assert scaled == base


def test_linear_independence():
    assert linearly_independent([(1, 0, 0), (0, 1, 0)])
    assert not linearly_independent([(1, 1, 0), (2, 2, 0)])
    assert rank_of_vectors([(1, 0), (0, 1), (1, 1)]) == 2


def test_canonical_form_first_nonzero_positive():
    hyp = Hyperplane.canonical((-2, 4, 0))
    assert hyp.coeffs == (mpq(1), mpq(-2), mpq(0))
    with pytest.raises(ValueError):
        Hyperplane.canonical((0, 0, 0))


def test_vertex_bit_assertion_fires():
    region = Polytope.simplex(2).intersect_halfspace(
        halfspace((1 << 40, -1), 0))
    with pytest.raises(AssertionViolation):
        region.vertices(payoff_bits=2)
