import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

import stacklearn as sl


@pytest.fixture(scope="session")
def demo_instance():
    """The bundled cyclic 3x3 game with identity leader payoffs."""
    return sl.parse_instance(sl.bundled_instance_path())


def make_instance(leader_rows, follower_rows):
    return sl.GameInstance(
        [[mpq(x) for x in row] for row in leader_rows],
        [[mpq(x) for x in row] for row in follower_rows])


def has_duplicate_follower_columns(instance) -> bool:
    cols = [tuple(instance.follower[i][j] for i in range(instance.m))
            for j in range(instance.n)]
    return len(set(cols)) != len(cols)


def standard_instance(m, n, bits, seed):
    """Random game without coinciding follower columns (the standing
    assumption outside equivalent-actions mode)."""
    for salt in range(64):
        inst = sl.generate_random(m, n, bits, seed + 7919 * salt)
        if not has_duplicate_follower_columns(inst):
            return inst
    raise RuntimeError("could not draw distinct follower columns")


def random_strategy(rng, m, grain=64):
    """Low-complexity random point of the simplex."""
    while True:
        weights = [rng.randint(0, grain) for _ in range(m)]
        total = sum(weights)
        if total:
            return sl.mixed_strategy([mpq(w, total) for w in weights])


def as_fractions(point):
    return tuple(Fraction(int(x.numerator), int(x.denominator)) for x in point)
