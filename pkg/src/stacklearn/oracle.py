"""Game instances and the metered best-response oracle.

The oracle is the only channel between a learner and the game: it maps a
committed mixed strategy to the follower's best response, breaking
follower ties in the leader's favor and any residual tie by lowest
action index, and it counts every call.  The follower payoff matrix is
hidden state; the leader's own payoffs, the action counts and the payoff
bit-complexity are public knowledge.

Best responses are computed on integer rescalings of the payoff columns
so a query costs m*n big-integer multiplies, no rational reductions.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError
from .rational import bit_complexity

Strategy = tuple  # tuple of mpq summing to one


def mixed_strategy(values: Iterable) -> Strategy:
    """Validate and normalize a strategy vector."""
    p = tuple(mpq(v) for v in values)
    if any(x < 0 for x in p):
        raise ValueError("strategy entries must be nonnegative")
    if sum(p, mpq(0)) != 1:
        raise ValueError("strategy entries must sum to exactly one")
    return p


def _scaled_columns(matrix: Sequence[Sequence], m: int, n: int):
    """Clear denominators: returns (den, cols) with cols[j][i] integral."""
    den = mpz(1)
    for row in matrix:
        for x in row:
            den = gmpy2.lcm(den, x.denominator)
    cols = []
    for j in range(n):
        cols.append(tuple(mpz(matrix[i][j].numerator * (den // matrix[i][j].denominator))
                          for i in range(m)))
    return den, cols


class GameInstance:
    """Normal-form game with rational payoffs in [0, 1].

    ``follower_bits`` is the maximum entry bit-complexity of the
    follower matrix; ``joint_bits`` takes both matrices into account
    (used when equivalent follower actions are in play).
    """

    __slots__ = ("m", "n", "leader", "follower", "follower_bits", "leader_bits",
                 "joint_bits", "_f_cols", "_l_cols")

    def __init__(self, leader: Sequence[Sequence], follower: Sequence[Sequence]):
        self.leader = tuple(tuple(mpq(x) for x in row) for row in leader)
        self.follower = tuple(tuple(mpq(x) for x in row) for row in follower)
        self.m = len(self.leader)
        if self.m == 0 or len(self.follower) != self.m:
            raise DomainError("leader and follower matrices need the same row count")
        self.n = len(self.leader[0])
        for matrix, owner in ((self.leader, "leader"), (self.follower, "follower")):
            for row in matrix:
                if len(row) != self.n:
                    raise DomainError(f"{owner} matrix is ragged")
                for x in row:
                    if x < 0 or x > 1:
                        raise DomainError(f"{owner} payoff {x} outside [0, 1]")
        self.follower_bits = max(bit_complexity(x) for row in self.follower for x in row)
        self.leader_bits = max(bit_complexity(x) for row in self.leader for x in row)
        self.joint_bits = max(self.follower_bits, self.leader_bits)
        _, self._f_cols = _scaled_columns(self.follower, self.m, self.n)
        _, self._l_cols = _scaled_columns(self.leader, self.m, self.n)

    def payoff_bits(self, mode: str = "standard") -> int:
        return self.joint_bits if mode == "equivalent" else self.follower_bits

    def __eq__(self, other):
        return (isinstance(other, GameInstance)
                and self.leader == other.leader and self.follower == other.follower)

    def __hash__(self):
        return hash((self.leader, self.follower))

    def __repr__(self):
        return f"GameInstance(m={self.m}, n={self.n}, L={self.follower_bits})"


def _integer_profile(p: Strategy):
    """Common-denominator integer view of a strategy."""
    den = mpz(1)
    for x in p:
        den = gmpy2.lcm(den, x.denominator)
    return tuple(mpz(x.numerator * (den // x.denominator)) for x in p)


def best_response(instance: GameInstance, p: Strategy) -> int:
    """Tie-broken follower best response at commitment ``p``.

    Maximizes follower expected utility; among follower optima,
    maximizes leader expected utility; any remaining tie goes to the
    lowest action index.  All comparisons are exact.
    """
    nums = _integer_profile(p)
    m = instance.m
    scores = []
    for col in instance._f_cols:
        s = mpz(0)
        for i in range(m):
            s += nums[i] * col[i]
        scores.append(s)
    top = max(scores)
    tied = [j for j, s in enumerate(scores) if s == top]
    if len(tied) == 1:
        return tied[0]
    best_j = tied[0]
    best_leader = None
    for j in tied:
        col = instance._l_cols[j]
        s = mpz(0)
        for i in range(m):
            s += nums[i] * col[i]
        if best_leader is None or s > best_leader:
            best_leader = s
            best_j = j
    return best_j


def leader_value(instance: GameInstance, p: Strategy):
    """Exact leader expected utility under the tie-broken best response."""
    a = best_response(instance, p)
    total = mpq(0)
    for i in range(instance.m):
        total += p[i] * instance.leader[i][a]
    return total


class QueryOracle:
    """Metered best-response interface over a hidden instance.

    A fixed strategy always yields the same answer, so the oracle is a
    pure function plus a counter.  Recording the full transcript is
    optional because long runs would otherwise hold every queried point
    in memory; the count is always maintained.
    """

    def __init__(self, instance: GameInstance, record: bool = False):
        self._instance = instance
        self.query_count = 0
        self.transcript: Optional[list] = [] if record else None

    @property
    def m(self) -> int:
        return self._instance.m

    @property
    def n(self) -> int:
        return self._instance.n

    @property
    def follower_bits(self) -> int:
        return self._instance.follower_bits

    @property
    def joint_bits(self) -> int:
        return self._instance.joint_bits

    @property
    def leader_payoffs(self) -> tuple:
        return self._instance.leader

    def payoff_bits(self, mode: str = "standard") -> int:
        return self._instance.payoff_bits(mode)

    def query(self, p: Strategy) -> int:
        a = best_response(self._instance, p)
        self.query_count += 1
        if self.transcript is not None:
            self.transcript.append((p, a))
        return a
