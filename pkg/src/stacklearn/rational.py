"""Reduced arbitrary-precision rationals with bit accounting.

gmpy2's ``mpq`` already provides canonical reduced fractions, exact
arithmetic and a total order, so this module only adds the size
bookkeeping all the query-count bounds are stated in: a reduced integer
``z`` costs ``ceil(log2(|z| + 1))`` bits (one bit for zero, sign not
counted), and a fraction costs numerator plus denominator.
"""
from __future__ import annotations

from typing import Iterable

from gmpy2 import mpq

from .errors import AssertionViolation

#: The rational scalar type used everywhere (immutable, hashable, auto-reduced).
Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def rational(numerator, denominator=1) -> Rational:
    """Build a reduced fraction; a zero denominator raises ``ValueError``."""
    try:
        return mpq(numerator, denominator)
    except ZeroDivisionError:
        raise ValueError("denominator must be nonzero") from None


def integer_bits(z) -> int:
    """Bits of one reduced integer: ``ceil(log2(|z|+1))``, and 1 for zero."""
    z = int(z)
    if z == 0:
        return 1
    return abs(z).bit_length()


def bit_complexity(q) -> int:
    """Bits of a reduced fraction: numerator bits plus denominator bits."""
    q = mpq(q)
    return integer_bits(q.numerator) + integer_bits(q.denominator)


def vector_bits(vec: Iterable) -> int:
    """Bit-complexity of a rational vector, the maximum over its entries."""
    return max(bit_complexity(x) for x in vec)


def pow2(exponent: int) -> Rational:
    """Exact 2**exponent for any integer exponent."""
    if exponent >= 0:
        return mpq(1 << exponent)
    return mpq(1, 1 << (-exponent))


def ceil_log2(q) -> int:
    """Smallest integer e with 2**e >= q, for positive rational q."""
    q = mpq(q)
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive value")
    e = q.numerator.bit_length() - q.denominator.bit_length() + 1
    while pow2(e - 1) >= q:
        e -= 1
    return e


def floor_log2(q) -> int:
    """Largest integer e with 2**e <= q, for positive rational q."""
    q = mpq(q)
    if q <= 0:
        raise ValueError("floor_log2 needs a positive value")
    e = q.numerator.bit_length() - q.denominator.bit_length()
    while pow2(e) > q:
        e -= 1
    while pow2(e + 1) <= q:
        e += 1
    return e


def checked_sum(terms: Iterable, bound: int) -> Rational:
    """Exact sum of rationals that each fit in ``bound`` bits.

    The reduced total of m terms must stay within 4*bound bits for a
    pair and 3*m*bound bits in general, and a nonzero total cannot be
    smaller in magnitude than 2**(-bound*m).  Both facts are checked;
    a violation raises :class:`AssertionViolation` because it means the
    size ledger (not the caller) is broken.
    """
    values = [mpq(t) for t in terms]
    if len(values) < 2:
        raise ValueError("checked_sum needs at least two terms")
    for v in values:
        if bit_complexity(v) > bound:
            raise ValueError(f"term {v} exceeds the stated {bound}-bit budget")
    total = ZERO
    for v in values:
        total += v
    m = len(values)
    limit = 4 * bound if m == 2 else 3 * m * bound
    if bit_complexity(total) > limit:
        raise AssertionViolation(
            f"sum of {m} terms at <={bound} bits came out at "
            f"{bit_complexity(total)} bits (limit {limit})")
    if total != 0 and abs(total) < pow2(-bound * m):
        raise AssertionViolation(
            f"nonzero sum {total} smaller than 2^-{bound * m}")
    return total


def as_pair(q) -> list[int]:
    """Serialize one rational as ``[numerator, denominator]``."""
    q = mpq(q)
    return [int(q.numerator), int(q.denominator)]


def from_pair(pair) -> Rational:
    """Parse a ``[numerator, denominator]`` pair back into a rational."""
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"expected a [num, den] pair, got {pair!r}")
    num, den = pair
    if not isinstance(num, int) or not isinstance(den, int):
        raise ValueError(f"numerator and denominator must be integers: {pair!r}")
    return rational(num, den)
