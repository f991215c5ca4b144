"""Instance files, generators and run reports.

Instances are JSON with every payoff an exact ``[numerator,
denominator]`` pair.  Reports and transcripts are plain JSON / JSONL so
a run is auditable without this package.
"""
from __future__ import annotations

import json
import math
import random
import sys
from importlib import resources
from math import comb
from pathlib import Path
from typing import Optional

from gmpy2 import mpq

from .errors import DomainError, ParseError
from .learner import LearnOutcome
from .oracle import GameInstance
from .rational import as_pair, rational


def _unlock_big_ints():
    """Transcripts carry exact integers far past CPython's default
    int-to-string guard; lift it before serializing."""
    try:
        if sys.get_int_max_str_digits() != 0:
            sys.set_int_max_str_digits(0)
    except AttributeError:
        pass


def serialize_instance(instance: GameInstance, metadata: Optional[dict] = None) -> dict:
    doc = {
        "m": instance.m,
        "n": instance.n,
        "leader": [[as_pair(x) for x in row] for row in instance.leader],
        "follower": [[as_pair(x) for x in row] for row in instance.follower],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def write_instance(instance: GameInstance, path, metadata: Optional[dict] = None):
    _unlock_big_ints()
    Path(path).write_text(json.dumps(serialize_instance(instance, metadata),
                                     indent=2, sort_keys=True) + "\n")


def _parse_matrix(doc: dict, key: str, m: int, n: int) -> list:
    raw = doc.get(key)
    if not isinstance(raw, list) or len(raw) != m:
        raise ParseError(f"'{key}' must be a list of {m} rows")
    matrix = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"'{key}' row {i} must hold {n} entries")
        parsed = []
        for j, pair in enumerate(row):
            try:
                parsed.append(rational(*_int_pair(pair)))
            except ValueError as exc:
                raise ParseError(f"'{key}'[{i}][{j}]: {exc}") from None
        matrix.append(parsed)
    return matrix


def _int_pair(pair) -> tuple[int, int]:
    if (not isinstance(pair, list) or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
        raise ValueError(f"expected [num, den] integers, got {pair!r}")
    return pair[0], pair[1]


def parse_instance(path) -> GameInstance:
    """Load a game; ParseError for structure, DomainError for bad payoffs."""
    _unlock_big_ints()
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    m, n = doc.get("m"), doc.get("n")
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise ParseError(f"{path}: 'm' and 'n' must be positive integers")
    leader = _parse_matrix(doc, "leader", m, n)
    follower = _parse_matrix(doc, "follower", m, n)
    return GameInstance(leader, follower)


def bundled_instance_path(name: str = "appendix_b") -> Path:
    """Path of an instance file shipped with the package."""
    return Path(resources.files("stacklearn").joinpath(f"data/{name}.json"))


def generate_random(m: int, n: int, bits: int, seed: int) -> GameInstance:
    """Seeded random game with payoffs on a dyadic grid.

    Entries are k / 2^b with b = bits // 2 and k uniform on [0, 2^b], so
    the measured payoff bit-complexity stays within bits + 2.
    """
    if bits < 2:
        raise ValueError("bits must be at least 2")
    b = bits // 2
    rng = random.Random(seed)
    den = 1 << b

    def matrix():
        return [[rational(rng.randint(0, den), den) for _ in range(n)]
                for _ in range(m)]

    leader = matrix()
    follower = matrix()
    return GameInstance(leader, follower)


def generate_with_duplicate_column(m: int, n: int, bits: int, seed: int) -> GameInstance:
    """Random game whose first two follower columns coincide while the
    leader columns differ (exercises leader-side tie-breaking)."""
    if n < 2:
        raise ValueError("need at least two follower actions")
    for attempt in range(64):
        base = generate_random(m, n, bits, seed * 1000 + attempt)
        follower = [list(row) for row in base.follower]
        for i in range(m):
            follower[i][1] = follower[i][0]
        leader = base.leader
        if any(leader[i][0] != leader[i][1] for i in range(m)):
            return GameInstance(leader, follower)
    raise RuntimeError("could not draw distinct leader columns")


def theorem_budget(m: int, n: int, payoff_bits: int, zeta) -> float:
    """Query budget the worst-case analysis allows for one full run."""
    zeta = mpq(zeta)
    return n * n * (m ** 7 * payoff_bits * math.log2(1 / float(zeta))
                    + comb(m + n, m))


def run_report(outcome: LearnOutcome, *, seed: int, zeta, m: int, n: int,
               payoff_bits: int, baseline_value=None) -> dict:
    """Summary record plus the baseline comparison fields."""
    report = outcome.summary(seed=seed, m=m, n=n, payoff_bits=payoff_bits,
                             zeta=zeta)
    if baseline_value is not None:
        report["baseline_value"] = as_pair(baseline_value)
        report["match"] = (outcome.value is not None
                           and outcome.value == baseline_value)
    return report


def write_report(report: dict, path):
    _unlock_big_ints()
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def write_transcript(transcript, path):
    """Line-delimited query log: {"k": index, "p": [[num,den]...], "a": action}."""
    _unlock_big_ints()
    with open(path, "w") as fh:
        for k, (p, a) in enumerate(transcript):
            record = {"k": k, "p": [as_pair(x) for x in p], "a": a}
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_report(path) -> dict:
    _unlock_big_ints()
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}") from None
