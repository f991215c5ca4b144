"""Command-line interface: generate, learn, verify, benchmark, sweep.

Relative output paths are placed under $STACKLEARN_OUT when that
variable is set.  Exit codes: 0 success, 1 any error, 2 verification
mismatch.
"""
from __future__ import annotations

import argparse
import csv
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from gmpy2 import mpq

from .baseline import brute_force_optimal, naive_binary_search_queries, segment_crossings
from .errors import DomainError, ParseError
from .learner import EQUIVALENT, STANDARD, LearnerConfig, learn
from .oracle import QueryOracle, best_response, mixed_strategy
from .rational import as_pair, pow2
from .search import binary_search
from .workbench import (generate_random, parse_instance, read_report,
                        run_report, theorem_budget, write_instance,
                        write_report, write_transcript)


def _out_path(raw: str) -> Path:
    path = Path(raw)
    if not path.is_absolute():
        base = os.environ.get("STACKLEARN_OUT")
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_gen(args) -> int:
    instance = generate_random(args.m, args.n, args.bits, args.seed)
    write_instance(instance, _out_path(args.out),
                   metadata={"seed": args.seed, "bits": args.bits})
    print(f"wrote {args.m}x{args.n} instance (L={instance.follower_bits}) to {args.out}")
    return 0


def _cmd_learn(args) -> int:
    instance = parse_instance(args.instance)
    mode = EQUIVALENT if args.equivalent_actions else STANDARD
    zeta = mpq(args.zeta)
    oracle = QueryOracle(instance, record=args.out_transcript is not None)
    config = LearnerConfig(zeta=zeta, mode=mode)
    outcome = learn(oracle, config, random.Random(args.seed))
    report = run_report(outcome, seed=args.seed, zeta=zeta, m=instance.m,
                        n=instance.n, payoff_bits=instance.payoff_bits(mode))
    report["mode"] = mode
    out_report = args.out_report or f"{Path(args.instance).stem}.report.json"
    write_report(report, _out_path(out_report))
    if args.out_transcript:
        write_transcript(oracle.transcript, _out_path(args.out_transcript))
    value = report["value"]
    print(f"learned value {value} with {outcome.query_count} queries "
          f"(success={outcome.success}); report: {out_report}")
    return 0


def _cmd_verify(args) -> int:
    instance = parse_instance(args.instance)
    report = read_report(args.report)
    mode = report.get("mode", STANDARD)
    _, base_value = brute_force_optimal(instance, mode)
    match = report.get("value") == as_pair(base_value)
    report["baseline_value"] = as_pair(base_value)
    report["match"] = match
    write_report(report, Path(args.report))
    print(f"baseline value {as_pair(base_value)}, match={match}")
    return 0 if match else 2


def _canonical_segment(instance, exponent: int):
    """The demonstration segment: one endpoint needs 'exponent' bits."""
    eps = pow2(-exponent)
    third = mpq(1, 3)
    p1 = mixed_strategy((third - eps, third + eps, third))
    p2 = mixed_strategy((mpq(1, 2), mpq(1, 10), mpq(2, 5)))
    return p1, p2


def _cmd_bench(args) -> int:
    instance = parse_instance(args.instance)
    if instance.m != 3 or instance.n != 3:
        raise DomainError("the halving benchmark needs the bundled 3x3 instance shape")
    exponents = [int(tok) for tok in args.eps_exponents.split(",") if tok]
    bounded_anchor = mixed_strategy((mpq(1, 4), mpq(1, 2), mpq(1, 4)))
    rows = []
    for k in exponents:
        p1, p2 = _canonical_segment(instance, k)
        target_action = best_response(instance, p1)
        if best_response(instance, p2) == target_action:
            raise DomainError("benchmark segment endpoints share a best response")
        crossings = segment_crossings(instance, p1, p2)
        positive = {h: lam for h, lam in crossings.items() if lam > 0}
        if not positive:
            raise DomainError("benchmark segment crosses no hyperplane")
        target_hyperplane = min(positive, key=positive.get)
        naive = naive_binary_search_queries(instance, p1, p2, target_hyperplane)
        if best_response(instance, bounded_anchor) != target_action:
            raise DomainError("bounded-bit anchor answers a different action")
        oracle = QueryOracle(instance)
        result = binary_search(oracle, target_action, bounded_anchor, p2)
        rows.append({"k": k, "naive_queries": naive,
                     "bounded_queries": result.queries})
        print(f"k={k:3d}  naive={naive:5d}  bounded={result.queries}")
    if args.out:
        import json
        _out_path(args.out).write_text(
            json.dumps({"rows": rows}, indent=2, sort_keys=True) + "\n")
    return 0


def _parse_range(spec: str) -> list[int]:
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def _sweep_row(m: int, n: int, bits: int, seed: int, zeta_str: str,
               mode: str) -> dict:
    instance = generate_random(m, n, bits, seed)
    zeta = mpq(zeta_str)
    oracle = QueryOracle(instance)
    outcome = learn(oracle, LearnerConfig(zeta=zeta, mode=mode),
                    random.Random(seed))
    _, base_value = brute_force_optimal(instance, mode)
    payoff_bits = instance.payoff_bits(mode)
    return {
        "m": m, "n": n, "bits": bits, "seed": seed,
        "L": payoff_bits, "zeta": zeta_str,
        "queries": outcome.query_count,
        "budget": f"{theorem_budget(m, n, payoff_bits, zeta):.1f}",
        "learned_value": "" if outcome.value is None else str(outcome.value),
        "baseline_value": str(base_value),
        "match": int(outcome.value == base_value),
        "success": int(outcome.success),
    }


_SWEEP_COLUMNS = ["m", "n", "bits", "seed", "L", "zeta", "queries", "budget",
                  "learned_value", "baseline_value", "match", "success"]


def _cmd_sweep(args) -> int:
    tasks = [(m, n, args.bits, args.seed + r, args.zeta, STANDARD)
             for m in _parse_range(args.m_range)
             for n in _parse_range(args.n_range)
             for r in range(args.runs)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, *zip(*tasks)))
    else:
        rows = [_sweep_row(*task) for task in tasks]
    out = _out_path(args.out)
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    matches = sum(r["match"] for r in rows)
    print(f"{len(rows)} runs, {matches} matching baseline; wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stacklearn",
        description="Learn optimal Stackelberg commitments from best-response queries")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--bits", type=int, default=8)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    lrn = sub.add_parser("learn", help="run the learner on an instance")
    lrn.add_argument("--instance", required=True)
    lrn.add_argument("--zeta", default="0.1")
    lrn.add_argument("--seed", type=int, default=0)
    lrn.add_argument("--out-report")
    lrn.add_argument("--out-transcript")
    lrn.add_argument("--equivalent-actions", action="store_true")
    lrn.set_defaults(func=_cmd_learn)

    ver = sub.add_parser("verify", help="recompute the baseline and set the match flag")
    ver.add_argument("--instance", required=True)
    ver.add_argument("--report", required=True)
    ver.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench-exp-binary",
                           help="meter uncontrolled vs bounded-bit halving")
    bench.add_argument("--instance", required=True)
    bench.add_argument("--eps-exponents", default="10,20,40")
    bench.add_argument("--out")
    bench.set_defaults(func=_cmd_bench)

    sweep = sub.add_parser("sweep", help="query counts over random instances, as CSV")
    sweep.add_argument("--m-range", default="3")
    sweep.add_argument("--n-range", default="3")
    sweep.add_argument("--bits", type=int, default=8)
    sweep.add_argument("--zeta", default="0.1")
    sweep.add_argument("--runs", type=int, default=10)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
