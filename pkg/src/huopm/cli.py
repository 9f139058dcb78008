"""Command-line front end: ``huopm {mine,verify,gen,bench}``.

Exit codes: 0 success, 1 verification divergence, 2 input/format or usage
error, 3 parameter outside its domain.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path
from typing import Sequence

from huopm.datamodel import (
    parse_profit_table,
    parse_transactions,
    serialize_patterns,
    serialize_profit_table,
    serialize_transactions,
)
from huopm.errors import ConfigError, FormatError, HuopmError, ItemAbsentError
from huopm.gen import GenParams, generate
from huopm.oracle import DEFAULT_MAX_ITEMS, evaluate_lattice
from huopm.preprocess import MiningParams, OrderPolicy
from huopm.search import SearchConfig, mine

EXIT_OK = 0
EXIT_DIVERGED = 1
EXIT_INPUT = 2
EXIT_PARAM = 3

ORDERS = [p.value for p in OrderPolicy]
OPTIONAL_STRATEGIES = ("S2", "S3", "S4")
BENCH_CONFIGS = [("S2",), ("S3",), ("S2", "S3"), ("S2", "S3", "S4")]


def _strategies(text: str) -> tuple[str, ...]:
    if text.strip().lower() in ("", "none"):
        return ()
    names = tuple(s.strip().upper() for s in text.split(",") if s.strip())
    bad = [n for n in names if n not in OPTIONAL_STRATEGIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown strategies {bad}; choose from s2,s3,s4")
    return names


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _load(transactions: Path, profits: Path):
    ptable = parse_profit_table(profits.read_text(encoding="utf-8"))
    db = parse_transactions(transactions.read_text(encoding="utf-8"), ptable)
    return db, ptable


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_mine(args) -> int:
    db, ptable = _load(args.transactions, args.profits)
    config = SearchConfig.from_flags(args.strategies, order=args.order)
    patterns, stats = mine(db, ptable, args.alpha, args.beta, config)
    _emit(serialize_patterns(patterns), args.out)
    print(
        f"patterns={len(patterns)} visited_nodes={stats.visited_nodes} joins={stats.joins} "
        f"wall_time={stats.wall_time:.6f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def _all_configs(debug: bool = False):
    for k in range(len(OPTIONAL_STRATEGIES) + 1):
        for names in itertools.combinations(OPTIONAL_STRATEGIES, k):
            for order in OrderPolicy:
                yield SearchConfig.from_flags(names, order=order, debug_assert_bounds=debug)


def verify_instance(db, ptable, alpha: float, beta: float) -> str | None:
    """Compare every strategy/order configuration with the oracle.

    Returns a description of the first divergence, or ``None``.
    """
    params = MiningParams.from_thresholds(alpha, beta, db.n)
    expected = evaluate_lattice(db, ptable, DEFAULT_MAX_ITEMS).select(params.minsup_count, beta)
    want = {p.items: p for p in expected}
    for config in _all_configs(debug=True):
        got, stats = mine(db, ptable, alpha, beta, config)
        have = {p.items: p for p in got}
        label = f"{config.label}/{config.order.value}"
        if stats.violations:
            return f"{label}: {stats.violations[0]}"
        if have.keys() != want.keys():
            missing = sorted(want.keys() - have.keys())
            extra = sorted(have.keys() - want.keys())
            return f"{label}: missing {missing[:3]} extra {extra[:3]}"
        for items, p in have.items():
            q = want[items]
            if p.sup != q.sup or abs(p.uo - q.uo) > 1e-9:
                return f"{label}: {' '.join(items)} mined ({p.sup}, {p.uo!r}) oracle ({q.sup}, {q.uo!r})"
    return None


def cmd_verify(args) -> int:
    instances = []
    if args.fuzz:
        for k in range(args.fuzz):
            seed = args.seed + k
            rng_items = 4 + seed % 9
            params = GenParams(
                n_transactions=10 + seed % 21,
                n_items=rng_items,
                avg_len=min(4.0, rng_items),
                max_quantity=5,
                profit_range=(1.0, 10.0),
                seed=seed,
            )
            db, ptable = generate(params)
            instances.append((f"fuzz seed {seed}", db, ptable))
    if args.transactions is not None:
        if args.profits is None:
            raise ConfigError("verify needs both a transactions and a profits file")
        db, ptable = _load(args.transactions, args.profits)
        instances.insert(0, (str(args.transactions), db, ptable))
    if not instances:
        raise ConfigError("nothing to verify: give input files or --fuzz N")

    for name, db, ptable in instances:
        n_items = len(db.items())
        if n_items > DEFAULT_MAX_ITEMS:
            raise ConfigError(
                f"{name} has {n_items} distinct items, above the oracle cap of {DEFAULT_MAX_ITEMS}; "
                "use 'huopm gen --items N' to make a smaller instance"
            )
        divergence = verify_instance(db, ptable, args.alpha, args.beta)
        if divergence:
            print(f"DIVERGENCE on {name}: {divergence}", file=sys.stderr)
            return EXIT_DIVERGED
    print(f"verified {len(instances)} instance(s): all configurations match the oracle", file=sys.stderr)
    return EXIT_OK


def run_bench(db, ptable, alphas, betas, order=OrderPolicy.SUP_ASC) -> tuple[list[dict], list[str]]:
    """One row per (alpha, beta, config); also returns failed self-checks."""
    rows, problems = [], []
    for alpha in alphas:
        for beta in betas:
            group = {}
            for names in BENCH_CONFIGS:
                config = SearchConfig.from_flags(names, order=order)
                patterns, stats = mine(db, ptable, alpha, beta, config)
                row = dict(
                    alpha=alpha,
                    beta=beta,
                    config=config.label,
                    patterns=len(patterns),
                    visited_nodes=stats.visited_nodes,
                    joins=stats.joins,
                    wall_ms=stats.wall_time * 1000.0,
                )
                rows.append(row)
                group[config.label] = row
            cell = f"alpha={alpha} beta={beta}"
            if len({r["patterns"] for r in group.values()}) != 1:
                problems.append(f"{cell}: pattern counts differ across configs")
            visited = {k: r["visited_nodes"] for k, r in group.items()}
            if not visited["P123"] <= visited["P13"]:
                problems.append(f"{cell}: P123 visited more nodes than P13")
            if not visited["P123"] <= visited["P12"]:
                problems.append(f"{cell}: P123 visited more nodes than P12")
            if visited["P123"] != visited["P1234"]:
                problems.append(f"{cell}: P123 and P1234 visited different node counts")
    return rows, problems


def format_bench_csv(rows: list[dict]) -> str:
    lines = ["alpha,beta,config,patterns,visited_nodes,joins,wall_ms"]
    for r in rows:
        lines.append(
            f"{r['alpha']!r},{r['beta']!r},{r['config']},{r['patterns']},"
            f"{r['visited_nodes']},{r['joins']},{r['wall_ms']:.3f}"
        )
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    db, ptable = _load(args.transactions, args.profits)
    rows, problems = run_bench(db, ptable, args.alpha, args.beta, args.order)
    _emit(format_bench_csv(rows), args.out)
    for problem in problems:
        print(f"CHECK FAILED {problem}", file=sys.stderr)
    return EXIT_DIVERGED if problems else EXIT_OK


def cmd_gen(args) -> int:
    params = GenParams(
        n_transactions=args.transactions,
        n_items=args.items,
        avg_len=args.avg_len,
        max_quantity=args.max_quantity,
        profit_range=(args.profit_low, args.profit_high),
        seed=args.seed,
    )
    db, ptable = generate(params)
    Path(args.out_transactions).write_text(serialize_transactions(db), encoding="utf-8")
    Path(args.out_profits).write_text(serialize_profit_table(ptable), encoding="utf-8")
    print(f"wrote {db.n} transactions over {len(ptable)} items", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="huopm", description="High utility occupancy pattern mining")
    sub = parser.add_subparsers(dest="command", required=True)

    def thresholds(p, alpha_default=None, beta_default=None):
        p.add_argument("--alpha", type=float, required=alpha_default is None, default=alpha_default,
                       help="minimum support as a fraction of |D|, in (0, 1]")
        p.add_argument("--beta", type=float, required=beta_default is None, default=beta_default,
                       help="minimum utility occupancy, in (0, 1]")

    p = sub.add_parser("mine", help="mine patterns and print them")
    p.add_argument("transactions", type=Path)
    p.add_argument("profits", type=Path)
    thresholds(p)
    p.add_argument("--strategies", type=_strategies, default=OPTIONAL_STRATEGIES,
                   help="comma list from s2,s3,s4 (s1 is always on); default all")
    p.add_argument("--order", choices=ORDERS, default=OrderPolicy.SUP_ASC.value)
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("verify", help="check every configuration against the brute-force oracle")
    p.add_argument("transactions", type=Path, nargs="?")
    p.add_argument("profits", type=Path, nargs="?")
    thresholds(p, 0.2, 0.3)
    p.add_argument("--fuzz", type=int, default=0, metavar="N", help="also check N seeded random instances")
    p.add_argument("--seed", type=int, default=0, help="first fuzz seed")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare pruning strategy configurations")
    p.add_argument("transactions", type=Path)
    p.add_argument("profits", type=Path)
    p.add_argument("--alpha", type=_float_list, required=True, help="comma list of alphas")
    p.add_argument("--beta", type=_float_list, required=True, help="comma list of betas")
    p.add_argument("--order", choices=ORDERS, default=OrderPolicy.SUP_ASC.value)
    p.add_argument("-o", "--out", help="CSV output file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a seeded synthetic database")
    p.add_argument("--transactions", type=_positive_int, default=100)
    p.add_argument("--items", type=_positive_int, default=10)
    p.add_argument("--avg-len", type=float, default=4.0)
    p.add_argument("--max-quantity", type=_positive_int, default=5)
    p.add_argument("--profit-low", type=float, default=1.0)
    p.add_argument("--profit-high", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-transactions", required=True)
    p.add_argument("--out-profits", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FormatError, ItemAbsentError, OSError) as exc:
        print(f"huopm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"huopm: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except HuopmError as exc:
        print(f"huopm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
