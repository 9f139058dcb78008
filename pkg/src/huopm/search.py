"""Depth-first search of the frequency-utility tree.

The tree is implicit: each call of :func:`huop_search` handles the
1-extensions of one prefix, all sorted by the total order, and recurses
into the extensions it keeps. Four pruning strategies can be toggled:

* ``S1`` - skip nodes whose support is below the minimum (always on);
* ``S2`` - skip the subtree of a node whose occupancy upper bound is below beta;
* ``S3`` - abandon a join once the first parent's unmatched entries make the
  minimum support unreachable;
* ``S4`` - drop joined children below the minimum support before recursing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from huopm.datamodel import Pattern, ProfitTable, QuantDatabase
from huopm.errors import ConfigError, ContractError
from huopm.preprocess import (
    MiningParams,
    TIE_EPS,
    OrderPolicy,
    build_initial_uolists,
    build_order,
    frequent_items,
    scan_stats,
)
from huopm.uolist import Node, UOList, construct

ALL_STRATEGIES = frozenset({"S1", "S2", "S3", "S4"})

# Subtrees are pruned only when the bound misses beta by more than the
# emission tolerance plus float noise.
BOUND_SLACK = 2 * TIE_EPS
ASSERT_SLACK = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    strategies: frozenset[str] = ALL_STRATEGIES
    order: OrderPolicy = OrderPolicy.SUP_ASC
    debug_assert_bounds: bool = False

    def __post_init__(self):
        strategies = frozenset(s.upper() for s in self.strategies)
        unknown = strategies - ALL_STRATEGIES
        if unknown:
            raise ConfigError(f"unknown strategies {sorted(unknown)}")
        if "S1" not in strategies:
            raise ConfigError("support pruning (S1) cannot be disabled")
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "order", OrderPolicy(self.order))

    @classmethod
    def from_flags(cls, names: Iterable[str] = ("S2", "S3", "S4"), **kwargs) -> "SearchConfig":
        """Build a config from the optional strategies; S1 is implied."""
        return cls(frozenset({"S1", *names}), **kwargs)

    @property
    def label(self) -> str:
        """Ablation name such as ``P123``."""
        return "P" + "".join(sorted(s[1:] for s in self.strategies))

    def uses(self, strategy: str) -> bool:
        return strategy in self.strategies


@dataclass
class SearchStats:
    visited_nodes: int = 0
    joins: int = 0
    pruned_by_bound: int = 0
    pruned_by_support: int = 0
    wall_time: float = 0.0
    # Filled only in debug mode.
    checks: int = 0
    violations: list[str] = field(default_factory=list)


def upper_bound(uol: UOList, minsup_count: int) -> float:
    """Mean of the ``minsup_count`` largest ``uo + ruo`` values of the list.

    No pattern in the subtree below this node can have a higher utility
    occupancy, since it is supported by at least ``minsup_count`` of these
    transactions and in each one its occupancy is at most ``uo + ruo``.
    """
    if minsup_count < 1 or len(uol) < minsup_count:
        raise ContractError(
            f"upper bound of {uol.pattern} needs {minsup_count} entries, list has {len(uol)}"
        )
    if isinstance(uol.uo, np.ndarray):
        v = np.sort(uol.uo + uol.ruo)[::-1]
        return float(v[:minsup_count].sum()) / minsup_count
    v = sorted((u + r for u, r in zip(uol.uo, uol.ruo)), reverse=True)
    return sum(v[:minsup_count]) / minsup_count


@dataclass
class _Frame:
    """Debug bookkeeping for one node on the current path."""

    pattern: tuple
    sup: int
    bound: float


def huop_search(
    prefix: Optional[Node],
    extensions: list[Node],
    params: MiningParams,
    config: SearchConfig,
    stats: SearchStats,
    out: list[Pattern],
    _path: tuple[_Frame, ...] = (),
) -> None:
    minsup, beta = params.minsup_count, params.beta
    use_bound = config.uses("S2")
    debug = config.debug_assert_bounds
    for ia, xa in enumerate(extensions):
        sup = xa.fut.sup
        if sup < minsup:
            continue
        uo = xa.fut.sum_uo / sup
        if uo >= beta - TIE_EPS:
            out.append(Pattern(tuple(sorted(xa.uol.pattern)), sup, uo))
            if debug:
                _check_emitted(xa, uo, _path, stats)

        bound = upper_bound(xa.uol, minsup) if use_bound or debug else None
        if debug:
            _check_edge(xa, bound, _path, stats)
        if use_bound and bound < beta - BOUND_SLACK:
            stats.pruned_by_bound += 1
            continue

        children = []
        for xb in extensions[ia + 1:]:
            stats.joins += 1
            stats.visited_nodes += 1
            child = construct(prefix, xa, xb, minsup, remaining_support=config.uses("S3"))
            if child is None:
                stats.pruned_by_support += 1
                continue
            if child.fut.sup == 0:
                continue
            if config.uses("S4") and child.fut.sup < minsup:
                stats.pruned_by_support += 1
                continue
            children.append(child)
        if children:
            frames = _path + (_Frame(xa.uol.pattern, sup, bound),) if debug else _path
            huop_search(xa, children, params, config, stats, out, frames)


def _check_emitted(node: Node, uo: float, path: tuple[_Frame, ...], stats: SearchStats) -> None:
    for frame in path:
        stats.checks += 1
        if uo > frame.bound + ASSERT_SLACK:
            stats.violations.append(
                f"uo{node.uol.pattern}={uo!r} exceeds the bound {frame.bound!r} of ancestor {frame.pattern}"
            )


def _check_edge(node: Node, bound: float, path: tuple[_Frame, ...], stats: SearchStats) -> None:
    if not path:
        return
    parent = path[-1]
    stats.checks += 2
    if bound > parent.bound + ASSERT_SLACK:
        stats.violations.append(
            f"bound of {node.uol.pattern}={bound!r} exceeds parent {parent.pattern} bound {parent.bound!r}"
        )
    if node.fut.sup > parent.sup:
        stats.violations.append(
            f"sup{node.uol.pattern}={node.fut.sup} exceeds parent {parent.pattern} sup {parent.sup}"
        )


def mine(
    db: QuantDatabase,
    ptable: ProfitTable,
    alpha: float,
    beta: float,
    config: SearchConfig | None = None,
) -> tuple[list[Pattern], SearchStats]:
    """All itemsets with ``sup >= ceil(alpha*|D|)`` and ``uo >= beta``.

    The result is sorted by item tuple and does not depend on the enabled
    strategies or the item order; only the stats do.
    """
    config = config or SearchConfig()
    params = MiningParams.from_thresholds(alpha, beta, db.n)
    stats = SearchStats()
    start = time.perf_counter()

    item_stats = scan_stats(db)
    istar = frequent_items(item_stats, params)
    order = build_order(item_stats, config.order)
    roots = list(build_initial_uolists(db, istar, order, ptable).values())
    stats.visited_nodes += len(roots)
    stats.pruned_by_support += len(item_stats.sup) - len(istar)

    out: list[Pattern] = []
    huop_search(None, roots, params, config, stats, out)
    out.sort()
    stats.wall_time = time.perf_counter() - start
    return out, stats
