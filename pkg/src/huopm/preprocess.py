"""Database scans that prepare the search.

The first scan gathers per-item support and TWU; the second builds the
UO-lists of the frequent items under the chosen total order.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable, Mapping

from huopm.datamodel import Item, ProfitTable, QuantDatabase
from huopm.errors import ConfigError
from huopm.uolist import FUTable, Node, UOList

# Occupancies within this distance of beta count as meeting it, so that
# summation order (which differs between item orders) cannot flip a tie.
TIE_EPS = 1e-9


@dataclass(frozen=True)
class ItemStats:
    sup: Mapping[Item, int]
    twu: Mapping[Item, float]
    n_transactions: int
    total_utility: float

    @property
    def items(self) -> list[Item]:
        return sorted(self.sup)


class OrderPolicy(str, Enum):
    LEXI = "lexi"
    TWU_ASC = "twu-asc"
    TWU_DESC = "twu-desc"
    SUP_ASC = "sup-asc"
    SUP_DESC = "sup-desc"


@dataclass(frozen=True)
class ItemOrder:
    policy: OrderPolicy
    rank: Mapping[Item, int]

    def sorted(self, items: Iterable[Item]) -> list[Item]:
        return sorted(items, key=self.rank.__getitem__)

    def precedes(self, a: Item, b: Item) -> bool:
        return self.rank[a] < self.rank[b]


@dataclass(frozen=True)
class MiningParams:
    alpha: float
    beta: float
    minsup_count: int

    @classmethod
    def from_thresholds(cls, alpha: float, beta: float, n_transactions: int) -> "MiningParams":
        if not 0 < alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {alpha}")
        if not 0 < beta <= 1:
            raise ConfigError(f"beta must lie in (0, 1], got {beta}")
        minsup = minsup_count(alpha, n_transactions)
        if minsup < 2:
            raise ConfigError(
                f"alpha={alpha} gives a minimum support count of {minsup} on {n_transactions} "
                "transactions; it must be at least 2, otherwise every transaction is itself a "
                "pattern with utility occupancy 1"
            )
        return cls(alpha, beta, minsup)


def minsup_count(alpha: float, n_transactions: int) -> int:
    """``ceil(alpha * n)`` computed on the decimal value of ``alpha``.

    Binary floats would turn ``0.3 * 10`` into ``3.0000000000000004``.
    """
    return math.ceil(Decimal(repr(float(alpha))) * n_transactions)


def scan_stats(db: QuantDatabase) -> ItemStats:
    sup: dict[Item, int] = defaultdict(int)
    twu: dict[Item, float] = defaultdict(float)
    for t in db:
        for item, _ in t.items:
            sup[item] += 1
            twu[item] += t.tu
    return ItemStats(dict(sup), dict(twu), db.n, db.total_utility)


def frequent_items(stats: ItemStats, params: MiningParams) -> frozenset[Item]:
    return frozenset(i for i, s in stats.sup.items() if s >= params.minsup_count)


_ORDER_KEYS = {
    OrderPolicy.LEXI: lambda stats, i: 0,
    OrderPolicy.TWU_ASC: lambda stats, i: stats.twu[i],
    OrderPolicy.TWU_DESC: lambda stats, i: -stats.twu[i],
    OrderPolicy.SUP_ASC: lambda stats, i: stats.sup[i],
    OrderPolicy.SUP_DESC: lambda stats, i: -stats.sup[i],
}


def build_order(stats: ItemStats, policy: OrderPolicy | str = OrderPolicy.SUP_ASC) -> ItemOrder:
    """Rank every item by the policy key; ties go to the smaller name."""
    policy = OrderPolicy(policy)
    key = _ORDER_KEYS[policy]
    ranked = sorted(stats.sup, key=lambda i: (key(stats, i), i))
    return ItemOrder(policy, {item: r for r, item in enumerate(ranked)})


def build_initial_uolists(
    db: QuantDatabase, istar: Iterable[Item], order: ItemOrder, ptable: ProfitTable
) -> dict[Item, Node]:
    """UO-lists and FU-tables of the given frequent items.

    Remaining occupancy only counts items of ``istar``; items outside it can
    never extend a pattern. The transaction utility in every denominator is
    the full one.
    """
    istar = set(istar)
    rank = order.rank
    cols: dict[Item, tuple[list, list, list]] = {i: ([], [], []) for i in istar}
    for t in db:
        present = sorted((rank[i], i, q * ptable[i]) for i, q in t.items if i in istar)
        after = 0.0
        for _, item, u in reversed(present):
            tids, uos, ruos = cols[item]
            tids.append(t.tid)
            uos.append(u / t.tu)
            ruos.append(after / t.tu)
            after += u
    nodes = {}
    for item in order.sorted(istar):
        tids, uos, ruos = cols[item]
        uol = UOList.from_columns((item,), tids, uos, ruos)
        nodes[item] = Node(uol, FUTable((item,), len(tids), math.fsum(uos), math.fsum(ruos)))
    return nodes
