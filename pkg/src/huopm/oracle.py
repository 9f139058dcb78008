"""Brute-force reference miner.

Every non-empty itemset over the distinct items is evaluated straight from
the raw utilities: support by subset testing, utility occupancy as the mean
of ``u(X, t) / tu(t)`` over the supporting transactions. Nothing is pruned
and no UO-list is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from huopm.datamodel import Item, Pattern, ProfitTable, QuantDatabase, itemset_utility_in_tx
from huopm.errors import ConfigError
from huopm.preprocess import TIE_EPS, MiningParams

DEFAULT_MAX_ITEMS = 16
_CHUNK = 4096


@dataclass(frozen=True)
class OracleResult:
    patterns: list[Pattern]
    enumerated: int


@dataclass(frozen=True)
class Lattice:
    """Support and utility occupancy of every non-empty itemset."""

    items: tuple[Item, ...]
    sup: np.ndarray  # indexed by bitmask; entry 0 is the empty set
    uo: np.ndarray  # NaN where sup == 0

    def itemset(self, mask: int) -> tuple[Item, ...]:
        return tuple(item for bit, item in enumerate(self.items) if mask >> bit & 1)

    def select(self, minsup_count: int, beta: float) -> list[Pattern]:
        keep = (self.sup >= minsup_count) & (self.uo >= beta - TIE_EPS)
        keep[0] = False
        return sorted(
            Pattern(self.itemset(int(m)), int(self.sup[m]), float(self.uo[m])) for m in np.flatnonzero(keep)
        )


def evaluate_lattice(db: QuantDatabase, ptable: ProfitTable, max_items: int = DEFAULT_MAX_ITEMS) -> Lattice:
    items = tuple(sorted(db.items()))
    m = len(items)
    if m > max_items:
        raise ConfigError(
            f"database has {m} distinct items; the brute-force oracle is capped at {max_items}"
        )
    bit = {item: b for b, item in enumerate(items)}
    tx_masks = np.zeros(db.n, dtype=np.int64)
    util = np.zeros((db.n, m))
    tu = np.empty(db.n)
    for row, t in enumerate(db):
        for item, q in t.items:
            tx_masks[row] |= 1 << bit[item]
            util[row, bit[item]] = q * ptable[item]
        tu[row] = t.tu
    share = util / tu[:, None]

    n_sets = 1 << m
    sup = np.zeros(n_sets, dtype=np.int64)
    total = np.zeros(n_sets)
    for start in range(0, n_sets, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, n_sets), dtype=np.int64)
        contains = (masks[:, None] & tx_masks[None, :]) == masks[:, None]
        members = ((masks[:, None] >> np.arange(m)) & 1).astype(np.float64)
        # u(X, t) / tu(t), summed over the items of X, for every (X, t)
        occupancy = members @ share.T
        sup[start:start + len(masks)] = contains.sum(axis=1)
        total[start:start + len(masks)] = np.where(contains, occupancy, 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        uo = np.where(sup > 0, total / np.maximum(sup, 1), np.nan)
    return Lattice(items, sup, uo)


def enumerate_all(
    db: QuantDatabase,
    ptable: ProfitTable,
    alpha: float,
    beta: float,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> OracleResult:
    params = MiningParams.from_thresholds(alpha, beta, db.n)
    lattice = evaluate_lattice(db, ptable, max_items)
    return OracleResult(lattice.select(params.minsup_count, params.beta), len(lattice.sup) - 1)


def uo_brute(itemset: Iterable[Item], db: QuantDatabase, ptable: ProfitTable) -> tuple[int, Optional[float]]:
    """Support and utility occupancy of one itemset; ``(0, None)`` if unsupported."""
    itemset = set(itemset)
    shares = [
        itemset_utility_in_tx(itemset, t, ptable) / t.tu
        for t in db
        if all(i in t for i in itemset)
    ]
    if not shares:
        return 0, None
    return len(shares), sum(shares) / len(shares)
