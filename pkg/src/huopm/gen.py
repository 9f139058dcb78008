"""Seeded synthetic quantitative databases.

Random numbers come from numpy's PCG64 bit generator seeded with the given
64-bit integer, so a seed yields the same files on every platform. Draws
happen in this order:

1. one profit per item ``i1 .. iN``, uniform in ``[low, high]`` and rounded
   to cents (kept inside the range);
2. per transaction, a Poisson(avg_len) length clamped to ``[1, n_items]``,
   that many distinct items chosen uniformly, then one quantity per chosen
   item, uniform in ``[1, max_quantity]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from huopm.datamodel import ProfitTable, QuantDatabase
from huopm.errors import ConfigError


@dataclass(frozen=True)
class GenParams:
    n_transactions: int = 100
    n_items: int = 10
    avg_len: float = 4.0
    max_quantity: int = 5
    profit_range: tuple[float, float] = (1.0, 10.0)
    seed: int = 0

    def __post_init__(self):
        if self.n_transactions < 1:
            raise ConfigError("n_transactions must be at least 1")
        if self.n_items < 1:
            raise ConfigError("n_items must be at least 1")
        if not 1 <= self.avg_len <= self.n_items:
            raise ConfigError(f"avg_len must lie in [1, n_items={self.n_items}], got {self.avg_len}")
        if self.max_quantity < 1:
            raise ConfigError("max_quantity must be at least 1")
        low, high = self.profit_range
        if not (low > 0 and high >= low):
            raise ConfigError(f"profit range must satisfy 0 < low <= high, got {self.profit_range}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


def generate(params: GenParams) -> tuple[QuantDatabase, ProfitTable]:
    rng = np.random.Generator(np.random.PCG64(params.seed))
    low, high = params.profit_range
    names = [f"i{k}" for k in range(1, params.n_items + 1)]
    raw = rng.uniform(low, high, size=params.n_items)
    profits = np.clip(np.round(raw, 2), low, high)
    ptable = ProfitTable({name: float(p) for name, p in zip(names, profits)})

    rows = []
    for _ in range(params.n_transactions):
        length = int(min(max(rng.poisson(params.avg_len), 1), params.n_items))
        chosen = np.sort(rng.choice(params.n_items, size=length, replace=False))
        quantities = rng.integers(1, params.max_quantity, size=length, endpoint=True)
        rows.append([(names[c], int(q)) for c, q in zip(chosen, quantities)])
    return QuantDatabase.from_rows(rows, ptable), ptable
