"""Utility-occupancy lists and their per-pattern summaries.

A UO-list stores, for every transaction supporting a pattern, the pattern's
utility occupancy (its share of the transaction utility) and its remaining
utility occupancy (the share held by items ranked after the pattern's last
item). The FU-table keeps the support and the two column sums, so averages
are ``sum / sup``. Extensions are built by joining two sibling lists, never
by rescanning the database.

Columns shorter than ``SMALL_LIST`` entries are plain Python lists and are
joined by a two-finger merge; longer ones are numpy arrays joined with
``searchsorted``. Both representations are read-only by convention.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from huopm.datamodel import Item
from huopm.errors import ContractError

# Below this length numpy's per-call overhead outweighs vectorisation.
SMALL_LIST = 48


class UOEntry(NamedTuple):
    tid: int
    uo: float
    ruo: float


class UOList(NamedTuple):
    """Columns ``tids`` (strictly ascending), ``uo`` and ``ruo``.

    ``pattern`` holds the items in the active total order, so
    ``pattern[-1]`` is the item extensions are appended after.
    """

    pattern: tuple[Item, ...]
    tids: Sequence[int]
    uo: Sequence[float]
    ruo: Sequence[float]

    @classmethod
    def from_columns(cls, pattern, tids, uo, ruo) -> "UOList":
        """Store the columns in the representation suited to their length."""
        if len(tids) < SMALL_LIST:
            as_list = lambda c: c.tolist() if isinstance(c, np.ndarray) else list(c)  # noqa: E731
            return cls(tuple(pattern), as_list(tids), as_list(uo), as_list(ruo))
        return cls(
            tuple(pattern),
            np.asarray(tids, dtype=np.int64),
            np.asarray(uo, dtype=np.float64),
            np.asarray(ruo, dtype=np.float64),
        )

    @classmethod
    def from_entries(cls, pattern: Iterable[Item], entries: Iterable[tuple[int, float, float]]) -> "UOList":
        rows = list(entries)
        tids = [int(r[0]) for r in rows]
        if any(a >= b for a, b in zip(tids, tids[1:])):
            raise ContractError("UO-list tids must be strictly ascending")
        return cls.from_columns(pattern, tids, [float(r[1]) for r in rows], [float(r[2]) for r in rows])

    def __len__(self) -> int:
        return len(self.tids)

    def entries(self) -> list[UOEntry]:
        cols = [c.tolist() if isinstance(c, np.ndarray) else c for c in (self.tids, self.uo, self.ruo)]
        return [UOEntry(*row) for row in zip(*cols)]

    def summarize(self) -> "FUTable":
        total = np.sum if isinstance(self.uo, np.ndarray) else sum
        return FUTable(self.pattern, len(self), float(total(self.uo)), float(total(self.ruo)))

    def to_csv(self) -> str:
        """Debug dump, one ``tid,uo,ruo`` row per entry after a header."""
        rows = ["tid,uo,ruo"] + [f"{t},{u!r},{r!r}" for t, u, r in self.entries()]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, pattern: Iterable[Item], text: str) -> "UOList":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if lines and lines[0].strip() == "tid,uo,ruo":
            lines = lines[1:]
        rows = []
        for ln in lines:
            tid, uo, ruo = ln.split(",")
            rows.append((int(tid), float(uo), float(ruo)))
        return cls.from_entries(pattern, rows)


class FUTable(NamedTuple):
    name: tuple[Item, ...]
    sup: int
    sum_uo: float
    sum_ruo: float


class Node(NamedTuple):
    """A pattern's UO-list together with its FU-table."""

    uol: UOList
    fut: FUTable

    @property
    def pattern(self) -> tuple[Item, ...]:
        return self.uol.pattern

    @property
    def sup(self) -> int:
        return self.fut.sup


def make_node(uol: UOList) -> Node:
    return Node(uol, uol.summarize())


def utility_occupancy(fut: FUTable) -> float:
    if fut.sup < 1:
        raise ContractError(f"utility occupancy of {fut.name} is undefined: support is 0")
    return fut.sum_uo / fut.sup


def remaining_uo(fut: FUTable) -> float:
    if fut.sup < 1:
        raise ContractError(f"remaining utility occupancy of {fut.name} is undefined: support is 0")
    return fut.sum_ruo / fut.sup


def construct(
    prefix: Optional[Node | UOList],
    xa: Node,
    xb: Node,
    minsup_count: int,
    *,
    remaining_support: bool = True,
) -> Optional[Node]:
    """Join the sibling extensions ``xa`` and ``xb`` of ``prefix``.

    ``xa``'s last item must precede ``xb``'s in the total order. The prefix
    list is required exactly when ``xa`` has two or more items, because the
    shared prefix's occupancy is then counted in both parents and must be
    subtracted once.

    With ``remaining_support`` on, the join is abandoned (``None``) as soon
    as the entries of ``xa`` still unmatched cannot lift the support to
    ``minsup_count``.
    """
    pa, pb = xa.uol.pattern, xb.uol.pattern
    if len(pa) != len(pb) or pa[:-1] != pb[:-1] or pa[-1] == pb[-1]:
        raise ContractError(f"{pa} and {pb} are not distinct extensions of one prefix")
    prefix_uol = prefix.uol if isinstance(prefix, Node) else prefix
    if len(pa) >= 2:
        if prefix_uol is None:
            raise ContractError(f"joining {pa} and {pb} needs the UO-list of {pa[:-1]}")
        if prefix_uol.pattern != pa[:-1]:
            raise ContractError(f"prefix {prefix_uol.pattern} does not match {pa[:-1]}")
    elif prefix_uol is not None and len(prefix_uol.pattern) > 0:
        raise ContractError("1-item extensions share the empty prefix")
    else:
        prefix_uol = None

    pattern = pa + (pb[-1],)
    a, b = xa.uol, xb.uol
    small = isinstance(a.tids, list) and isinstance(b.tids, list)
    if small and (prefix_uol is None or isinstance(prefix_uol.tids, list)):
        return _merge_small(pattern, prefix_uol, a, b, minsup_count if remaining_support else 0)
    return _merge_vector(pattern, prefix_uol, a, b, minsup_count if remaining_support else 0)


def _merge_small(pattern, prefix: Optional[UOList], a: UOList, b: UOList, minsup: int) -> Optional[Node]:
    a_tids, a_uo = a.tids, a.uo
    b_tids, b_uo, b_ruo = b.tids, b.uo, b.ruo
    nb = len(b_tids)
    if prefix is not None:
        p_tids, p_uo = prefix.tids, prefix.uo
        np_ = len(p_tids)
    tids, uos, ruos = [], [], []
    # Working copy of a's support; the stored FU-table is never touched.
    left = len(a_tids)
    j = k = 0
    for i, tid in enumerate(a_tids):
        while j < nb and b_tids[j] < tid:
            j += 1
        if j < nb and b_tids[j] == tid:
            uo = a_uo[i] + b_uo[j]
            if prefix is not None:
                while k < np_ and p_tids[k] < tid:
                    k += 1
                if k == np_ or p_tids[k] != tid:
                    raise ContractError(f"prefix {prefix.pattern} is missing transaction {tid}")
                uo -= p_uo[k]
            tids.append(tid)
            uos.append(uo)
            ruos.append(b_ruo[j])
            j += 1
        else:
            left -= 1
            if left < minsup:
                return None
    return Node(UOList(pattern, tids, uos, ruos), FUTable(pattern, len(tids), sum(uos), sum(ruos)))


def _merge_vector(pattern, prefix: Optional[UOList], a: UOList, b: UOList, minsup: int) -> Optional[Node]:
    a_tids, b_tids = np.asarray(a.tids), np.asarray(b.tids)
    if len(b_tids) == 0:
        hit = np.zeros(len(a_tids), dtype=bool)
        pos = np.zeros(len(a_tids), dtype=np.intp)
    else:
        pos = np.searchsorted(b_tids, a_tids)
        pos[pos == len(b_tids)] = 0
        hit = b_tids[pos] == a_tids
    sup = int(np.count_nonzero(hit))
    # The sequential countdown would end at exactly the matched count, so
    # checking it here, before any column is built, prunes the same joins.
    if sup < minsup:
        return None
    matched = pos[hit]
    tids = a_tids[hit]
    uo = np.asarray(a.uo)[hit] + np.asarray(b.uo)[matched]
    if prefix is not None:
        p_tids = np.asarray(prefix.tids)
        ppos = np.searchsorted(p_tids, tids)
        if sup and (ppos[-1] >= len(p_tids) or np.any(p_tids[ppos] != tids)):
            raise ContractError(f"prefix {prefix.pattern} is missing transactions of {pattern[:-1]}")
        uo = uo - np.asarray(prefix.uo)[ppos]
    ruo = np.asarray(b.ruo)[matched]
    fut = FUTable(pattern, sup, float(uo.sum()), float(ruo.sum()))
    return Node(UOList.from_columns(pattern, tids, uo, ruo), fut)
