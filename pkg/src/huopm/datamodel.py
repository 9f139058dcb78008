"""Quantitative transaction databases, profit tables and their text formats.

Transactions file: one transaction per line, whitespace separated
``item:quantity`` tokens. Profit file: one ``item profit`` pair per line.
In both, blank lines and lines starting with ``#`` are ignored.

Pattern output: one line per pattern, ``items<TAB>sup<TAB>uo`` with items in
lexicographic order separated by single spaces and uo printed with four
decimals. Lines are sorted by the item string.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, TextIO

from huopm.errors import FormatError, ItemAbsentError

Item = str


def _lines(text: str | TextIO) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, stripped_line)`` for every meaningful line."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def check_item_name(name: str, line: int | None = None) -> None:
    if not name or any(ch.isspace() for ch in name) or ":" in name:
        raise FormatError(f"invalid item name {name!r}", line)


def format_number(value: float) -> str:
    """Shortest text that parses back to exactly ``value``."""
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


@dataclass(frozen=True)
class ProfitTable:
    """Unit profit of every item. All profits are strictly positive."""

    entries: Mapping[Item, float]

    def __post_init__(self):
        for item, profit in self.entries.items():
            check_item_name(item)
            if not (profit > 0 and math.isfinite(profit)):
                raise FormatError(f"profit of {item!r} must be positive, got {profit!r}")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __getitem__(self, item: Item) -> float:
        try:
            return self.entries[item]
        except KeyError:
            raise ItemAbsentError(f"item {item!r} has no unit profit") from None

    def __contains__(self, item: object) -> bool:
        return item in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Item]:
        return iter(self.entries)

    def items(self):
        return self.entries.items()


@dataclass(frozen=True)
class QuantTransaction:
    """One transaction: distinct items with positive integer quantities.

    ``tu`` caches the transaction utility, the sum of quantity times unit
    profit over all items.
    """

    tid: int
    items: tuple[tuple[Item, int], ...]
    tu: float
    _quantities: Mapping[Item, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        quantities = dict(self.items)
        if len(quantities) != len(self.items):
            raise FormatError(f"transaction {self.tid} repeats an item")
        if any(q < 1 for q in quantities.values()):
            raise FormatError(f"transaction {self.tid} has a quantity below 1")
        object.__setattr__(self, "_quantities", MappingProxyType(quantities))

    @classmethod
    def build(cls, tid: int, items: Iterable[tuple[Item, int]], ptable: ProfitTable) -> "QuantTransaction":
        items = tuple(items)
        tu = math.fsum(q * ptable[i] for i, q in items)
        return cls(tid, items, tu)

    def quantity(self, item: Item) -> int:
        try:
            return self._quantities[item]
        except KeyError:
            raise ItemAbsentError(f"item {item!r} does not occur in transaction {self.tid}") from None

    def __contains__(self, item: object) -> bool:
        return item in self._quantities

    def item_names(self) -> tuple[Item, ...]:
        return tuple(i for i, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class QuantDatabase:
    transactions: tuple[QuantTransaction, ...]

    def __post_init__(self):
        object.__setattr__(self, "transactions", tuple(self.transactions))
        if not self.transactions:
            raise FormatError("database has no transactions")
        tids = [t.tid for t in self.transactions]
        if any(a >= b for a, b in zip(tids, tids[1:])):
            raise FormatError("transaction ids must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.transactions)

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self) -> Iterator[QuantTransaction]:
        return iter(self.transactions)

    def items(self) -> set[Item]:
        return {i for t in self.transactions for i, _ in t.items}

    @property
    def total_utility(self) -> float:
        return math.fsum(t.tu for t in self.transactions)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[tuple[Item, int]]], ptable: ProfitTable) -> "QuantDatabase":
        """Build a database from in-memory rows, assigning tids 1..n."""
        return cls(tuple(QuantTransaction.build(tid, row, ptable) for tid, row in enumerate(rows, start=1)))


@dataclass(frozen=True, order=True)
class Pattern:
    """A mined itemset with its support count and average utility occupancy.

    ``items`` is kept in lexicographic order.
    """

    items: tuple[Item, ...]
    sup: int
    uo: float

    @property
    def label(self) -> str:
        return " ".join(self.items)


def parse_profit_table(text: str | TextIO) -> ProfitTable:
    entries: dict[Item, float] = {}
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<item> <profit>', got {line!r}", lineno)
        name, raw = parts
        check_item_name(name, lineno)
        if name in entries:
            raise FormatError(f"duplicate item {name!r}", lineno)
        try:
            profit = float(raw)
        except ValueError:
            raise FormatError(f"unparsable profit {raw!r}", lineno) from None
        if not (profit > 0 and math.isfinite(profit)):
            raise FormatError(f"profit must be positive, got {raw!r}", lineno)
        entries[name] = profit
    return ProfitTable(entries)


def parse_transactions(text: str | TextIO, ptable: ProfitTable) -> QuantDatabase:
    transactions = []
    for lineno, line in _lines(text):
        items: list[tuple[Item, int]] = []
        seen: set[Item] = set()
        for token in line.split():
            name, sep, raw = token.rpartition(":")
            if not sep or not name:
                raise FormatError(f"expected 'item:quantity', got {token!r}", lineno)
            check_item_name(name, lineno)
            if name not in ptable:
                raise FormatError(f"unknown item {name!r} (not in profit table)", lineno)
            if name in seen:
                raise FormatError(f"duplicate item {name!r}", lineno)
            if not raw.isdigit():
                raise FormatError(f"quantity of {name!r} is not a positive integer: {raw!r}", lineno)
            quantity = int(raw)
            if quantity < 1:
                raise FormatError(f"quantity of {name!r} must be at least 1, got {quantity}", lineno)
            seen.add(name)
            items.append((name, quantity))
        transactions.append(QuantTransaction.build(len(transactions) + 1, items, ptable))
    return QuantDatabase(tuple(transactions))


def serialize_transactions(db: QuantDatabase) -> str:
    return "".join(" ".join(f"{i}:{q}" for i, q in t.items) + "\n" for t in db)


def serialize_profit_table(ptable: ProfitTable) -> str:
    return "".join(f"{item} {format_number(profit)}\n" for item, profit in ptable.items())


def item_utility(item: Item, t: QuantTransaction, ptable: ProfitTable) -> float:
    return t.quantity(item) * ptable[item]


def itemset_utility_in_tx(itemset: Iterable[Item], t: QuantTransaction, ptable: ProfitTable) -> float:
    return math.fsum(item_utility(i, t, ptable) for i in itemset)


def serialize_patterns(patterns: Iterable[Pattern]) -> str:
    # '.4f' rounds the exact binary value, i.e. half-to-even on exact ties.
    lines = sorted(f"{' '.join(sorted(p.items))}\t{p.sup}\t{p.uo:.4f}" for p in patterns)
    return "".join(line + "\n" for line in lines)


def parse_patterns(text: str | TextIO) -> list[Pattern]:
    """Read back the output of :func:`serialize_patterns`."""
    patterns = []
    for lineno, line in _lines(text):
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        try:
            patterns.append(Pattern(tuple(parts[0].split()), int(parts[1]), float(parts[2])))
        except ValueError:
            raise FormatError(f"bad pattern line {line!r}", lineno) from None
    return patterns
