"""Mining of high utility occupancy patterns from quantitative databases."""

from huopm.datamodel import (
    Pattern,
    ProfitTable,
    QuantDatabase,
    QuantTransaction,
    parse_profit_table,
    parse_transactions,
    serialize_patterns,
)
from huopm.errors import ConfigError, ContractError, FormatError, HuopmError, ItemAbsentError
from huopm.oracle import enumerate_all
from huopm.preprocess import OrderPolicy
from huopm.search import SearchConfig, SearchStats, mine

__all__ = [
    "ConfigError",
    "ContractError",
    "FormatError",
    "HuopmError",
    "ItemAbsentError",
    "OrderPolicy",
    "Pattern",
    "ProfitTable",
    "QuantDatabase",
    "QuantTransaction",
    "SearchConfig",
    "SearchStats",
    "enumerate_all",
    "mine",
    "parse_profit_table",
    "parse_transactions",
    "serialize_patterns",
]
