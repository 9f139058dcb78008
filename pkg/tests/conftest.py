from pathlib import Path

import pytest

from huopm.datamodel import parse_profit_table, parse_transactions

DATA = Path(__file__).resolve().parents[1] / "data" / "running_example"
TRANSACTIONS = DATA / "transactions.txt"
PROFITS = DATA / "profits.txt"

# Known result on the running example at alpha = 0.3, beta = 0.3
PATTERNS_A30_B30 = {
    ("c",): (8, 0.6468),
    ("e",): (4, 0.4022),
    ("a", "b"): (3, 0.4334),
    ("a", "c"): (4, 0.8273),
    ("a", "d"): (5, 0.3609),
    ("b", "c"): (3, 0.6554),
    ("b", "d"): (4, 0.3620),
    ("c", "d"): (5, 0.6881),
    ("c", "e"): (3, 0.8776),
    ("a", "b", "d"): (3, 0.4959),
    ("a", "c", "d"): (4, 0.8972),
}

# Ten highest-occupancy patterns at alpha = 0.2, beta = 0.5
TOP10_A20_B50 = [
    (("a", "b", "c", "d"), 2, 0.9081),
    (("a", "c", "d"), 4, 0.8972),
    (("c", "e"), 3, 0.8776),
    (("a", "b", "c"), 2, 0.8308),
    (("a", "c"), 4, 0.8273),
    (("a", "b", "d", "e"), 2, 0.7755),
    (("a", "b", "e"), 2, 0.7081),
    (("a", "d", "e"), 2, 0.6979),
    (("c", "d"), 5, 0.6881),
    (("b", "c"), 3, 0.6554),
]


@pytest.fixture(scope="session")
def ptable():
    return parse_profit_table(PROFITS.read_text())


@pytest.fixture(scope="session")
def db(ptable):
    return parse_transactions(TRANSACTIONS.read_text(), ptable)


def tx(db, tid):
    return next(t for t in db if t.tid == tid)
