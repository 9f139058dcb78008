import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from huopm.datamodel import ProfitTable, QuantDatabase, parse_transactions
from huopm.errors import ConfigError
from huopm.gen import GenParams, generate
from huopm.preprocess import (
    MiningParams,
    OrderPolicy,
    build_initial_uolists,
    build_order,
    frequent_items,
    minsup_count,
    scan_stats,
)


def test_scan_stats_running_example(db):
    stats = scan_stats(db)
    assert stats.sup == {"a": 5, "b": 5, "c": 8, "d": 7, "e": 4}
    assert stats.twu["e"] == 49 + 58 + 61 + 42 == 210
    assert stats.n_transactions == 10
    assert stats.total_utility == 443


def test_scan_stats_single_transaction(ptable):
    db = parse_transactions("a:2 c:4 d:7", ptable)
    stats = scan_stats(db)
    assert stats.sup == {"a": 1, "c": 1, "d": 1}
    assert set(stats.twu.values()) == {65}


def test_minsup_count_uses_decimal_alpha():
    assert minsup_count(0.3, 10) == 3
    assert minsup_count(0.2, 10) == 2
    assert minsup_count(0.25, 10) == 3
    assert minsup_count(1.0, 7) == 7
    assert minsup_count(0.07, 100) == 7


def test_mining_params_validation():
    assert MiningParams.from_thresholds(0.3, 0.3, 10).minsup_count == 3
    for alpha, beta in [(0, 0.3), (1.1, 0.3), (0.3, 0), (0.3, 1.5), (-0.1, 0.5)]:
        with pytest.raises(ConfigError):
            MiningParams.from_thresholds(alpha, beta, 10)
    with pytest.raises(ConfigError, match="at least 2"):
        MiningParams.from_thresholds(0.1, 0.3, 10)


def test_frequent_items(db):
    stats = scan_stats(db)
    assert frequent_items(stats, MiningParams.from_thresholds(0.3, 0.3, 10)) == {"a", "b", "c", "d", "e"}
    assert frequent_items(stats, MiningParams.from_thresholds(0.8, 0.3, 10)) == {"c"}
    assert frequent_items(stats, MiningParams.from_thresholds(0.9, 0.3, 10)) == set()


@pytest.mark.parametrize(
    "policy, expected",
    [
        (OrderPolicy.SUP_ASC, "eabdc"),
        (OrderPolicy.SUP_DESC, "cdabe"),
        (OrderPolicy.LEXI, "abcde"),
    ],
)
def test_build_order(db, policy, expected):
    order = build_order(scan_stats(db), policy)
    assert "".join(order.sorted("abcde")) == expected
    assert sorted(order.rank.values()) == list(range(5))


def test_twu_orders_follow_key(db):
    stats = scan_stats(db)
    asc = build_order(stats, "twu-asc").sorted(stats.sup)
    desc = build_order(stats, "twu-desc").sorted(stats.sup)
    assert [stats.twu[i] for i in asc] == sorted(stats.twu.values())
    assert [stats.twu[i] for i in desc] == sorted(stats.twu.values(), reverse=True)


def test_order_single_item(ptable):
    order = build_order(scan_stats(parse_transactions("a:1", ptable)))
    assert order.rank == {"a": 0}


def initial(db, ptable, items="abcde", policy=OrderPolicy.SUP_ASC):
    order = build_order(scan_stats(db), policy)
    return build_initial_uolists(db, set(items), order, ptable)


def test_initial_list_of_e(db, ptable):
    e = initial(db, ptable)["e"]
    assert e.uol.tids == [5, 6, 8, 10]
    assert e.uol.uo == pytest.approx([0.1837, 0.6207, 0.5902, 0.2143], abs=1e-4)
    assert e.uol.ruo == pytest.approx([0.8163, 0.3793, 0.4098, 0.7857], abs=1e-4)
    assert e.fut.sup == 4
    assert e.fut.sum_uo == pytest.approx(1.6089, abs=1e-4)
    assert e.fut.sum_uo / e.fut.sup == pytest.approx(0.4022, abs=1e-4)
    assert e.fut.sum_ruo / e.fut.sup == pytest.approx(0.5978, abs=1e-4)


def test_initial_ruo_of_a_in_t5(db, ptable):
    a = initial(db, ptable)["a"]
    ruo = dict(zip(a.uol.tids, a.uol.ruo))
    assert ruo[5] == pytest.approx((6 + 5 + 22) / 49)
    assert ruo[5] == pytest.approx(0.6735, abs=1e-4)


def test_last_item_has_no_remaining(db, ptable):
    c = initial(db, ptable)["c"]
    assert all(r == 0 for r in c.uol.ruo)


def test_lists_come_in_order(db, ptable):
    assert list(initial(db, ptable)) == list("eabdc")


def test_infrequent_items_excluded_from_ruo(db, ptable):
    # without d, ruo(a, T5) loses u(d, T5) = 5
    a = initial(db, ptable, items="abce")["a"]
    assert dict(zip(a.uol.tids, a.uol.ruo))[5] == pytest.approx((6 + 22) / 49)


def _check_lists(db, nodes):
    tu = {t.tid: t.tu for t in db}
    for node in nodes.values():
        assert node.fut.sup == len(node.uol)
        assert node.fut.sum_uo == pytest.approx(sum(node.uol.uo), abs=1e-9)
        assert node.fut.sum_ruo == pytest.approx(sum(node.uol.ruo), abs=1e-9)
        assert list(node.uol.tids) == sorted(set(node.uol.tids))
        for tid, uo, ruo in node.uol.entries():
            assert 0 < uo <= 1
            assert 0 <= ruo < 1
            assert uo + ruo <= 1 + 1e-9
            assert tid in tu


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(list(OrderPolicy)))
def test_initial_list_invariants(seed, policy):
    db, ptable = generate(GenParams(n_transactions=25, n_items=9, avg_len=4, seed=seed))
    order = build_order(scan_stats(db), policy)
    nodes = build_initial_uolists(db, db.items(), order, ptable)
    _check_lists(db, nodes)
    # occupancies of all items of a transaction add up to one
    totals = {}
    for node in nodes.values():
        for tid, uo, _ in node.uol.entries():
            totals[tid] = totals.get(tid, 0.0) + uo
    assert all(math.isclose(v, 1.0, rel_tol=1e-9) for v in totals.values())
    # with every item kept, the first item of each transaction covers it fully
    for t in db:
        first = order.sorted(t.item_names())[0]
        entry = next(e for e in nodes[first].uol.entries() if e.tid == t.tid)
        assert entry.uo + entry.ruo == pytest.approx(1.0)


def test_large_lists_switch_to_arrays():
    db, ptable = generate(GenParams(n_transactions=400, n_items=5, avg_len=3, seed=3))
    order = build_order(scan_stats(db))
    nodes = build_initial_uolists(db, db.items(), order, ptable)
    assert all(isinstance(n.uol.tids, np.ndarray) for n in nodes.values())
    _check_lists(db, nodes)
